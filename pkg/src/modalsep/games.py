"""Bisimulation games on pointed models and the class comparison game.

Model game: each round Spoiler moves along an edge on one side, Verifier
answers along an edge on the other. Spoiler wins when the current states
disagree on a proposition or Verifier cannot answer; Verifier wins when
Spoiler cannot move or the round bound is reached. In the class game,
Verifier first picks one model from each class and then plays the model
game, unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

from .errors import IllegalMoveError
from .kripke import ModelClass, PointedModel, as_class

__all__ = [
    "VERIFIER", "SPOILER", "LEFT", "RIGHT",
    "GamePosition", "ChooseModels", "SpoilerStep", "VerifierStep", "Verdict",
    "ClassGameResult", "Strategy",
    "initial_position", "class_position", "verdict", "legal_moves", "step",
    "game_winner", "class_game_winner", "extract_strategy", "best_move", "spoiler_rounds",
]

VERIFIER = "verifier"
SPOILER = "spoiler"
LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class ChooseModels:
    i: int
    j: int


@dataclass(frozen=True)
class SpoilerStep:
    side: str
    successor: str


@dataclass(frozen=True)
class VerifierStep:
    successor: str


@dataclass(frozen=True)
class Verdict:
    winner: str
    reason: str


@dataclass(frozen=True)
class GamePosition:
    """A game state. ``pending`` holds Spoiler's move while Verifier must answer."""

    phase: str                       # "class-choice" or "model-game"
    classes: tuple | None = None
    left: PointedModel | None = None
    right: PointedModel | None = None
    pair: tuple | None = None
    rounds: int = 0
    bound: int | None = None
    pending: SpoilerStep | None = None

    @property
    def to_move(self) -> str:
        if self.phase == "class-choice" or self.pending is not None:
            return VERIFIER
        return SPOILER

    def as_dict(self) -> dict:
        if self.phase == "class-choice":
            return {"phase": self.phase, "to_move": self.to_move,
                    "sizes": [len(self.classes[0]), len(self.classes[1])]}
        out = {"phase": self.phase, "to_move": self.to_move,
               "left": self.pair[0], "right": self.pair[1],
               "rounds": self.rounds,
               "bound": "unbounded" if self.bound is None else self.bound}
        if self.pending is not None:
            out["pending"] = {"side": self.pending.side, "state": self.pending.successor}
        return out


def initial_position(p1: PointedModel, p2: PointedModel, rounds: int | None = None) -> GamePosition:
    if rounds is not None and rounds < 0:
        raise ValueError("round bound must be non-negative")
    return GamePosition("model-game", left=p1, right=p2, pair=(p1.point, p2.point), bound=rounds)


def class_position(c1, c2, rounds: int | None = None) -> GamePosition:
    return GamePosition("class-choice", classes=(as_class(c1), as_class(c2)), bound=rounds)


def _succ(pm, state):
    return pm.model.successors(state)


def verdict(pos: GamePosition) -> Verdict | None:
    """The result if ``pos`` is terminal, else None."""
    if pos.phase == "class-choice":
        if not pos.classes[0] or not pos.classes[1]:
            return Verdict(SPOILER, "verifier has no pair of models to choose")
        return None
    s, t = pos.pair
    if pos.pending is not None:
        other = pos.right if pos.pending.side == LEFT else pos.left
        state = t if pos.pending.side == LEFT else s
        if not _succ(other, state):
            return Verdict(SPOILER, "verifier has no reply")
        return None
    if pos.left.model.val[s] != pos.right.model.val[t]:
        return Verdict(SPOILER, "valuations differ")
    if pos.bound is not None and pos.rounds >= pos.bound:
        return Verdict(VERIFIER, "round bound reached")
    if not _succ(pos.left, s) and not _succ(pos.right, t):
        return Verdict(VERIFIER, "spoiler has no move")
    return None


def legal_moves(pos: GamePosition) -> list:
    if verdict(pos) is not None:
        return []
    if pos.phase == "class-choice":
        c1, c2 = pos.classes
        return [ChooseModels(i, j) for i in range(len(c1)) for j in range(len(c2))]
    s, t = pos.pair
    if pos.pending is None:
        return ([SpoilerStep(LEFT, x) for x in _succ(pos.left, s)]
                + [SpoilerStep(RIGHT, y) for y in _succ(pos.right, t)])
    if pos.pending.side == LEFT:
        return [VerifierStep(y) for y in _succ(pos.right, t)]
    return [VerifierStep(x) for x in _succ(pos.left, s)]


def step(pos: GamePosition, move) -> GamePosition | Verdict:
    """Apply ``move``; returns the next position, or the verdict if it is terminal.

    Raises:
        IllegalMoveError: naming the violated condition.
    """
    done = verdict(pos)
    if done is not None:
        raise IllegalMoveError(f"game is over: {done.winner} won ({done.reason})")
    if pos.phase == "class-choice":
        if not isinstance(move, ChooseModels):
            raise IllegalMoveError("verifier must choose a model from each class first")
        c1, c2 = pos.classes
        if not (0 <= move.i < len(c1) and 0 <= move.j < len(c2)):
            raise IllegalMoveError(f"choice ({move.i}, {move.j}) is out of range")
        nxt = initial_position(c1[move.i], c2[move.j], pos.bound)
    elif pos.pending is None:
        if not isinstance(move, SpoilerStep):
            raise IllegalMoveError("it is spoiler's turn")
        if move.side not in (LEFT, RIGHT):
            raise IllegalMoveError(f"side must be {LEFT!r} or {RIGHT!r}")
        pm, state = (pos.left, pos.pair[0]) if move.side == LEFT else (pos.right, pos.pair[1])
        if move.successor not in _succ(pm, state):
            raise IllegalMoveError(f"{move.successor!r} is not a successor of {state!r} on the {move.side}")
        nxt = replace(pos, pending=move)
    else:
        if not isinstance(move, VerifierStep):
            raise IllegalMoveError("it is verifier's turn to answer")
        s, t = pos.pair
        if pos.pending.side == LEFT:
            if move.successor not in _succ(pos.right, t):
                raise IllegalMoveError(f"{move.successor!r} is not a successor of {t!r} on the right")
            pair = (pos.pending.successor, move.successor)
        else:
            if move.successor not in _succ(pos.left, s):
                raise IllegalMoveError(f"{move.successor!r} is not a successor of {s!r} on the left")
            pair = (move.successor, pos.pending.successor)
        nxt = replace(pos, pair=pair, rounds=pos.rounds + 1, pending=None)
    return verdict(nxt) or nxt


# --------------------------------------------------------------------------
# solving

@lru_cache(maxsize=4096)
def _solve(p1: PointedModel, p2: PointedModel) -> dict:
    """Least round count at which Spoiler wins from each state pair (None: never).

    Backward induction over the product: Verifier survives 0 rounds from
    pairs with equal valuations, and k+1 rounds from those where every
    Spoiler move has an answer surviving k rounds.
    """
    m1, m2 = p1.model, p2.model
    pairs = [(s, t) for s in m1.states for t in m2.states]
    alive = {(s, t) for s, t in pairs if m1.val[s] == m2.val[t]}
    lose = {pt: 0 for pt in pairs if pt not in alive}
    k = 0
    while True:
        k += 1
        nxt = set()
        for s, t in alive:
            ss, ts = m1.successors(s), m2.successors(t)
            if all(any((x, y) in alive for y in ts) for x in ss) and \
                    all(any((x, y) in alive for x in ss) for y in ts):
                nxt.add((s, t))
        for pt in alive - nxt:
            lose[pt] = k
        if nxt == alive:
            break
        alive = nxt
    return {pt: lose.get(pt) for pt in pairs}


def spoiler_rounds(p1: PointedModel, p2: PointedModel):
    """Least k such that Spoiler wins the k-round game, or None."""
    return _solve(p1, p2)[(p1.point, p2.point)]


def game_winner(p1: PointedModel, p2: PointedModel, rounds: int | None = None) -> str:
    """Winner of the ``rounds``-round game (``None``: unbounded)."""
    if rounds is not None and rounds < 0:
        raise ValueError("round bound must be non-negative")
    k = spoiler_rounds(p1, p2)
    if k is None or (rounds is not None and rounds < k):
        return VERIFIER
    return SPOILER


@dataclass(frozen=True)
class ClassGameResult:
    winner: str
    opening: ChooseModels | None = None


def class_game_winner(c1, c2) -> ClassGameResult:
    """Verifier wins iff some cross pair lets him survive the unbounded model game."""
    c1, c2 = as_class(c1), as_class(c2)
    for i, m in enumerate(c1):
        for j, n in enumerate(c2):
            if game_winner(m, n) == VERIFIER:
                return ClassGameResult(VERIFIER, ChooseModels(i, j))
    return ClassGameResult(SPOILER)


def _survival(table, pair):
    k = table[pair]
    return float("inf") if k is None else k


def best_move(pos: GamePosition):
    """Optimal move for the player to move, or None at a terminal position.

    Spoiler heads for the pair Verifier survives the shortest; Verifier
    answers into the pair he survives the longest, preferring an answer with
    the same state name (so identical models are mirrored).
    """
    if verdict(pos) is not None:
        return None
    if pos.phase == "class-choice":
        res = class_game_winner(*pos.classes)
        return res.opening or ChooseModels(0, 0)
    table = _solve(pos.left, pos.right)
    s, t = pos.pair
    if pos.pending is None:
        best, score = None, None
        for mv in legal_moves(pos):
            if mv.side == LEFT:
                answers = [(mv.successor, y) for y in _succ(pos.right, t)]
            else:
                answers = [(x, mv.successor) for x in _succ(pos.left, s)]
            worst = max((_survival(table, a) for a in answers), default=-1)
            if score is None or worst < score:
                best, score = mv, worst
        return best
    best, score = None, None
    for mv in legal_moves(pos):
        if pos.pending.side == LEFT:
            a = (pos.pending.successor, mv.successor)
        else:
            a = (mv.successor, pos.pending.successor)
        key = (_survival(table, a), mv.successor == pos.pending.successor)
        if score is None or key > score:
            best, score = mv, key
    return best


@dataclass(frozen=True)
class Strategy:
    """Moves for ``winner`` at every position reachable under it.

    Keys are ``(left_state, right_state, pending)`` with ``pending`` None on
    Spoiler's turns and the pending ``SpoilerStep`` on Verifier's turns. The
    strategy is memoryless, so the round count is not part of the key.
    """

    winner: str
    moves: dict
    rounds: int | None = None

    def move(self, pos: GamePosition):
        return self.moves.get((pos.pair[0], pos.pair[1], pos.pending))


def extract_strategy(p1: PointedModel, p2: PointedModel, rounds: int | None = None) -> Strategy:
    """A winning strategy for whoever wins the ``rounds``-round game."""
    winner = game_winner(p1, p2, rounds)
    moves = {}
    start = initial_position(p1, p2, rounds)
    stack = [start]
    seen = set()
    while stack:
        pos = stack.pop()
        key = (pos.pair[0], pos.pair[1], pos.pending, pos.rounds if rounds is not None else None)
        if key in seen:
            continue
        seen.add(key)
        if verdict(pos) is not None:
            continue
        if pos.to_move == winner:
            mv = best_move(pos)
            moves[(pos.pair[0], pos.pair[1], pos.pending)] = mv
            options = [mv]
        else:
            options = legal_moves(pos)
        for mv in options:
            nxt = step(pos, mv)
            if isinstance(nxt, GamePosition):
                stack.append(nxt)
    return Strategy(winner, moves, rounds)
