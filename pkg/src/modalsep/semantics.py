"""Kripke semantics.

Extensions are Python ints used as bitsets over a model's state indices.
"""

from __future__ import annotations

from .errors import UnknownAtomError
from .kripke import KripkeModel, PointedModel, as_class
from .syntax import And, Atom, Bot, Box, Dia, Formula, Not, Or, Top, atoms

__all__ = [
    "extension", "eval", "evaluate", "class_models", "sep_check",
    "FORWARD", "REVERSE", "definable_atoms", "successor_masks",
]

FORWARD = "forward"
REVERSE = "reverse"


def successor_masks(model: KripkeModel) -> list:
    return [sum(1 << j for j in row) for row in model.succ]


def _check_atoms(f, allowed):
    unknown = sorted(atoms(f) - set(allowed))
    if unknown:
        raise UnknownAtomError(f"proposition {unknown[0]!r} is not in the alphabet {list(allowed)}")


def extension(model: KripkeModel, f: Formula, alphabet=None) -> int:
    """Bitset of the states of ``model`` where ``f`` holds.

    Propositions in ``alphabet`` but not in the model's own alphabet are false
    everywhere; any other unknown proposition is an error.
    """
    allowed = set(model.alphabet) | set(alphabet or ())
    _check_atoms(f, allowed)
    n = len(model.states)
    full = (1 << n) - 1
    succ = successor_masks(model)
    labels = model.labels
    memo = {}

    def ext(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Top):
            r = full
        elif isinstance(g, Bot):
            r = 0
        elif isinstance(g, Atom):
            r = sum(1 << i for i in range(n) if g.name in labels[i])
        elif isinstance(g, Not):
            r = full & ~ext(g.child)
        elif isinstance(g, And):
            r = full
            for c in g.children:
                r &= ext(c)
        elif isinstance(g, Or):
            r = 0
            for c in g.children:
                r |= ext(c)
        elif isinstance(g, Dia):
            e = ext(g.child)
            r = sum(1 << i for i in range(n) if succ[i] & e)
        elif isinstance(g, Box):
            e = ext(g.child)
            r = sum(1 << i for i in range(n) if not succ[i] & ~e)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ext(f)


def eval(p: PointedModel, f: Formula, alphabet=None) -> bool:  # noqa: A001
    """Truth of ``f`` at the point of ``p``."""
    return bool(extension(p.model, f, alphabet) >> p.point_index & 1)


evaluate = eval


def class_models(c, f: Formula, alphabet=None) -> bool:
    """``f`` holds at every member of ``c`` (vacuously true for an empty class)."""
    c = as_class(c)
    alphabet = tuple(alphabet or ()) + c.alphabet
    return all(eval(m, f, alphabet) for m in c)


def sep_check(c1, c2, f: Formula):
    """Polarity in which ``f`` separates the two classes.

    Returns ``"forward"`` if ``f`` holds throughout ``c1`` and fails throughout
    ``c2``, ``"reverse"`` for the mirror case, else ``None``. For two empty
    classes both hold; ``"forward"`` is reported.
    """
    c1, c2 = as_class(c1), as_class(c2)
    alphabet = c1.alphabet + c2.alphabet
    v1 = [eval(m, f, alphabet) for m in c1]
    v2 = [eval(m, f, alphabet) for m in c2]
    if all(v1) and not any(v2):
        return FORWARD
    if not any(v1) and all(v2):
        return REVERSE
    return None


def definable_atoms(model: KripkeModel, depth: int, alphabet=None) -> list:
    """Atoms of the Boolean algebra of depth-bounded extensions, level by level.

    Entry ``d`` lists the minimal nonempty state sets (as bitsets) expressible
    as extensions of formulas of modal depth at most ``d``; every such
    extension is a union of them. Built from generator extensions: the
    propositions, plus ``<>A`` for each atom ``A`` of the previous level
    (``<>`` distributes over unions, and ``[]`` is ``!<>!``).

    The list stops early once a level adds nothing; deeper levels equal the last.
    """
    props = tuple(model.alphabet) + tuple(p for p in (alphabet or ()) if p not in model.alphabet)
    n = len(model.states)
    succ = successor_masks(model)
    labels = model.labels
    base = [sum(1 << i for i in range(n) if p in labels[i]) for p in props]
    full = (1 << n) - 1

    def atoms_of(gens):
        groups = [full] if n else []
        for g in gens:
            split = []
            for grp in groups:
                for part in (grp & g, grp & ~g):
                    if part:
                        split.append(part)
            groups = split
        return sorted(groups, key=lambda m: m & -m)

    levels = [atoms_of(base)]
    for _ in range(depth):
        dia = [sum(1 << i for i in range(n) if succ[i] & a) for a in levels[-1]]
        nxt = atoms_of(base + dia)
        if len(nxt) == len(levels[-1]):
            break
        levels.append(nxt)
    return levels
