"""Command-line entry point: ``modalsep <command> ...``.

Exit codes: 0 on any completed computation (negative verdicts included),
2 usage error, 3 parse/validation error, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bisim, classes, games, oracle
from .errors import IllegalMoveError, ModalSepError, ParseError, ResourceCapError, ValidationError
from .kripke import load_class
from .semantics import class_models, eval as eval_formula
from .syntax import parse_formula

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3, 4

ENV_DEFAULTS = {
    "max_depth": ("MODALSEP_MAX_DEPTH", 4),
    "max_size": ("MODALSEP_MAX_SIZE", None),
    "cap": ("MODALSEP_CAP", oracle.DEFAULT_SEARCH_CAP),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(args, obj, out):
    if args.format == "json":
        out.write(_dump(obj) + "\n")
        return
    for key, value in obj.items():
        if isinstance(value, (dict, list)):
            value = _dump(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        out.write(f"{key}: {value}\n")


def _read(path, stdin):
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _load(args, path, stdin):
    return load_class(_read(path, stdin), args.input_format)


def _load_one(args, path, stdin):
    c = _load(args, path, stdin)
    if len(c) != 1:
        raise ValidationError(f"{path}: expected exactly one model, found {len(c)}")
    return c[0]


def _bound(args, name):
    value = getattr(args, name)
    if value is not None:
        return value
    env, default = ENV_DEFAULTS[name]
    raw = os.environ.get(env)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{env} must be an integer, got {raw!r}") from None


def _rounds(text):
    if text is None or text == "unbounded":
        return None
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("rounds must be a natural number or 'unbounded'") from None
    if k < 0:
        raise argparse.ArgumentTypeError("rounds must be non-negative")
    return k


def _indices(text):
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("subset must be comma-separated indices") from None


def _separation_json(res, key="separable"):
    if res.separable:
        return {key: True, "formula": res.formula.text, "depth": res.depth, "polarity": res.polarity}
    return {key: False, "witness": list(res.witness)}


# --------------------------------------------------------------------------
# commands

def cmd_eval(args, stdin, out):
    c = _load(args, args.model, stdin)
    f = parse_formula(args.formula)
    if len(c) == 1:
        return {"value": eval_formula(c[0], f)}
    values = [eval_formula(m, f, c.alphabet) for m in c]
    return {"values": values, "valid": class_models(c, f)}


def cmd_bisim(args, stdin, out):
    p1, p2 = _load_one(args, args.m1, stdin), _load_one(args, args.m2, stdin)
    if args.depth is not None:
        return {"k_bisimilar": bisim.k_bisimilar(p1, p2, args.depth), "depth": args.depth}
    return {"bisimilar": bisim.bisimilar(p1, p2)}


def cmd_distinguish(args, stdin, out):
    p1, p2 = _load_one(args, args.m1, stdin), _load_one(args, args.m2, stdin)
    res = bisim.distinguishing_formula(p1, p2)
    if res.bisimilar:
        return {"bisimilar": True, "relation": sorted(list(p) for p in res.relation)}
    return {"bisimilar": False, "formula": res.formula.text, "depth": res.depth,
            "polarity": res.polarity}


def cmd_separate(args, stdin, out):
    c1, c2 = _load(args, args.c1, stdin), _load(args, args.c2, stdin)
    return _separation_json(classes.class_separation(c1, c2, args.depth))


def cmd_define(args, stdin, out):
    u = _load(args, args.universe, stdin)
    try:
        res = classes.definable(u, args.subset, args.depth)
    except IndexError as exc:
        raise ValidationError(str(exc)) from None
    return _separation_json(res, "definable")


def cmd_equiv(args, stdin, out):
    c1, c2 = _load(args, args.c1, stdin), _load(args, args.c2, stdin)
    w = classes.class_equiv_witness(c1, c2)
    if w is None:
        return {"equivalent": True}
    return {"equivalent": False,
            "witness": {"formula": w.formula.text, "valid_on": w.valid_on,
                        "unmatched": {"side": w.unmatched[0], "index": w.unmatched[1]}}}


def cmd_lift(args, stdin, out):
    c1, c2 = _load(args, args.c1, stdin), _load(args, args.c2, stdin)
    return {"exists": classes.lift_exists(c1, c2, args.depth),
            "forall": classes.lift_forall(c1, c2, args.depth)}


def cmd_compare(args, stdin, out):
    u = _load(args, args.universe, stdin)
    res = classes.compare_fragments(u, args.d1, args.d2)
    return {"distinguishing": res.distinguishing, "expressive": res.expressive}


def cmd_oracle(args, stdin, out):
    c1, c2 = _load(args, args.c1, stdin), _load(args, args.c2, stdin)
    hit = oracle.oracle_separable(c1, c2, _bound(args, "max_depth"),
                                  _bound(args, "max_size"), _bound(args, "cap"))
    if hit is None:
        return {"separable": False}
    return {"separable": True, "formula": hit.formula.text, "depth": hit.depth,
            "polarity": hit.polarity}


def _move_json(mv):
    if isinstance(mv, games.ChooseModels):
        return {"choose": [mv.i, mv.j]}
    if isinstance(mv, games.SpoilerStep):
        return {"side": mv.side, "state": mv.successor}
    return {"state": mv.successor}


def _parse_move(pos, words):
    if words[0] == "choose" and len(words) == 3:
        try:
            return games.ChooseModels(int(words[1]), int(words[2]))
        except ValueError:
            raise IllegalMoveError("choose takes two integer indices") from None
    if words[0] == "move" and len(words) == 3:
        side, state = words[1], words[2]
        if side not in (games.LEFT, games.RIGHT):
            raise IllegalMoveError(f"side must be {games.LEFT!r} or {games.RIGHT!r}")
        if pos.phase == "model-game" and pos.pending is not None:
            if side == pos.pending.side:
                raise IllegalMoveError(f"verifier must answer on the other side than {side!r}")
            return games.VerifierStep(state)
        return games.SpoilerStep(side, state)
    raise IllegalMoveError("expected 'move <side> <state>', 'choose <i> <j>', 'show' or 'quit'")


def cmd_game(args, stdin, out):
    if args.c1 or args.c2:
        if not (args.c1 and args.c2):
            raise UsageError("class game needs both --c1 and --c2")
        c1, c2 = _load(args, args.c1, stdin), _load(args, args.c2, stdin)
        if args.solve:
            res = games.class_game_winner(c1, c2)
            obj = {"winner": res.winner}
            if res.opening is not None:
                obj["opening"] = [res.opening.i, res.opening.j]
            return obj
        pos = games.class_position(c1, c2, args.rounds)
    else:
        if not (args.m1 and args.m2):
            raise UsageError("model game needs --m1 and --m2 (or --c1 and --c2)")
        p1, p2 = _load_one(args, args.m1, stdin), _load_one(args, args.m2, stdin)
        if args.solve:
            strat = games.extract_strategy(p1, p2, args.rounds)
            obj = {"winner": strat.winner}
            k = games.spoiler_rounds(p1, p2)
            if strat.winner == games.SPOILER:
                obj["within_rounds"] = k
            return obj
        pos = games.initial_position(p1, p2, args.rounds)
    return _play(args, pos, stdin, out)


def _play(args, pos, stdin, out):
    human = args.role

    def say(obj):
        out.write(_dump(obj) + "\n")

    def settle(state):
        if isinstance(state, games.Verdict):
            say({"event": "end", "winner": state.winner, "reason": state.reason})
            return None
        if args.dump:
            say({"event": "position", **state.as_dict()})
        return state

    pos = settle(games.verdict(pos) or pos)
    lines = iter(stdin.readline, "")
    while pos is not None:
        if pos.to_move != human:
            mv = games.best_move(pos)
            say({"event": "move", "player": pos.to_move, **_move_json(mv)})
            pos = settle(games.step(pos, mv))
            continue
        line = next(lines, None)
        if line is None:
            say({"event": "abandoned", **pos.as_dict()})
            break
        words = line.split()
        if not words:
            continue
        if words[0] == "quit":
            say({"event": "abandoned", **pos.as_dict()})
            break
        if words[0] == "show":
            say({"event": "position", **pos.as_dict()})
            continue
        try:
            mv = _parse_move(pos, words)
            nxt = games.step(pos, mv)
        except IllegalMoveError as exc:
            say({"event": "illegal", "reason": str(exc)})
            continue
        say({"event": "move", "player": human, **_move_json(mv)})
        pos = settle(nxt)
    return None


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--input-format", choices=("json", "dsl"), default=None,
                        help="model file format (default: sniff)")

    p = _Parser(prog="modalsep", description="Distinguishability and definability for finite Kripke models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bisim", parents=[common], help="bisimilarity of two pointed models")
    s.add_argument("--m1", required=True)
    s.add_argument("--m2", required=True)
    s.add_argument("--depth", type=int, default=None, help="check depth-bounded bisimilarity instead")
    s.set_defaults(func=cmd_bisim)

    s = sub.add_parser("distinguish", parents=[common], help="depth-minimal distinguishing formula")
    s.add_argument("--m1", required=True)
    s.add_argument("--m2", required=True)
    s.set_defaults(func=cmd_distinguish)

    for name, func, helptext in (("separate", cmd_separate, "separate two classes"),
                                 ("equiv", cmd_equiv, "class equivalence"),
                                 ("lift", cmd_lift, "lifted bisimilarity")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--c1", required=True)
        s.add_argument("--c2", required=True)
        if name != "equiv":
            s.add_argument("--depth", type=int, default=None)
        s.set_defaults(func=func)

    s = sub.add_parser("define", parents=[common], help="define a subset of a finite universe")
    s.add_argument("--universe", required=True)
    s.add_argument("--subset", type=_indices, required=True, help="comma-separated member indices")
    s.add_argument("--depth", type=int, default=None)
    s.set_defaults(func=cmd_define)

    s = sub.add_parser("compare", parents=[common], help="compare two depth fragments")
    s.add_argument("--universe", required=True)
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("oracle", parents=[common], help="brute-force separator search")
    s.add_argument("--c1", required=True)
    s.add_argument("--c2", required=True)
    s.add_argument("--max-depth", type=int, default=None)
    s.add_argument("--max-size", type=int, default=None)
    s.add_argument("--cap", type=int, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("game", parents=[common], help="play or solve a bisimulation game")
    s.add_argument("--m1")
    s.add_argument("--m2")
    s.add_argument("--c1")
    s.add_argument("--c2")
    s.add_argument("--role", choices=(games.SPOILER, games.VERIFIER), default=games.SPOILER)
    s.add_argument("--rounds", type=_rounds, default=None, help="N or 'unbounded' (default)")
    s.add_argument("--solve", action="store_true", help="print the winner instead of playing")
    s.add_argument("--dump", action="store_true", help="print the position after every move")
    s.set_defaults(func=cmd_game)
    return p


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def fail(code, kind, message):
        stderr.write(_dump({"error": kind, "message": " ".join(str(message).split())}) + "\n")
        return code

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.func(args, stdin, stdout)
    except UsageError as exc:
        return fail(EXIT_USAGE, "usage", exc)
    except (ParseError, ValidationError) as exc:
        return fail(EXIT_INPUT, exc.kind, exc)
    except ResourceCapError as exc:
        return fail(EXIT_RESOURCE, exc.kind, exc)
    except ModalSepError as exc:
        return fail(EXIT_INPUT, exc.kind, exc)
    if result is not None:
        _emit(args, result, stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
