"""Finite Kripke models, pointed models, model classes and their I/O."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ResourceCapError, ValidationError
from .syntax import make_alphabet

DEFAULT_STATE_CAP = 10**5

__all__ = [
    "KripkeModel", "PointedModel", "ModelClass",
    "load_class", "save_class", "load_model", "as_class",
    "disjoint_union", "union_of", "unravel_to_depth", "generated_submodel",
    "loop", "cycle", "chain", "walks", "DEFAULT_STATE_CAP",
]


@dataclass(frozen=True)
class KripkeModel:
    """A finite unimodal Kripke model.

    ``states`` fixes the state order used for all index-based algorithms.
    ``val`` maps each state to the propositions true there; states missing
    from ``val`` get the empty set.
    """

    states: tuple
    rel: frozenset
    val: Mapping
    alphabet: tuple = ()

    def __init__(self, states, rel=(), val=None, alphabet=None):
        states = tuple(str(s) for s in states)
        if len(set(states)) != len(states):
            dup = next(s for s in states if states.count(s) > 1)
            raise ValidationError(f"duplicate state {dup!r}")
        known = set(states)
        pairs = set()
        for edge in rel:
            if len(edge) != 2:
                raise ValidationError(f"relation entry {edge!r} is not a pair")
            a, b = str(edge[0]), str(edge[1])
            for end in (a, b):
                if end not in known:
                    raise ValidationError(f"relation endpoint {end!r} is not a state")
            pairs.add((a, b))
        val = dict(val or {})
        for s in val:
            if str(s) not in known:
                raise ValidationError(f"valuation given for unknown state {s!r}")
        val = {str(s): frozenset(ps) for s, ps in val.items()}
        used = sorted(set().union(*val.values())) if val else []
        if alphabet is None:
            alphabet = used
        try:
            alphabet = make_alphabet(alphabet)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        stray = [p for p in used if p not in alphabet]
        if stray:
            raise ValidationError(f"valuation uses {stray[0]!r} outside the alphabet")
        full = {s: val.get(s, frozenset()) for s in states}
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "rel", frozenset(pairs))
        object.__setattr__(self, "val", MappingProxyType(full))
        object.__setattr__(self, "alphabet", alphabet)

    def __hash__(self):
        return hash((self.states, self.rel, frozenset(self.val.items()), self.alphabet))

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (self.states == other.states and self.rel == other.rel
                and dict(self.val) == dict(other.val) and self.alphabet == other.alphabet)

    def __repr__(self):
        return f"KripkeModel(states={len(self.states)}, edges={len(self.rel)}, alphabet={self.alphabet})"

    def __len__(self):
        return len(self.states)

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def succ(self) -> tuple:
        """Successor index tuples, aligned with ``states`` and sorted."""
        out = [[] for _ in self.states]
        for a, b in self.rel:
            out[self.index[a]].append(self.index[b])
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def labels(self) -> tuple:
        """Per-state valuation as a frozenset, aligned with ``states``."""
        return tuple(self.val[s] for s in self.states)

    def successors(self, state) -> tuple:
        return tuple(self.states[j] for j in self.succ[self.index[state]])

    def with_alphabet(self, alphabet) -> "KripkeModel":
        merged = make_alphabet(tuple(self.alphabet) + tuple(alphabet))
        if merged == self.alphabet:
            return self
        return KripkeModel(self.states, self.rel, self.val, merged)


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "point", str(self.point))
        if self.point not in self.model.index:
            raise ValidationError(f"point {self.point!r} is not a state")

    @property
    def alphabet(self):
        return self.model.alphabet

    @property
    def point_index(self) -> int:
        return self.model.index[self.point]

    def __repr__(self):
        tag = f"{self.name}: " if self.name else ""
        return f"PointedModel({tag}{len(self.model.states)} states, point={self.point!r})"


@dataclass(frozen=True)
class ModelClass:
    """A finite sequence of pointed models; duplicates are allowed."""

    members: tuple = ()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        members = tuple(self.members)
        for m in members:
            if not isinstance(m, PointedModel):
                raise ValidationError(f"class member {m!r} is not a pointed model")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def alphabet(self) -> tuple:
        return make_alphabet(p for m in self.members for p in m.alphabet)

    @property
    def points(self) -> list:
        """The designated states of the members."""
        return [m.point for m in self.members]

    def subclass(self, indices, label=None) -> "ModelClass":
        return ModelClass([self.members[i] for i in indices], label)

    def __add__(self, other):
        return ModelClass(self.members + tuple(other), None)


def as_class(obj, label=None) -> ModelClass:
    """Coerce a pointed model, a class or an iterable of pointed models."""
    if isinstance(obj, ModelClass):
        return obj
    if isinstance(obj, PointedModel):
        return ModelClass((obj,), label)
    return ModelClass(tuple(obj), label)


# --------------------------------------------------------------------------
# named constructions

def loop(name="loop") -> PointedModel:
    """Single state with a self-edge and empty valuation."""
    return PointedModel(KripkeModel(["a"], [("a", "a")]), "a", name)


def cycle(n: int, name=None) -> PointedModel:
    """Directed cycle on ``n`` states, pointed at the first."""
    states = ["a", "b"] if n == 2 else [f"c{i}" for i in range(n)]
    rel = [(states[i], states[(i + 1) % n]) for i in range(n)]
    return PointedModel(KripkeModel(states, rel), states[0], name or f"loop{n}")


def chain(n: int, name=None) -> PointedModel:
    """Finite walk s0 -> s1 -> ... -> sn with ``n`` edges."""
    states = [f"s{i}" for i in range(n + 1)]
    rel = [(states[i], states[i + 1]) for i in range(n)]
    return PointedModel(KripkeModel(states, rel), "s0", name or f"chain_{n}")


def walks(n: int) -> ModelClass:
    """The class {chain_1, ..., chain_n}."""
    return ModelClass([chain(i) for i in range(1, n + 1)], "walks")


# --------------------------------------------------------------------------
# structural operations

def union_of(pointed: Sequence[PointedModel], alphabet=None):
    """Disjoint union of the members' models plus each member's point index.

    Returns ``(model, point_indices)``. State ``s`` of member ``i`` becomes ``f"{i}.{s}"``.
    """
    merged = make_alphabet(
        tuple(alphabet or ()) + tuple(p for m in pointed for p in m.alphabet)
    )
    states, rel, val, points = [], [], {}, []
    for i, pm in enumerate(pointed):
        m = pm.model
        tag = f"{i}."
        states.extend(tag + s for s in m.states)
        rel.extend((tag + a, tag + b) for a, b in m.rel)
        val.update({tag + s: ps for s, ps in m.val.items()})
    model = KripkeModel(states, rel, val, merged)
    offset = 0
    for pm in pointed:
        points.append(offset + pm.point_index)
        offset += len(pm.model.states)
    return model, points


def disjoint_union(c) -> KripkeModel:
    """Disjoint union of every member model of ``c``; no cross-member edges."""
    return union_of(as_class(c).members)[0]


def generated_submodel(p: PointedModel) -> PointedModel:
    """Restriction of ``p`` to the states reachable from its point."""
    m = p.model
    seen = {p.point_index}
    stack = [p.point_index]
    while stack:
        i = stack.pop()
        for j in m.succ[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    keep = [s for i, s in enumerate(m.states) if i in seen]
    kept = set(keep)
    rel = [(a, b) for a, b in m.rel if a in kept]
    sub = KripkeModel(keep, rel, {s: m.val[s] for s in keep}, m.alphabet)
    return PointedModel(sub, p.point, p.name)


def unravel_to_depth(p: PointedModel, d: int, cap: int = DEFAULT_STATE_CAP) -> PointedModel:
    """Tree unraveling of ``p`` truncated at paths of length ``d``.

    States are the paths from the point, written as ``/``-joined state names.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    m = p.model
    root = (p.point_index,)
    paths = [root]
    rel = []
    frontier = [root]
    for _ in range(d):
        nxt = []
        for path in frontier:
            for j in m.succ[path[-1]]:
                child = path + (j,)
                paths.append(child)
                rel.append((path, child))
                nxt.append(child)
                if len(paths) > cap:
                    raise ResourceCapError(f"unraveling exceeds state cap of {cap}")
        frontier = nxt

    def name(path):
        return "/".join(m.states[i] for i in path)

    model = KripkeModel(
        [name(x) for x in paths],
        [(name(a), name(b)) for a, b in rel],
        {name(x): m.labels[x[-1]] for x in paths},
        m.alphabet,
    )
    return PointedModel(model, name(root), p.name)


# --------------------------------------------------------------------------
# JSON

def _model_from_json(obj, where="model"):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected a JSON object")
    for key in ("states", "point"):
        if key not in obj:
            raise ValidationError(f"{where}: missing field {key!r}")
    rel = obj.get("rel", [])
    if not isinstance(rel, list):
        raise ValidationError(f"{where}: 'rel' must be a list of pairs")
    val = obj.get("val", {})
    if not isinstance(val, dict):
        raise ValidationError(f"{where}: 'val' must be an object")
    try:
        model = KripkeModel(obj["states"], rel, val, obj.get("alphabet"))
        return PointedModel(model, obj["point"], obj.get("name"))
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _model_to_json(p: PointedModel) -> dict:
    m = p.model
    order = m.index
    out = {}
    if p.name:
        out["name"] = p.name
    out["alphabet"] = list(m.alphabet)
    out["states"] = list(m.states)
    out["rel"] = [list(e) for e in sorted(m.rel, key=lambda e: (order[e[0]], order[e[1]]))]
    out["val"] = {s: [q for q in m.alphabet if q in m.val[s]] for s in m.states}
    out["point"] = p.point
    return out


# --------------------------------------------------------------------------
# DSL
#
#   class walks;
#   model chain_1 { alphabet: p; states: s0 s1; rel: s0 -> s1; val: s0: p, s1: ; point: s0; }

_DSL_TOKEN = re.compile(r"\s*(?:(//[^\n]*|#[^\n]*)|(->|[{};:,])|([A-Za-z0-9_./]+))")


def _dsl_tokens(text):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _DSL_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            line = text.count("\n", 0, pos) + 1
            raise ParseError(f"unexpected character {text[pos]!r}", offset=pos, line=line)
        if m.group(1) is None:
            tok = m.group(2) or m.group(3)
            out.append((tok, pos, text.count("\n", 0, pos) + 1))
        pos = m.end()
    out.append(("<eof>", len(text), text.count("\n") + 1))
    return out


class _DslReader:
    def __init__(self, text):
        self.toks = _dsl_tokens(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def take(self, expected=None):
        tok, off, line = self.toks[self.i]
        if expected is not None and tok != expected:
            found = "end of input" if tok == "<eof>" else repr(tok)
            raise ParseError(f"expected {expected!r}, found {found}", offset=off, line=line)
        self.i += 1
        return tok

    def name(self):
        tok, off, line = self.toks[self.i]
        if tok in ("<eof>", "{", "}", ";", ":", ",", "->"):
            found = "end of input" if tok == "<eof>" else repr(tok)
            raise ParseError(f"expected a name, found {found}", offset=off, line=line)
        self.i += 1
        return tok

    def names_until(self, stop):
        out = []
        while self.peek() not in stop:
            if self.peek() == ",":
                self.take()
                continue
            out.append(self.name())
        return out

    def read(self):
        label = None
        members = []
        if self.peek() == "class":
            self.take()
            label = self.name()
            self.take(";")
        while self.peek() != "<eof>":
            members.append(self.model())
        return ModelClass(members, label)

    def model(self):
        self.take("model")
        name = self.name()
        line = self.toks[self.i][2]
        self.take("{")
        fields = {}
        while self.peek() != "}":
            key = self.name()
            self.take(":")
            if key in fields:
                raise ParseError(f"duplicate section {key!r} in model {name}", line=line)
            if key in ("states", "alphabet", "point"):
                fields[key] = self.names_until({";", "}"})
            elif key == "rel":
                fields[key] = self.edges()
            elif key == "val":
                fields[key] = self.valuation()
            else:
                raise ParseError(f"unknown section {key!r} in model {name}", line=line)
            if self.peek() == ";":
                self.take()
        self.take("}")
        if "states" not in fields or "point" not in fields:
            raise ValidationError(f"model {name}: needs 'states' and 'point' sections")
        if len(fields["point"]) != 1:
            raise ValidationError(f"model {name}: exactly one point required")
        try:
            model = KripkeModel(fields["states"], fields.get("rel", []),
                                fields.get("val", {}), fields.get("alphabet"))
            return PointedModel(model, fields["point"][0], name)
        except ValidationError as exc:
            raise ValidationError(f"model {name}: {exc}") from None

    def edges(self):
        out = []
        while self.peek() not in (";", "}"):
            if self.peek() == ",":
                self.take()
                continue
            a = self.name()
            self.take("->")
            out.append((a, self.name()))
        return out

    def valuation(self):
        out = {}
        while self.peek() not in (";", "}"):
            if self.peek() == ",":
                self.take()
                continue
            s = self.name()
            self.take(":")
            props = []
            while self.peek() not in (",", ";", "}"):
                props.append(self.name())
            out[s] = props
        return out


def _class_to_dsl(c: ModelClass) -> str:
    lines = []
    if c.label:
        lines.append(f"class {c.label};")
    for i, p in enumerate(c.members):
        m = p.model
        order = m.index
        edges = sorted(m.rel, key=lambda e: (order[e[0]], order[e[1]]))
        lines.append(f"model {p.name or f'm{i}'} {{")
        lines.append(f"  alphabet: {' '.join(m.alphabet)};")
        lines.append(f"  states: {' '.join(m.states)};")
        lines.append(f"  rel: {', '.join(f'{a} -> {b}' for a, b in edges)};")
        vals = ", ".join(f"{s}: {' '.join(q for q in m.alphabet if q in m.val[s])}".rstrip()
                         for s in m.states)
        lines.append(f"  val: {vals};")
        lines.append(f"  point: {p.point};")
        lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# public I/O

def _sniff(text):
    return "json" if text.lstrip().startswith(("{", "[")) else "dsl"


def load_class(text: str, format: str | None = None) -> ModelClass:
    """Parse a model class from JSON or DSL text.

    A JSON object with a ``states`` field is read as a one-member class, a
    JSON list as an unlabelled class.
    """
    format = format or _sniff(text)
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", offset=exc.pos, line=exc.lineno) from None
        if isinstance(obj, list):
            return ModelClass([_model_from_json(o, f"models[{i}]") for i, o in enumerate(obj)])
        if isinstance(obj, dict) and "states" in obj:
            return ModelClass([_model_from_json(obj)], obj.get("name"))
        if isinstance(obj, dict) and "models" in obj:
            models = obj["models"]
            if not isinstance(models, list):
                raise ValidationError("'models' must be a list")
            return ModelClass([_model_from_json(o, f"models[{i}]") for i, o in enumerate(models)],
                              obj.get("label"))
        raise ValidationError("expected a model object, a class object or a list of models")
    if format == "dsl":
        return _DslReader(text).read()
    raise ValueError(f"unknown format {format!r}")


def load_model(text: str, format: str | None = None) -> PointedModel:
    c = load_class(text, format)
    if len(c) != 1:
        raise ValidationError(f"expected exactly one model, found {len(c)}")
    return c[0]


def save_class(c, format: str = "json") -> str:
    c = as_class(c)
    if format == "json":
        obj = {}
        if c.label:
            obj["label"] = c.label
        obj["models"] = [_model_to_json(p) for p in c.members]
        return json.dumps(obj, separators=(",", ":"))
    if format == "dsl":
        return _class_to_dsl(c)
    raise ValueError(f"unknown format {format!r}")
