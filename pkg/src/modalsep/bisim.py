"""Bisimulation: partition refinement, approximants and formula synthesis."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import ResourceCapError
from .kripke import KripkeModel, PointedModel, union_of
from .syntax import Atom, Box, Dia, Formula, Not, conj, disj

__all__ = [
    "Partition", "DistinguishResult", "refinement_levels", "coarsest_bisim",
    "k_bisim_partition", "point_blocks", "bisimilar", "k_bisimilar",
    "distinguishing_formula", "characteristic_formula", "Synthesizer",
    "DEFAULT_FORMULA_CAP",
]

DEFAULT_FORMULA_CAP = 10**6


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of states covering a model."""

    model: KripkeModel
    blocks: tuple

    @classmethod
    def from_ids(cls, model, ids):
        groups = {}
        for s, b in zip(model.states, ids):
            groups.setdefault(b, []).append(s)
        return cls(model, tuple(frozenset(g) for g in groups.values()))

    @cached_property
    def _owner(self):
        return {s: i for i, b in enumerate(self.blocks) for s in b}

    def block_of(self, state) -> int:
        return self._owner[state]

    def same_block(self, a, b) -> bool:
        return self._owner[a] == self._owner[b]

    def relation(self) -> frozenset:
        """Induced equivalence as a set of ordered state pairs."""
        return frozenset((a, b) for blk in self.blocks for a in blk for b in blk)

    def __len__(self):
        return len(self.blocks)


def _renumber(keys):
    seen = {}
    return [seen.setdefault(k, len(seen)) for k in keys]


def refinement_levels(model: KripkeModel, depth: int | None = None) -> list:
    """Block ids of every state for the approximants 0, 1, 2, ...

    Level 0 groups states by valuation; level k+1 splits a level-k block by
    the set of level-k blocks its states can reach in one step. Iteration
    stops at ``depth`` or once the partition is stable, whichever is first;
    the last entry is then the coarsest bisimulation.
    """
    succ = model.succ
    ids = _renumber(model.labels)
    levels = [ids]
    while depth is None or len(levels) <= depth:
        nxt = _renumber(
            (ids[i], frozenset(ids[j] for j in succ[i])) for i in range(len(ids))
        )
        if max(nxt, default=-1) == max(ids, default=-1):
            break
        ids = nxt
        levels.append(ids)
    return levels


def _ids_at(levels, k):
    return levels[min(k, len(levels) - 1)]


def coarsest_bisim(m: KripkeModel) -> Partition:
    return Partition.from_ids(m, refinement_levels(m)[-1])


def k_bisim_partition(m: KripkeModel, k: int) -> Partition:
    return Partition.from_ids(m, _ids_at(refinement_levels(m, k), k))


def point_blocks(pointed: Sequence[PointedModel], depth: int | None = None) -> list:
    """Block id of each point within one refinement of the members' disjoint union.

    With ``depth`` set, blocks are those of depth-bounded bisimilarity.
    """
    if not pointed:
        return []
    model, points = union_of(pointed)
    ids = _ids_at(refinement_levels(model, depth), depth if depth is not None else 10**9)
    return [ids[p] for p in points]


def bisimilar(p1: PointedModel, p2: PointedModel) -> bool:
    a, b = point_blocks([p1, p2])
    return a == b


def k_bisimilar(p1: PointedModel, p2: PointedModel, k: int) -> bool:
    if k < 0:
        raise ValueError("k must be non-negative")
    a, b = point_blocks([p1, p2], k)
    return a == b


# --------------------------------------------------------------------------
# synthesis

class Synthesizer:
    """Depth-minimal distinguishing formulas between states of one model.

    For states first told apart at approximant level k, a level-0 difference
    yields a literal; otherwise one side has a successor with no level-(k-1)
    match on the other side, and the formula is ``<>`` of the conjunction (or
    ``[]`` of the disjunction) of the recursively built formulas against every
    successor of the other side. Among the candidates, the least by
    (size, printed form) is kept. Results are memoized per pair of
    bisimulation blocks, computed from each block's first state.
    """

    def __init__(self, model: KripkeModel, alphabet=()):
        self.model = model
        self.alphabet = tuple(model.alphabet) + tuple(p for p in alphabet if p not in model.alphabet)
        self.levels = refinement_levels(model)
        self.final = self.levels[-1]
        rep = {}
        for i, b in enumerate(self.final):
            rep.setdefault(b, i)
        self.rep = rep
        self._memo = {}

    def level(self, s: int, t: int):
        """Least k such that s and t differ at level k, or None if bisimilar."""
        if self.final[s] == self.final[t]:
            return None
        for k, ids in enumerate(self.levels):
            if ids[s] != ids[t]:
                return k
        raise AssertionError("unreachable: final levels differ")

    def formula(self, s: int, t: int) -> Formula:
        """A formula true at state ``s`` and false at state ``t``."""
        key = (self.final[s], self.final[t])
        if key[0] == key[1]:
            raise ValueError("states are bisimilar")
        hit = self._memo.get(key)
        if hit is None:
            hit = self._build(self.rep[key[0]], self.rep[key[1]])
            self._memo[key] = hit
        return hit

    def _unique(self, states):
        seen, out = set(), []
        for j in states:
            if self.final[j] not in seen:
                seen.add(self.final[j])
                out.append(j)
        return out

    def _build(self, s, t):
        k = self.level(s, t)
        labels = self.model.labels
        cands = []
        if k == 0:
            cands += [Atom(p) for p in self.alphabet if p in labels[s] and p not in labels[t]]
            cands += [Not(Atom(p)) for p in self.alphabet if p in labels[t] and p not in labels[s]]
        else:
            prev = self.levels[k - 1]
            ss = self._unique(self.model.succ[s])
            ts = self._unique(self.model.succ[t])
            for a in ss:
                if all(prev[a] != prev[b] for b in ts):
                    cands.append(Dia(conj(self.formula(a, b) for b in ts)))
            for b in ts:
                if all(prev[a] != prev[b] for a in ss):
                    cands.append(Box(disj(self.formula(a, b) for a in ss)))
        return min(cands, key=lambda f: (f.size, f.text))


@dataclass(frozen=True)
class DistinguishResult:
    """Either a separating formula (true on the first model) or a bisimulation."""

    formula: Formula | None = None
    depth: int | None = None
    relation: frozenset | None = None
    polarity: str | None = None

    @property
    def bisimilar(self) -> bool:
        return self.formula is None


def distinguishing_formula(p1: PointedModel, p2: PointedModel) -> DistinguishResult:
    """Depth-minimal formula true at ``p1`` and false at ``p2``, or a bisimulation witness.

    The witness relates states of ``p1`` reachable from its point to
    bisimilar states of ``p2`` reachable from its point.
    """
    model, (s, t) = union_of([p1, p2])
    syn = Synthesizer(model)
    if syn.level(s, t) is None:
        n1 = len(p1.model.states)
        reach1 = _reachable(model, s)
        reach2 = _reachable(model, t)
        rel = frozenset(
            (p1.model.states[a], p2.model.states[b - n1])
            for a in reach1 for b in reach2 if syn.final[a] == syn.final[b]
        )
        return DistinguishResult(relation=rel)
    f = syn.formula(s, t)
    return DistinguishResult(formula=f, depth=f.depth, polarity="forward")


def _reachable(model, start):
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in model.succ[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return sorted(seen)


def characteristic_formula(p: PointedModel, d: int, cap: int = DEFAULT_FORMULA_CAP) -> Formula:
    """Depth-``d`` formula true exactly at the models ``d``-bisimilar to ``p``.

    Only models over the alphabet of ``p`` are in view; propositions outside
    it are unconstrained.

    Raises:
        ResourceCapError: if the formula would exceed ``cap`` nodes.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    m = p.model
    ids = refinement_levels(m, d)
    memo = {}

    def chi(i, k):
        key = (_ids_at(ids, k)[i], k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        parts = [Atom(q) if q in m.labels[i] else Not(Atom(q)) for q in m.alphabet]
        if k > 0:
            kids = [chi(j, k - 1) for j in m.succ[i]]
            parts += [Dia(f) for f in kids]
            parts.append(Box(disj(kids)))
        f = conj(parts)
        if f.size > cap:
            raise ResourceCapError(f"characteristic formula exceeds cap of {cap} nodes")
        memo[key] = f
        return f

    return chi(p.point_index, d)
