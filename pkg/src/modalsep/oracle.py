"""Brute-force oracle for separability and bisimulation.

Deliberately independent of :mod:`modalsep.bisim` and :mod:`modalsep.classes`:
only formula syntax and Kripke semantics are used.

The search enumerates formulas level by level in modal depth and, within a
level, by (size, printed form), keeping one formula per distinct extension
over the states reachable from the inputs. Swapping a subformula for another
with the same extension never changes the value of the whole, so nothing is
lost: every formula within the bounds has a kept stand-in of no greater
depth and size.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import ResourceCapError
from .kripke import KripkeModel, as_class, union_of
from .semantics import FORWARD, REVERSE, definable_atoms, successor_masks
from .syntax import BOT, TOP, Atom, Box, Dia, Formula, Not, conj, disj

__all__ = ["OracleHit", "oracle_separable", "oracle_min_depth", "oracle_bisim_check",
           "DEFAULT_SEARCH_CAP"]

DEFAULT_SEARCH_CAP = 10**6


@dataclass(frozen=True)
class OracleHit:
    formula: Formula
    depth: int
    polarity: str


class _Universe:
    def __init__(self, c1, c2):
        c1, c2 = as_class(c1), as_class(c2)
        self.alphabet = c1.alphabet + tuple(p for p in c2.alphabet if p not in c1.alphabet)
        model, points = union_of(list(c1.members) + list(c2.members), self.alphabet)
        self.model = model
        self.succ = successor_masks(model)
        reach = set(points)
        stack = list(points)
        while stack:
            i = stack.pop()
            for j in model.succ[i]:
                if j not in reach:
                    reach.add(j)
                    stack.append(j)
        self.states = sorted(reach)
        self.mask = sum(1 << i for i in reach)
        self.left = sum(1 << p for p in points[:len(c1)])
        self.right = sum(1 << p for p in points[len(c1):])

    def atom(self, p):
        return sum(1 << i for i in self.states if p in self.model.labels[i])

    def dia(self, e):
        return sum(1 << i for i in self.states if self.succ[i] & e)

    def box(self, e):
        bad = self.mask & ~e
        return sum(1 << i for i in self.states if not self.succ[i] & bad)

    def polarity(self, e):
        if e & self.left == self.left and not e & self.right:
            return FORWARD
        if not e & self.left and e & self.right == self.right:
            return REVERSE
        return None


def _min_depth(u: _Universe, max_depth):
    levels = definable_atoms(u.model, max_depth, u.alphabet)
    for d, lvl in enumerate(levels):
        if all(not (a & u.left and a & u.right) for a in lvl):
            return d, levels
    return None, levels


def oracle_min_depth(c1, c2, max_depth: int):
    """Least modal depth of a formula separating the classes, or None within ``max_depth``.

    Decided exactly from the algebra of depth-bounded extensions: a depth-d
    separator exists iff no atom of that algebra meets points of both classes.
    """
    return _min_depth(_Universe(c1, c2), max_depth)[0]


def oracle_separable(c1, c2, max_depth: int, max_size: int | None = None,
                     cap: int = DEFAULT_SEARCH_CAP) -> OracleHit | None:
    """First separating formula in (depth, size, printed form) order.

    ``max_size`` bounds the node count of every candidate (None: unbounded).
    The returned formula may separate in either polarity; ``depth`` is the
    least depth at which any separator exists.

    Raises:
        ResourceCapError: if more than ``cap`` candidates would be generated.
    """
    u = _Universe(c1, c2)
    target, levels = _min_depth(u, max_depth)
    if target is None:
        return None
    # extensions over reachable states at level d: all unions of the atoms meeting them
    counts = [sum(1 for a in lvl if a & u.mask) for lvl in levels]
    table = {}          # extension -> formula (the kept stand-in)
    order = []          # kept formulas with their extensions, in finalisation order
    pushed = 0

    def push(heap, f, e):
        nonlocal pushed
        if max_size is not None and f.size > max_size:
            return
        pushed += 1
        if pushed > cap:
            raise ResourceCapError(f"oracle search exceeds cap of {cap} candidates")
        heapq.heappush(heap, (f.size, f.text, e, f))

    for d in range(target + 1):
        heap = []
        if d == 0:
            push(heap, TOP, u.mask)
            push(heap, BOT, 0)
            for p in u.alphabet:
                push(heap, Atom(p), u.atom(p))
        else:
            for f, e in list(order):
                for g, ge in ((Dia(f), u.dia(e)), (Box(f), u.box(e))):
                    if ge not in table:
                        push(heap, g, ge)
        full = 1 << counts[min(d, len(counts) - 1)]
        while heap and len(table) < full:
            _, _, e, f = heapq.heappop(heap)
            if e in table:
                continue
            table[e] = f
            order.append((f, e))
            pol = u.polarity(e)
            if pol is not None:
                return OracleHit(f, d, pol)
            ne = u.mask & ~e
            if ne not in table:
                push(heap, Not(f), ne)
            for g, ge in order:
                if g is f:
                    continue
                if e & ge not in table:
                    push(heap, conj([f, g]), e & ge)
                if e | ge not in table:
                    push(heap, disj([f, g]), e | ge)
    return None


def oracle_bisim_check(m: KripkeModel, r) -> bool:
    """Check the three bisimulation clauses at every pair of ``r``, directly.

    Clauses: equal valuations; every successor on the left is matched by a
    related successor on the right; and vice versa.
    """
    pairs = {(str(a), str(b)) for a, b in r}
    for a, b in pairs:
        if a not in m.index or b not in m.index:
            raise ValueError(f"pair ({a!r}, {b!r}) mentions an unknown state")
    for a, b in pairs:
        if m.val[a] != m.val[b]:
            return False
        sa, sb = m.successors(a), m.successors(b)
        if any(not any((x, y) in pairs for y in sb) for x in sa):
            return False
        if any(not any((x, y) in pairs for x in sa) for y in sb):
            return False
    return True
