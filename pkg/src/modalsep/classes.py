"""Class-level relations: lifted bisimilarity, separation, equivalence, definability."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .bisim import Synthesizer, point_blocks, refinement_levels
from .errors import ResourceCapError
from .kripke import ModelClass, as_class, union_of
from .semantics import FORWARD, definable_atoms, sep_check
from .syntax import BOT, TOP, Formula, conj, disj

__all__ = [
    "SeparationResult", "EquivalenceWitness", "FragmentComparison",
    "lift_exists", "lift_forall", "class_separation", "asymp",
    "class_equiv", "class_equiv_witness", "definable", "compare_fragments",
    "EQUAL", "FIRST_LESS", "SECOND_LESS", "INCOMPARABLE",
]

EQUAL = "equal"
FIRST_LESS = "first-strictly-less"
SECOND_LESS = "second-strictly-less"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class SeparationResult:
    """A forward separator, or a pair of bisimilar members (one from each class)."""

    formula: Formula | None = None
    depth: int | None = None
    polarity: str | None = None
    witness: tuple | None = None

    @property
    def separable(self) -> bool:
        return self.formula is not None

    def __bool__(self):
        return self.separable


@dataclass(frozen=True)
class EquivalenceWitness:
    """Why two classes are not class-equivalent.

    ``formula`` is valid on the class named by ``valid_on`` and false at the
    member ``unmatched = (side, index)`` of the other class, which has no
    bisimilar partner across.
    """

    formula: Formula
    valid_on: str
    unmatched: tuple


@dataclass(frozen=True)
class FragmentComparison:
    distinguishing: str
    expressive: str


def _blocks(c1, c2, depth=None):
    ids = point_blocks(list(c1.members) + list(c2.members), depth)
    return ids[:len(c1)], ids[len(c1):]


def lift_exists(c1, c2, depth: int | None = None) -> bool:
    """Some member of ``c1`` is bisimilar to some member of ``c2``.

    ``depth`` swaps bisimilarity for ``depth``-bisimilarity.
    """
    c1, c2 = as_class(c1), as_class(c2)
    b1, b2 = _blocks(c1, c2, depth)
    return bool(set(b1) & set(b2))


def lift_forall(c1, c2, depth: int | None = None) -> bool:
    """Every member of either class has a bisimilar partner in the other."""
    c1, c2 = as_class(c1), as_class(c2)
    b1, b2 = _blocks(c1, c2, depth)
    return set(b1) == set(b2)


def _first_cross_pair(b1, b2):
    for i, j in product(range(len(b1)), range(len(b2))):
        if b1[i] == b2[j]:
            return i, j
    return None


def class_separation(c1, c2, depth: int | None = None) -> SeparationResult:
    """Separate two finite classes or show they cannot be separated.

    If some cross pair is bisimilar (``depth``-bisimilar when ``depth`` is
    given), that pair is returned and no separator exists. Otherwise, for each
    member ``M1`` of ``c1`` the formulas distinguishing it from every member
    ``M2`` of ``c2`` are conjoined, and those conjunctions are disjoined.
    The result always holds on ``c1`` and fails on ``c2``.
    """
    c1, c2 = as_class(c1), as_class(c2)
    members = list(c1.members) + list(c2.members)
    if not c1:
        return _checked(c1, c2, BOT)
    if not c2:
        return _checked(c1, c2, TOP)
    model, points = union_of(members)
    ids = refinement_levels(model, depth)[-1]
    p1, p2 = points[:len(c1)], points[len(c1):]
    pair = _first_cross_pair([ids[p] for p in p1], [ids[p] for p in p2])
    if pair is not None:
        return SeparationResult(witness=pair)
    syn = Synthesizer(model)
    f = disj([conj([syn.formula(s, t) for t in p2]) for s in p1])
    return _checked(c1, c2, f)


def _checked(c1, c2, f):
    if sep_check(c1, c2, f) != FORWARD:
        raise AssertionError(f"constructed separator {f} fails to separate")
    return SeparationResult(formula=f, depth=f.depth, polarity=FORWARD)


def asymp(c1, c2) -> bool:
    """The classes cannot be told apart by any single formula."""
    return not class_separation(c1, c2).separable


def class_equiv(c1, c2) -> bool:
    """Same valid formulas; on finite classes this is ``lift_forall``."""
    return lift_forall(c1, c2)


def class_equiv_witness(c1, c2) -> EquivalenceWitness | None:
    """A formula valid on one class but not the other, or None if equivalent."""
    c1, c2 = as_class(c1), as_class(c2)
    b1, b2 = _blocks(c1, c2)
    for j, b in enumerate(b2):
        if b not in b1:
            res = class_separation(c1, ModelClass([c2[j]]))
            return EquivalenceWitness(res.formula, "first", ("second", j))
    for i, b in enumerate(b1):
        if b not in b2:
            res = class_separation(c2, ModelClass([c1[i]]))
            return EquivalenceWitness(res.formula, "second", ("first", i))
    return None


def definable(universe, subset, depth: int | None = None) -> SeparationResult:
    """Define ``subset`` (indices into ``universe``) within the finite universe.

    On success ``formula`` holds exactly at the members whose index is in
    ``subset``. Otherwise ``witness`` is a pair of universe indices
    ``(inside, outside)`` of bisimilar members straddling the cut.
    """
    universe = as_class(universe)
    chosen = sorted(set(subset))
    for i in chosen:
        if not 0 <= i < len(universe):
            raise IndexError(f"subset index {i} outside universe of size {len(universe)}")
    rest = [i for i in range(len(universe)) if i not in set(chosen)]
    res = class_separation(universe.subclass(chosen), universe.subclass(rest), depth)
    if res.witness is not None:
        i, j = res.witness
        return SeparationResult(witness=(chosen[i], rest[j]))
    return res


def _member_partition(universe, depth):
    ids = point_blocks(list(universe.members), depth)
    groups = {}
    for i, b in enumerate(ids):
        groups.setdefault(b, set()).add(i)
    return {frozenset(g) for g in groups.values()}


def _refines(fine, coarse):
    return all(any(b <= c for c in coarse) for b in fine)


def _order(first, second, first_le_second, second_le_first):
    if first_le_second and second_le_first:
        return EQUAL
    if first_le_second:
        return FIRST_LESS
    if second_le_first:
        return SECOND_LESS
    return INCOMPARABLE


def _definable_family(universe, depth, cap):
    # point-subsets cut out by depth-bounded formulas: unions of extension atoms met at the points
    model, points = union_of(list(universe.members))
    top = definable_atoms(model, depth)[-1] if points else []
    traces = set()
    for a in top:
        t = frozenset(i for i, p in enumerate(points) if a >> p & 1)
        if t:
            traces.add(t)
    traces = sorted(traces, key=sorted)
    if 2 ** len(traces) > cap:
        raise ResourceCapError(f"definable family exceeds cap of {cap} subsets")
    fam = set()
    for mask in range(1 << len(traces)):
        fam.add(frozenset().union(*(t for k, t in enumerate(traces) if mask >> k & 1)))
    return fam


def compare_fragments(universe, d1: int, d2: int, cap: int = 1 << 20) -> FragmentComparison:
    """Compare depth-``d1`` and depth-``d2`` modal formulas on a finite universe.

    Distinguishing power orders the two approximant partitions of the members
    (finer = more distinguishing). Expressive power orders the families of
    member subsets each fragment defines, computed from formula extensions.
    The two verdicts must agree on a finite universe.
    """
    universe = as_class(universe)
    p1 = _member_partition(universe, d1)
    p2 = _member_partition(universe, d2)
    dist = _order(d1, d2, _refines(p2, p1), _refines(p1, p2))
    f1 = _definable_family(universe, d1, cap)
    f2 = _definable_family(universe, d2, cap)
    expr = _order(d1, d2, f1 <= f2, f2 <= f1)
    if dist != expr:
        raise AssertionError(f"distinguishing verdict {dist} disagrees with expressive verdict {expr}")
    return FragmentComparison(dist, expr)
