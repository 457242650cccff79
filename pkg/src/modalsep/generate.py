"""Small-model generators for exhaustive and randomized checking."""

from __future__ import annotations

import random
from itertools import permutations, product

from .kripke import KripkeModel, ModelClass, PointedModel

__all__ = ["all_pointed_models", "random_pointed_model", "random_class"]


def _canonical(n, edges, vals):
    # lexicographically least relabelling that keeps state 0 (the point) fixed
    best = None
    for perm in permutations(range(1, n)):
        m = (0,) + perm
        key = (tuple(sorted((m[a], m[b]) for a, b in edges)),
               tuple(vals[m.index(i)] for i in range(n)))
        if best is None or key < best:
            best = key
    return best


def _reaches_all(n, edges):
    succ = [[] for _ in range(n)]
    for a, b in edges:
        succ[a].append(b)
    seen, stack = {0}, [0]
    while stack:
        for j in succ[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def all_pointed_models(max_states: int, alphabet=("p",), generated_only: bool = False) -> list:
    """Every pointed model with 1..``max_states`` states, one per isomorphism type.

    States are ``w0, w1, ...`` with the point at ``w0``. With
    ``generated_only`` every state is reachable from the point. The order is
    deterministic.
    """
    alphabet = tuple(alphabet)
    labellings = [frozenset(q for q, bit in zip(alphabet, bits) if bit)
                  for bits in product((0, 1), repeat=len(alphabet))]
    out = []
    for n in range(1, max_states + 1):
        slots = [(a, b) for a in range(n) for b in range(n)]
        seen = set()
        for mask in range(1 << len(slots)):
            edges = [slots[i] for i in range(len(slots)) if mask >> i & 1]
            if generated_only and not _reaches_all(n, edges):
                continue
            for vals in product(range(len(labellings)), repeat=n):
                key = _canonical(n, edges, vals)
                if key in seen:
                    continue
                seen.add(key)
                cedges, cvals = key
                names = [f"w{i}" for i in range(n)]
                model = KripkeModel(
                    names,
                    [(names[a], names[b]) for a, b in cedges],
                    {names[i]: labellings[v] for i, v in enumerate(cvals)},
                    alphabet,
                )
                out.append(PointedModel(model, "w0", f"m{len(out)}"))
    return out


def random_pointed_model(rng: random.Random, max_states: int = 4, alphabet=("p",),
                         edge_prob: float | None = None) -> PointedModel:
    n = rng.randint(1, max_states)
    prob = rng.choice((0.2, 0.35, 0.5)) if edge_prob is None else edge_prob
    names = [f"w{i}" for i in range(n)]
    rel = [(a, b) for a in names for b in names if rng.random() < prob]
    val = {s: [q for q in alphabet if rng.random() < 0.5] for s in names}
    return PointedModel(KripkeModel(names, rel, val, alphabet), rng.choice(names))


def random_class(rng: random.Random, max_members: int = 4, max_states: int = 4,
                 alphabet=("p",), min_members: int = 0, pool=None) -> ModelClass:
    """Random class; drawing from ``pool`` as well makes cross-bisimilar pairs common."""
    k = rng.randint(min_members, max_members)
    members = []
    for _ in range(k):
        if pool and rng.random() < 0.4:
            members.append(rng.choice(pool))
        else:
            members.append(random_pointed_model(rng, max_states, alphabet))
    return ModelClass(members)
