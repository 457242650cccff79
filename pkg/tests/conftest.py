import random
from functools import lru_cache

import pytest
from hypothesis import strategies as st

from modalsep.generate import all_pointed_models
from modalsep.kripke import KripkeModel, ModelClass, PointedModel, chain, cycle, loop
from modalsep.syntax import BOT, TOP, And, Atom, Box, Dia, Not, Or


@lru_cache(maxsize=None)
def small_models(max_states=3):
    return tuple(all_pointed_models(max_states, ("p",)))


@pytest.fixture(scope="session")
def models3():
    return small_models(3)


@pytest.fixture(scope="session")
def models2():
    return small_models(2)


@pytest.fixture
def rng():
    return random.Random(20261019)


@pytest.fixture
def zoo():
    return {"loop": loop(), "loop2": cycle(2), "chain_1": chain(1), "chain_2": chain(2),
            "chain_3": chain(3)}


# --------------------------------------------------------------------------
# hypothesis strategies

@st.composite
def pointed_models(draw, max_states=4, alphabet=("p", "q")):
    n = draw(st.integers(1, max_states))
    names = [f"w{i}" for i in range(n)]
    rel = draw(st.lists(st.tuples(st.sampled_from(names), st.sampled_from(names)),
                        max_size=n * n, unique=True))
    val = {s: draw(st.sets(st.sampled_from(alphabet))) for s in names}
    point = draw(st.sampled_from(names))
    return PointedModel(KripkeModel(names, rel, val, alphabet), point)


def formulas(alphabet=("p", "q"), max_leaves=8):
    leaves = st.sampled_from([TOP, BOT] + [Atom(p) for p in alphabet])

    def extend(children):
        return st.one_of(
            children.map(Not), children.map(Dia), children.map(Box),
            st.lists(children, min_size=2, max_size=3).map(And),
            st.lists(children, min_size=2, max_size=3).map(Or),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def model_classes(draw, max_members=3, max_states=3, alphabet=("p",)):
    k = draw(st.integers(0, max_members))
    return ModelClass([draw(pointed_models(max_states, alphabet)) for _ in range(k)])


# --------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
