import pytest
from hypothesis import given, settings

from modalsep.bisim import k_bisimilar
from modalsep.errors import UnknownAtomError
from modalsep.kripke import KripkeModel, ModelClass, PointedModel, chain, generated_submodel, loop, walks
from modalsep.semantics import (FORWARD, REVERSE, class_models, definable_atoms, extension,
                                sep_check)
from modalsep.semantics import eval as ev
from modalsep.syntax import (BOT, TOP, And, Atom, Bot, Box, Dia, Not, Or, Top, enumerate_formulas,
                             parse_formula)

from conftest import formulas, model_classes, pointed_models


def naive_holds(m, s, f):
    """Direct recursive truth definition, one state at a time."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return f.name in m.val[s]
    if isinstance(f, Not):
        return not naive_holds(m, s, f.child)
    if isinstance(f, And):
        return all(naive_holds(m, s, c) for c in f.children)
    if isinstance(f, Or):
        return any(naive_holds(m, s, c) for c in f.children)
    succ = [b for a, b in m.rel if a == s]
    if isinstance(f, Dia):
        return any(naive_holds(m, t, f.child) for t in succ)
    return all(naive_holds(m, t, f.child) for t in succ)


@pytest.mark.parametrize("model, text, value", [
    (loop(), "<> true", True),
    (chain(1), "[] [] false", True),
    (chain(2), "<> <> true", True),
    (chain(1), "<> <> true", False),
    (chain(0), "[] false", True),
    (loop(), "[] <> true", True),
])
def test_eval_examples(model, text, value):
    assert ev(model, parse_formula(text)) is value


def test_class_models_examples():
    c = ModelClass([chain(1), chain(2)])
    assert class_models(c, Dia(TOP))
    assert not class_models(c, Dia(Dia(TOP)))
    assert class_models(ModelClass(), BOT)


def test_sep_check_examples():
    assert sep_check(chain(1), loop(), Dia(Dia(TOP))) == REVERSE
    assert sep_check(walks(3), loop(), parse_formula("!<><><><> true")) == FORWARD
    c = ModelClass([loop(), chain(1)])
    for f in enumerate_formulas((), 2, 4):
        assert sep_check(c, c, f) is None
    assert sep_check(ModelClass(), loop(), BOT) == FORWARD


def test_unknown_atom_is_rejected():
    with pytest.raises(UnknownAtomError):
        ev(loop(), Atom("p"))
    assert ev(loop(), Not(Atom("p")), ("p",))


def test_missing_atom_in_other_class_is_false():
    m = PointedModel(KripkeModel(["a"], [], {"a": ["p"]}), "a")
    assert sep_check(m, loop(), Atom("p")) == FORWARD


@settings(max_examples=200, deadline=None)
@given(pointed_models(), formulas())
def test_extension_matches_naive_semantics(p, f):
    m = p.model
    e = extension(m, f)
    for i, s in enumerate(m.states):
        assert bool(e >> i & 1) == naive_holds(m, s, f)


@settings(max_examples=100, deadline=None)
@given(pointed_models(), formulas())
def test_eval_invariant_under_generated_submodel(p, f):
    assert ev(p, f) == ev(generated_submodel(p), f)


@settings(max_examples=100, deadline=None)
@given(pointed_models(max_states=3), pointed_models(max_states=3), formulas())
def test_singleton_separation_reduces_to_evaluation(a, b, f):
    one, two = ev(a, f), ev(b, f)
    assert (sep_check(a, b, f) is not None) == (one != two)


@settings(max_examples=50, deadline=None)
@given(model_classes(alphabet=("p", "q")))
def test_empty_first_class_is_separated_by_false(c):
    assert sep_check(ModelClass(), c, BOT) == FORWARD


@settings(max_examples=40, deadline=None)
@given(pointed_models(max_states=4, alphabet=("p",)))
def test_definable_atoms_are_depth_bisimulation_classes(p):
    m = p.model
    levels = definable_atoms(m, 3, ("p",))
    small = enumerate_formulas(("p",), 3, 5)
    for d in range(4):
        atoms = levels[min(d, len(levels) - 1)]
        assert sum(atoms) == (1 << len(m.states)) - 1
        owner = {i: k for k, a in enumerate(atoms) for i in range(len(m.states)) if a >> i & 1}
        for i, s in enumerate(m.states):
            for j, t in enumerate(m.states):
                same = k_bisimilar(PointedModel(m, s), PointedModel(m, t), d)
                assert same == (owner[i] == owner[j])
        # every extension of a depth-d formula is a union of atoms
        for f in small:
            if f.depth <= d:
                e = extension(m, f, ("p",))
                assert all(e & a in (0, a) for a in atoms)
