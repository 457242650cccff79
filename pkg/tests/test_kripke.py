import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalsep.bisim import bisimilar, k_bisimilar
from modalsep.errors import ParseError, ResourceCapError, ValidationError
from modalsep.kripke import (KripkeModel, ModelClass, PointedModel, as_class, chain, cycle,
                             disjoint_union, generated_submodel, load_class, load_model, loop,
                             save_class, union_of, unravel_to_depth, walks)
from modalsep.semantics import eval as ev
from modalsep.syntax import enumerate_formulas

from conftest import model_classes, pointed_models

LOOP_JSON = '{"alphabet": [], "states": ["a"], "rel": [["a", "a"]], "val": {"a": []}, "point": "a"}'

CHAIN2_DSL = """
// a three-state path
model chain_2 {
  states: s0 s1 s2;
  rel: s0 -> s1, s1 -> s2;
  point: s0;
}
"""


def test_load_loop_json():
    c = load_class(LOOP_JSON, "json")
    assert len(c) == 1
    assert c[0] == loop()


def test_load_rejects_undeclared_edge_target():
    bad = '{"states": ["a"], "rel": [["a", "b"]], "point": "a"}'
    with pytest.raises(ValidationError, match="'b'"):
        load_class(bad, "json")


def test_load_chain_dsl():
    p = load_model(CHAIN2_DSL)
    assert p.model.states == ("s0", "s1", "s2")
    assert p.model.rel == {("s0", "s1"), ("s1", "s2")}
    assert p == chain(2)


@pytest.mark.parametrize("text", [
    '{"states": ["a", "a"], "point": "a"}',
    '{"states": ["a"], "point": "b"}',
    '{"states": ["a"], "val": {"b": []}, "point": "a"}',
    '{"states": ["a"], "val": {"a": ["q"]}, "alphabet": ["p"], "point": "a"}',
    '{"states": ["a"]}',
    '{"models": 3}',
    'model m { states: a; point: a b; }',
    'model m { point: a; }',
])
def test_validation_errors(text):
    with pytest.raises(ValidationError):
        load_class(text)


@pytest.mark.parametrize("text", [
    '{"states": [',
    'model m { states: a; rel: a b; point: a; }',
    'model m { states: a; colour: red; point: a; }',
    'model m { states: a; point: a;',
    'model m states',
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_class(text)


def test_json_scalar_is_rejected():
    with pytest.raises(ValidationError):
        load_class('"hello"', "json")


def test_json_parse_error_reports_location():
    with pytest.raises(ParseError) as err:
        load_class('{"states": [,]}')
    assert err.value.offset == 12


def test_class_forms_accepted():
    one = json.loads(LOOP_JSON)
    assert len(load_class(json.dumps([one, one]))) == 2
    c = load_class(json.dumps({"label": "pair", "models": [one]}))
    assert c.label == "pair" and len(c) == 1


def test_named_models():
    assert cycle(2).model.states == ("a", "b")
    assert cycle(3).model.rel == {("c0", "c1"), ("c1", "c2"), ("c2", "c0")}
    assert chain(0).model.states == ("s0",)
    assert [m.name for m in walks(3)] == ["chain_1", "chain_2", "chain_3"]


def test_model_is_hashable_and_value_compared():
    a = KripkeModel(["x", "y"], [("x", "y")], {"x": ["p"]})
    b = KripkeModel(["x", "y"], [("x", "y")], {"x": ["p"], "y": []}, ["p"])
    assert a == b and hash(a) == hash(b)
    assert PointedModel(a, "x", "one") == PointedModel(b, "x", "two")


def test_disjoint_union_examples():
    u = disjoint_union(as_class(loop()))
    assert u.states == ("0.a",) and u.rel == {("0.a", "0.a")}
    u = disjoint_union(ModelClass([loop(), chain(1)]))
    assert len(u.states) == 3
    assert u.rel == {("0.a", "0.a"), ("1.s0", "1.s1")}
    assert len(disjoint_union(ModelClass()).states) == 0


def test_unravel_examples():
    u = unravel_to_depth(loop(), 2)
    assert u.model.states == ("a", "a/a", "a/a/a")
    assert k_bisimilar(u, loop(), 2)
    assert not k_bisimilar(u, loop(), 3)
    p = chain(2)
    z = unravel_to_depth(p, 0)
    assert z.model.states == ("s0",) and not z.model.rel
    assert unravel_to_depth(chain(1), 5) == PointedModel(
        KripkeModel(["s0", "s0/s1"], [("s0", "s0/s1")]), "s0")


def test_unravel_cap():
    with pytest.raises(ResourceCapError):
        unravel_to_depth(PointedModel(KripkeModel(["a", "b"], [(x, y) for x in "ab" for y in "ab"]), "a"),
                         12, cap=1000)


def test_generated_submodel_examples():
    g = generated_submodel(PointedModel(chain(2).model, "s1"))
    assert g.model.states == ("s1", "s2")
    assert generated_submodel(loop()) == loop()
    island = PointedModel(KripkeModel(["a", "b", "c"], [("a", "a"), ("c", "b")], {"c": ["p"]}), "a")
    g = generated_submodel(island)
    assert g.model.states == ("a",)
    for f in enumerate_formulas(("p",), 3, 4):
        assert ev(island, f) == ev(g, f)


@settings(max_examples=60, deadline=None)
@given(pointed_models(), st.integers(0, 3))
def test_unravel_is_depth_bisimilar(p, d):
    assert k_bisimilar(unravel_to_depth(p, d), p, d)


@settings(max_examples=60, deadline=None)
@given(pointed_models())
def test_generated_submodel_is_bisimilar(p):
    assert bisimilar(generated_submodel(p), p)


@settings(max_examples=40, deadline=None)
@given(model_classes(max_members=3, alphabet=("p", "q")))
def test_union_preserves_evaluation(c):
    model, points = union_of(c.members)
    fs = enumerate_formulas(("p", "q"), 2, 4)
    for member, i in zip(c, points):
        tagged = PointedModel(model, model.states[i])
        for f in fs:
            assert ev(tagged, f, ("p", "q")) == ev(member, f, ("p", "q"))


@settings(max_examples=60, deadline=None)
@given(model_classes(max_members=4, alphabet=("p", "q")))
def test_save_load_round_trip(c):
    for fmt in ("json", "dsl"):
        back = load_class(save_class(c, fmt), fmt)
        assert list(back) == list(c)


def test_save_is_deterministic():
    c = ModelClass([loop(), chain(2), cycle(3)], "mixed")
    assert save_class(c) == save_class(load_class(save_class(c)))
    assert save_class(c, "dsl") == save_class(load_class(save_class(c, "dsl")), "dsl")
