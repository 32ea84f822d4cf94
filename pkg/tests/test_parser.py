import random

import pytest
from hypothesis import given, strategies as st

import oracles
from cqarepair import parser as ps
from cqarepair.parser import ParseError
from cqarepair.relational import Comparison, DbTuple, Var
from cqarepair.semantics import ASpec

seeds = st.integers(0, 2 ** 32 - 1)


def assert_span_inside(text, exc):
    span = exc.value.span
    assert 0 <= span.start <= span.end <= len(text.encode("utf-8"))
    assert span.line >= 1 and span.column >= 1


def test_schema_examples(keyed):
    assert keyed.schema["P"].attribute_names == ("X", "Y", "Z")
    assert len(ps.parse_schema("")) == 0
    text = "relation R(A: int)\nrelation R(B: int)"
    with pytest.raises(ParseError, match="duplicate") as exc:
        ps.parse_schema(text)
    assert exc.value.span.line == 2
    for bad in ("relation R()", "relation R(A: float)", "relation R(A int)", "table R(A: int)"):
        with pytest.raises(ParseError) as exc:
            ps.parse_schema(bad)
        assert_span_inside(bad, exc)


def test_fd_sugar(keyed):
    (c,) = ps.parse_constraints("fd P: X -> Y", keyed.schema)
    a1, a2 = c.atoms
    assert a1.relation == a2.relation == "P"
    assert a1.terms[0] == a2.terms[0] and a1.terms[1] != a2.terms[1]
    assert c.comparisons == (Comparison(a1.terms[1], "!=", a2.terms[1]),)
    with pytest.raises(ParseError, match="W"):
        ps.parse_constraints("fd P: X -> W", keyed.schema)


def test_denial_examples(keyed):
    s = ps.parse_schema("relation R(X: int)\nrelation S(X: int)")
    (c,) = ps.parse_constraints("deny R(x), S(y)", s)
    assert [a.relation for a in c.atoms] == ["R", "S"] and not c.comparisons
    (c,) = ps.parse_constraints("deny P(x) where x < x", ps.parse_schema("relation P(X: int)"))
    assert c.comparisons == (Comparison(Var("x"), "<", Var("x")),)
    (c,) = ps.parse_constraints("deny P(x,y,z), P(x,y2,z2) where y != y2", keyed.schema)
    assert len(c.atoms) == 2
    for bad in ("deny R(x) where y > 1", "deny Q(x)", "deny R(x, y)", "deny R(x) where x ~ 1"):
        with pytest.raises(ParseError) as exc:
            ps.parse_constraints(bad, s)
        assert_span_inside(bad, exc)


def test_query_examples(keyed):
    q = ps.parse_query("q(x,y,z) := P(x,y,z)", keyed.schema)
    assert q.head == ("x", "y", "z") and not q.is_boolean
    q = ps.parse_query("q() := P(a,c,d)", keyed.schema)
    assert q.is_boolean and q.is_ground
    s = ps.parse_schema("relation R(X: sym, Y: sym)\nrelation T(X: sym)")
    q = ps.parse_query("q(x) := exists y R(x,y), not T(y)", s)
    assert q.existential == {"y"} and len(q.negative_atoms) == 1
    for bad in ("q(y) := not T(y)", "q(x) := Z(x)", "q(x) := R(x,y) where", "q(x) R(x,y)"):
        with pytest.raises(ParseError) as exc:
            ps.parse_query(bad, s)
        assert_span_inside(bad, exc)
    with pytest.raises(ParseError, match="one query"):
        ps.parse_query("q() := T(a)\nq() := T(b)", s)


def test_update_examples(keyed):
    u = ps.parse_updates("insert P(a,f,d)", keyed.schema)
    assert [op.kind for op in u] == ["insert"]
    assert len(ps.parse_updates("", keyed.schema)) == 0
    (op,) = ps.parse_updates("change P(a,b,c) Y = q", keyed.schema)
    assert op.attribute == "Y" and op.value == "q"
    for bad in ("change P(a,b,c) W = q", "insert P(a,b)", "upsert P(a,b,c)"):
        with pytest.raises(ParseError) as exc:
            ps.parse_updates(bad, keyed.schema)
        assert_span_inside(bad, exc)


def test_csv_examples(keyed, tmp_path):
    (tmp_path / "P.csv").write_text("a,b,c\na,c,d\na,c,e\na,b,c\n")
    assert ps.parse_instance(tmp_path, keyed.schema) == keyed.d
    (tmp_path / "P.csv").write_text("")
    assert len(ps.parse_instance(tmp_path, keyed.schema)) == 0
    rel = ps.parse_schema("relation R(A: int, B: sym)")["R"]
    text = "1,x\n2\n"
    with pytest.raises(ParseError, match="row 2") as exc:
        ps.parse_csv(text, rel)
    assert exc.value.span.line == 2
    assert_span_inside(text, exc)
    with pytest.raises(ParseError, match="not an integer"):
        ps.parse_csv("x,y\n", rel)
    assert ps.parse_csv('3,"a, b"\n', rel) == {DbTuple("R", (3, "a, b"))}


def test_weights_and_aspec(keyed):
    w = ps.parse_weights("weight P(a,b,c) = 5", keyed.schema)
    assert list(w.values()) == [5]
    with pytest.raises(ParseError):
        ps.parse_weights("weight P(a,b,c) = 0", keyed.schema)
    spec = ps.parse_aspec("fixable P.Y; candidates P.Y = {b,c}; rule = unit", keyed.schema)
    assert spec == ASpec((("P", "Y"),), {("P", "Y"): ("b", "c")}, "unit")
    with pytest.raises(ParseError):
        ps.parse_aspec("fixable P.Y", keyed.schema)
    with pytest.raises(ParseError):
        ps.parse_aspec("fixable P.W; candidates P.W = {1}", keyed.schema)


def test_quoted_and_capitalised_constants():
    s = ps.parse_schema("relation R(X: sym, Y: int)")
    d = ps.parse_facts('R("hello world", -3)\nR(Alice, 4)', s)
    assert sorted(t.values for t in d) == [("Alice", 4), ("hello world", -3)]
    assert ps.parse_facts(ps.format_facts(d), s) == d


@given(seeds)
def test_round_trip(seed):
    rng = random.Random(seed)
    schema, d, ic = oracles.random_problem(rng)
    assert ps.parse_schema(ps.format_schema(schema)) == schema
    assert ps.parse_constraints(ps.format_constraints(ic), schema) == ic
    assert ps.parse_facts(ps.format_facts(d), schema) == d
    q = oracles.random_conjunctive_query(rng, schema)
    assert ps.parse_query(ps.format_query(q), schema) == q
    w = {t: rng.randint(1, 9) for t in d}
    assert ps.parse_weights(ps.format_weights(w), schema) == w
    for rel in schema:
        assert ps.parse_csv(ps.format_csv(d, rel.name), rel) == set(d.relation(rel.name))


@given(seeds)
def test_update_and_aspec_round_trip(seed):
    rng = random.Random(seed)
    ic = oracles.fd_schema_constraints()
    d = oracles.random_consistent_instance(rng, rng.randint(0, 8), 3, ic)
    u = oracles.random_update(rng, d, rng.randint(0, 5), 3)
    assert ps.parse_updates(ps.format_updates(u), d.schema) == u
    spec = ASpec((("P", "B"), ("R", "A")), {("P", "B"): tuple(rng.sample(range(9), 3)), ("R", "A"): (0,)},
                 rng.choice(["unit", "squared"]))
    assert ps.parse_aspec(ps.format_aspec(spec), d.schema) == spec


@given(st.text(max_size=40))
def test_errors_point_inside_the_input(text):
    schema = oracles.FD_SCHEMA
    for fn in (ps.parse_schema, lambda t: ps.parse_constraints(t, schema), lambda t: ps.parse_query(t, schema),
               lambda t: ps.parse_updates(t, schema), lambda t: ps.parse_facts(t, schema)):
        try:
            fn(text)
        except ParseError as e:
            size = len(text.encode("utf-8"))
            assert 0 <= e.span.start <= e.span.end <= size
