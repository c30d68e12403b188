import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nexact.algebra import (AlgebraError, NotFiniteDimensional, Quiver, Relation, build_algebra,
                            format_relation, opposite_algebra)
from nexact.fixtures import fixture


def count_monomial_paths(vertices, arrows, relations, max_len=12):
    """Paths avoiding every relation as a consecutive subpath (traversal order)."""
    rels = [tuple(r) for r in relations]
    total = len(vertices)
    layer = [(a[0],) for a in arrows]
    by_name = {a[0]: a for a in arrows}
    for _ in range(max_len):
        alive = [pt for pt in layer
                 if not any(pt[i:i + len(r)] == r for r in rels for i in range(len(pt)))]
        total += len(alive)
        layer = [pt + (a[0],) for pt in alive for a in arrows if a[1] == by_name[pt[-1]][2]]
        if not layer:
            break
    return total


def test_field_fixture():
    a = fixture("A")
    assert a.dim == 1
    assert a.projective("1").dims == (1,)


def test_fix_b_and_c_dimensions():
    b = fixture("B")
    assert b.dim == 3
    assert [str(x) for x in b.basis] == ["e1", "a", "e2"]
    assert b.projective("1").dims == (1, 1)
    assert b.projective("2").dims == (0, 1)
    c = fixture("C")
    assert c.dim == 5
    assert [P.dims for P in c.projectives] == [(1, 1, 0), (0, 1, 1), (0, 0, 1)]
    assert fixture("D").dim == 2


def test_opposites():
    a = fixture("A")
    assert opposite_algebra(a).dim == 1
    bop = fixture("B").opposite()
    assert bop.dim == 3
    (arrow,) = bop.quiver.arrows
    assert (arrow.source, arrow.target) == ("2", "1")
    cop = fixture("C").opposite()
    assert cop.dim == 5
    assert [(x.source, x.target) for x in cop.quiver.arrows] == [("2", "1"), ("3", "2")]
    assert [format_relation(r) for r in cop.relations] == ["a* * b*".replace(" ", "")]
    assert cop.opposite() is fixture("C")
    assert [P.dims for P in cop.projectives] == [(1, 0, 0), (1, 1, 0), (0, 1, 1)]


@pytest.mark.parametrize("name", "ABCDEF")
def test_fixtures_associative(name):
    a = fixture(name)
    assert a.is_associative()
    assert a.opposite().is_associative()
    one = a.one()
    for i in range(a.dim):
        x = np.zeros(a.dim, dtype=np.int64)
        x[i] = 1
        assert np.array_equal(a.multiply(one, x), x)
        assert np.array_equal(a.multiply(x, one), x)


def test_commutative_square():
    q = Quiver.from_edges("1234", [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"),
                                   ("d", "3", "4")])
    a = build_algebra(q, [Relation(((1, ("a", "b")), (-1, ("c", "d"))))], p=3)
    assert a.dim == 9
    assert a.is_associative()
    assert np.array_equal(a.element(("a", "b")), a.element(("c", "d")))
    assert format_relation(a.relations[0]) == "b*a - d*c"


def test_rejects_bad_input():
    q = Quiver.from_edges("1", [("x", "1", "1")])
    with pytest.raises(NotFiniteDimensional):
        build_algebra(q, [], cap=6)
    with pytest.raises(AlgebraError):
        build_algebra(q, [Relation.monomial("x", "x")], p=4)
    q2 = Quiver.from_edges("12", [("a", "1", "2")])
    with pytest.raises(AlgebraError):
        build_algebra(q2, [Relation.monomial("a", "a")])


@st.composite
def monomial_algebras(draw):
    nv = draw(st.integers(1, 4))
    vs = [str(i) for i in range(1, nv + 1)]
    edges = [(s, t) for s in vs for t in vs if s < t]
    chosen = draw(st.lists(st.sampled_from(edges), max_size=4)) if edges else []
    arrows = [(f"x{i}", s, t) for i, (s, t) in enumerate(chosen)]
    pairs = [(a, b) for a in arrows for b in arrows if a[2] == b[1]]
    rels = draw(st.lists(st.sampled_from(pairs), max_size=3, unique=True)) if pairs else []
    return vs, arrows, [(a[0], b[0]) for a, b in rels]


@settings(max_examples=40, deadline=None)
@given(monomial_algebras(), st.sampled_from([2, 3]))
def test_monomial_dimension_matches_path_count(spec, p):
    vs, arrows, rels = spec
    a = build_algebra(Quiver.from_edges(vs, arrows),
                      [Relation(((1, r),)) for r in rels], p=p)
    assert a.dim == count_monomial_paths(vs, arrows, rels)
    assert a.is_associative()
    op = a.opposite()
    assert op.dim == a.dim and op.is_associative()
    assert sum(P.total_dim for P in a.projectives) == a.dim
