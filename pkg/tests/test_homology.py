import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_module
from nexact import linalg as la
from nexact.fixtures import fixture
from nexact.homology import (Complex, ComplexError, NotInExn, complete_n_kernel,
                             direct_sum_complex, ext_dim, fun_of_complex, is_left_n_exact,
                             is_n_exact, is_right_n_exact, minimal_resolution, op_complex, pdim,
                             projective_cover, res_fun_witness, res_of_module, transpose,
                             zero_complex)
from nexact.modcat import (direct_sum, ext1_dim, hom_dim, identity_morphism, is_exact_at,
                           is_isomorphic, morphism_from_elements, projective_module,
                           radical_family, simple, zero_module, zero_morphism)


def elem_map(alg, src_vs, tgt_vs, entries):
    """Map between standard projectives from ``{(i, j): (path, start)}``."""
    src, tgt = projective_module(alg, src_vs), projective_module(alg, tgt_vs)
    elems = np.zeros((len(tgt_vs), len(src_vs), alg.dim), dtype=np.int64)
    for (i, j), (path, start) in entries.items():
        elems[i, j] = alg.element(path, start=start)
    return morphism_from_elements(src, tgt, elems)


def radical_chain(c, pad=0):
    """P3 -> P2 -> P1 over FIX-C, followed by ``pad`` zero terms on the left."""
    d1 = elem_map(c, ("2",), ("1",), {(0, 0): (("a",), "1")})
    d2 = elem_map(c, ("3",), ("2",), {(0, 0): (("b",), "2")})
    terms, diffs = [d1.target, d1.source, d2.source], [d1, d2]
    z = projective_module(c, ())
    for _ in range(pad):
        diffs.append(zero_morphism(z, terms[-1]))
        terms.append(z)
    return Complex(terms, diffs)


# -- projective covers and resolutions ---------------------------------------------
def test_projective_cover_examples():
    c = fixture("C")
    P, e = projective_cover(simple(c, "1"))
    assert P.proj_vertices == ("1",) and e.is_epi()
    P1 = c.projective("1")
    P, e = projective_cover(P1)
    assert P.proj_vertices == ("1",) and e.is_iso()
    P, e = projective_cover(zero_module(c))
    assert P.total_dim == 0


def test_resolution_of_s1():
    c = fixture("C")
    res = minimal_resolution(simple(c, "1"), 4)
    assert res.terminated and res.length == 2
    assert [t.proj_vertices for t in res.complex.terms] == [("1",), ("2",), ("3",)]
    assert res.complex.describe() == "0 -> P3 -> P2 -> P1"
    assert str(pdim(simple(c, "1"), 4)) == "2"
    for v in c.vertices:
        assert minimal_resolution(c.projective(v), 3).length == 0
        assert str(pdim(c.projective(v), 3)) == "0"


def test_self_syzygy():
    d = fixture("D")
    s = simple(d, "1")
    res = minimal_resolution(s, 8)
    assert not res.terminated
    assert str(res.pdim) == ">= 9"
    assert all(t.proj_vertices == ("1",) for t in res.complex.terms)


def test_ext_examples():
    c = fixture("C")
    s1 = simple(c, "1")
    assert ext_dim(s1, c.projective("3"), 2) == 1
    assert ext_dim(s1, c.projective("1"), 1) == 0
    for v in c.vertices:
        for w in c.vertices:
            for i in (1, 2):
                assert ext_dim(c.projective(v), simple(c, w), i) == 0


# -- n-exactness -----------------------------------------------------------------
def test_left_exactness_examples():
    c = fixture("C")
    x = radical_chain(c, pad=1)
    assert is_left_n_exact(x, 2)
    assert not is_n_exact(x, 2)  # Ext^2(S1, P3) != 0
    assert is_n_exact(radical_chain(c), 1)
    assert is_right_n_exact(radical_chain(c), 1)
    for n in (1, 2):
        assert is_n_exact(zero_complex(c, n + 2), n)


def test_contractible_padding():
    c = fixture("C")
    P1 = c.projective("1")
    z = projective_module(c, ())
    x = Complex([P1, P1, z], [identity_morphism(P1), zero_morphism(z, P1)])
    assert is_n_exact(x, 1)
    assert fun_of_complex(x).total_dim == 0


def test_shape_errors():
    c = fixture("C")
    with pytest.raises(ComplexError):
        is_n_exact(radical_chain(c), 2)
    with pytest.raises(ValueError):
        is_n_exact(radical_chain(c), 0)


def test_fun_and_res_examples():
    c = fixture("C")
    s1 = simple(c, "1")
    assert is_isomorphic(fun_of_complex(radical_chain(c)), s1)[0]
    x = res_of_module(s1, 1)
    assert x.describe() == "0 -> P3 -> P2 -> P1"
    z = res_of_module(zero_module(c), 1)
    assert len(z.terms) == 3 and all(t.total_dim == 0 for t in z.terms)
    with pytest.raises(NotInExn):
        res_of_module(simple(c, "2"), 1)
    both = direct_sum_complex(x, x)
    assert is_n_exact(both, 1)
    assert is_isomorphic(fun_of_complex(both), direct_sum([s1, s1]))[0]


def test_op_complex_examples():
    c = fixture("C")
    x = radical_chain(c)
    y = op_complex(x)
    assert y.side == "Aop"
    assert [t.proj_vertices for t in y.terms] == [("3",), ("2",), ("1",)]
    assert is_left_n_exact(y, 1)
    back = op_complex(y)
    assert back.algebra is c
    for i in (1, 2):
        assert np.array_equal(back.d(i).to_elements(), x.d(i).to_elements())
    z = op_complex(zero_complex(c, 3))
    assert all(t.total_dim == 0 for t in z.terms)


def test_complete_n_kernel_examples():
    c = fixture("C")
    full = radical_chain(c)
    again = complete_n_kernel(full, 1)
    assert [t.proj_vertices for t in again.terms] == [("1",), ("2",), ("3",)]
    part = Complex(full.terms[:2], full.diffs[:1])
    done = complete_n_kernel(part, 1)
    assert done.terms[2].proj_vertices == ("3",)
    P1 = c.projective("1")
    done = complete_n_kernel(Complex([P1, P1], [identity_morphism(P1)]), 1)
    assert done.terms[2].total_dim == 0
    d = fixture("D")
    loop = elem_map(d, ("1",), ("1",), {(0, 0): (("x",), "1")})
    with pytest.raises(ComplexError):
        complete_n_kernel(Complex([loop.target, loop.source], [loop]), 1)


def test_transpose_examples():
    c = fixture("C")
    t = transpose(simple(c, "1"), 1)
    assert t.side == "Aop" and t.dims == (0, 0, 1)
    assert is_isomorphic(transpose(t, 1), simple(c, "1"))[0]
    assert transpose(zero_module(c), 1).total_dim == 0


def test_res_fun_witness_on_padded_sequence():
    c = fixture("C")
    x = radical_chain(c)
    P2 = c.projective("2")
    pad = Complex([P2, P2, projective_module(c, ())],
                  [identity_morphism(P2), zero_morphism(projective_module(c, ()), P2)])
    w = res_fun_witness(direct_sum_complex(x, pad), 1)
    assert w.verify()


# -- invariants ------------------------------------------------------------------
dims_c = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))


@settings(max_examples=40, deadline=None)
@given(dims_c, st.integers(0, 2 ** 16))
def test_resolution_is_exact_and_minimal(d, seed):
    c = fixture("C")
    m = random_module(c, d, np.random.default_rng(seed))
    res = minimal_resolution(m, 6)
    assert res.terminated  # FIX-C has global dimension 2
    assert res.length <= 2
    x = res.complex
    assert res.augmentation.is_epi()
    if x.top:
        assert is_exact_at(x.d(1), res.augmentation)
        assert x.d(x.top).is_mono()
    for i in range(1, x.top):
        assert is_exact_at(x.d(i + 1), x.d(i))
    # minimal: each differential lands in the radical
    for i in range(1, x.top + 1):
        rad = radical_family(x.terms[i - 1])
        for k, mat in enumerate(x.d(i).mats):
            cols = rad.columns(k)
            assert la.rank(np.hstack([cols, mat]), 2) == la.rank(cols, 2)


@settings(max_examples=40, deadline=None)
@given(dims_c, dims_c, st.integers(0, 2 ** 16))
def test_ext1_two_ways(dz, dx, seed):
    c = fixture("C")
    rng = np.random.default_rng(seed)
    z, x = random_module(c, dz, rng), random_module(c, dx, rng)
    assert ext_dim(z, x, 1) == ext1_dim(z, x)
    assert ext_dim(z, x, 0) == hom_dim(z, x)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["1", "2", "3"]), st.sampled_from(["1", "2", "3"]))
def test_transpose_dims_are_ext(v, w):
    c = fixture("C")
    f = simple(c, v)
    if ext_dim(f, c.projective(w), 0) or pdim(f, 4).value != 2:
        return
    t = transpose(f, 1)
    assert t.dims[c.quiver.index(w)] == ext_dim(f, c.projective(w), 2)
