"""Complexes of projectives, minimal resolutions, Ext, and the transpose.

A :class:`Complex` stores ``terms[i] = X_i`` and ``diffs[i - 1] = d_i``
with ``d_i: X_i -> X_{i-1}``.  An n-exact sequence has terms
``X_{n+1}, ..., X_0``; its functor is ``Cok d_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, Path
from .modcat import (HomSpace, ModMorphism, Module, _summand_offsets, cokernel,
                     factor_through_epi, identity_morphism, is_exact_at, kernel,
                     morphism_from_elements, morphism_from_generators, projective_module,
                     radical_family, zero_module, zero_morphism)


class ComplexError(ValueError):
    pass


class NotInExn(ValueError):
    """A module was required to lie in ex_n but does not."""


class Complex:
    def __init__(self, terms: Sequence[Module], diffs: Sequence[ModMorphism], check: bool = True):
        self.terms = list(terms)
        self.diffs = list(diffs)
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ComplexError("need exactly one differential between adjacent terms")
        if not self.terms:
            raise ComplexError("a complex needs at least one term")
        for i, d in enumerate(self.diffs, start=1):
            if d.source.dims != self.terms[i].dims or d.target.dims != self.terms[i - 1].dims:
                raise ComplexError(f"d_{i} has the wrong source or target")
        if check:
            for i in range(2, len(self.terms)):
                if not (self.d(i - 1) @ self.d(i)).is_zero():
                    raise ComplexError(f"d_{i - 1} d_{i} != 0")

    @property
    def algebra(self) -> Algebra:
        return self.terms[0].algebra

    @property
    def side(self) -> str:
        return self.algebra.side

    @property
    def top(self) -> int:
        return len(self.terms) - 1

    def d(self, i: int) -> ModMorphism:
        return self.diffs[i - 1]

    def is_projective(self) -> bool:
        return all(t.proj_vertices is not None for t in self.terms)

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "terms": [{"degree": i, "summands": [f"P{v}" for v in t.proj_vertices]
                       if t.proj_vertices is not None else None, "dims": list(t.dims)}
                      for i, t in reversed(list(enumerate(self.terms)))],
            "differentials": [self._diff_dict(i) for i in range(self.top, 0, -1)],
        }

    def _diff_dict(self, i: int) -> dict:
        d = self.d(i)
        out = {"degree": i, "per_vertex": [m.tolist() for m in d.mats]}
        if self.is_projective():
            alg = self.algebra
            out["elements"] = [[alg.element_str(x) for x in row] for row in d.to_elements()]
        return out

    def describe(self) -> str:
        names = []
        for t in reversed(self.terms):
            if t.proj_vertices is None:
                names.append(repr(t))
            else:
                names.append(" + ".join(f"P{v}" for v in t.proj_vertices) or "0")
        return "0 -> " + " -> ".join(names)


def zero_complex(algebra: Algebra, length: int) -> Complex:
    z = zero_module(algebra)
    return Complex([z] * length, [zero_morphism(z, z)] * (length - 1))


def direct_sum_complex(x: Complex, y: Complex) -> Complex:
    from .modcat import block_morphism, direct_sum

    if len(x.terms) != len(y.terms):
        raise ComplexError("complexes of different lengths")
    terms = [direct_sum([a, b], x.algebra) for a, b in zip(x.terms, y.terms)]
    diffs = []
    for i in range(1, len(terms)):
        dx, dy = x.d(i), y.d(i)
        diffs.append(block_morphism(
            [[dx, zero_morphism(y.terms[i], x.terms[i - 1])],
             [zero_morphism(x.terms[i], y.terms[i - 1]), dy]],
            [x.terms[i], y.terms[i]], [x.terms[i - 1], y.terms[i - 1]],
            source_sum=terms[i], target_sum=terms[i - 1]))
    return Complex(terms, diffs)


# -- projective covers and resolutions ---------------------------------------------
def generator_positions(P: Module) -> list[tuple[str, int]]:
    """For a standard projective: (vertex, coordinate) of each generator ``e_v``."""
    alg = P.algebra
    offs = _summand_offsets(alg, P.proj_vertices)
    out = []
    for j, v in enumerate(P.proj_vertices):
        pos = alg.paths_between(v, v).index(alg.index[Path(v, (), v)])
        out.append((v, offs[j][v] + pos))
    return out


def projective_cover(m: Module) -> tuple[Module, ModMorphism]:
    """Minimal epimorphism from a standard projective onto ``m``."""
    rad = radical_family(m)
    vertices, images = [], []
    for k, v in enumerate(m.vertices):
        lift = la.complement_basis(rad.columns(k), m.p)
        for j in range(lift.shape[1]):
            vertices.append(v)
            images.append(lift[:, j])
    P = projective_module(m.algebra, vertices)
    return P, morphism_from_generators(P, m, images)


@dataclass(frozen=True)
class PDim:
    value: int
    exact: bool

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">= {self.value}"


@dataclass(frozen=True)
class Resolution:
    """Minimal projective resolution, truncated at ``bound`` if it did not stop."""

    module: Module
    complex: Complex
    augmentation: ModMorphism
    terminated: bool
    bound: int

    @property
    def length(self) -> int:
        return self.complex.top

    @property
    def pdim(self) -> PDim:
        if self.terminated:
            return PDim(0 if self.module.is_zero() else self.length, True)
        return PDim(self.bound + 1, False)


def minimal_resolution(m: Module, bound: int) -> Resolution:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    P0, eps = projective_cover(m)
    terms, diffs = [P0], []
    K, inc = kernel(eps)
    while not K.is_zero() and len(terms) <= bound:
        P, e = projective_cover(K)
        terms.append(P)
        diffs.append(inc @ e)
        # ker(inc e) = ker(e) because inc is mono
        K, inc = kernel(e)
    return Resolution(m, Complex(terms, diffs, check=False), eps, K.is_zero(), bound)


def pdim(m: Module, bound: int) -> PDim:
    if m.is_zero():
        return PDim(0, True)
    return minimal_resolution(m, bound).pdim


def hom_dual_matrix(d: ModMorphism, n: Module) -> np.ndarray:
    """Matrix of ``Hom(d, n)`` in generator coordinates.

    For ``d: P -> Q`` between standard projectives this is the map
    ``(+)_j n_{w_j} -> (+)_k n_{v_k}``, ``g -> g d``.
    """
    elems = d.to_elements()
    vs, ws = d.source.proj_vertices, d.target.proj_vertices
    rows = [n.action(elems[j, k], w, v) for k, v in enumerate(vs) for j, w in enumerate(ws)]
    rdims = [n.dim(v) for v in vs]
    cdims = [n.dim(w) for w in ws]
    out = la.zeros(sum(rdims), sum(cdims))
    r = 0
    idx = 0
    for k in range(len(vs)):
        c = 0
        for j in range(len(ws)):
            out[r:r + rdims[k], c:c + cdims[j]] = rows[idx]
            idx += 1
            c += cdims[j]
        r += rdims[k]
    return out


def hom_cohomology(x: Complex, n: Module) -> list[int]:
    """Dimensions of the cohomology of ``Hom(x, n)`` in every degree."""
    p = n.p
    h = [sum(n.dim(v) for v in t.proj_vertices) for t in x.terms]
    ranks = [0] + [la.rank(hom_dual_matrix(x.d(i), n), p) for i in range(1, x.top + 1)] + [0]
    return [h[i] - ranks[i + 1] - ranks[i] for i in range(len(h))]


def ext_dim(m: Module, n: Module, i: int) -> int:
    if i < 0:
        raise ValueError("degree must be non-negative")
    if m.is_zero():
        return 0
    res = minimal_resolution(m, i + 1)
    if i > res.length:
        return 0
    return hom_cohomology(res.complex, n)[i]


def ext_table(res: Resolution, degrees: Sequence[int]) -> dict:
    """``{i: (dim Ext^i(m, P_v) for v)}`` read off a resolution."""
    alg = res.module.algebra
    out = {}
    per_v = [hom_cohomology(res.complex, P) for P in alg.projectives]
    for i in degrees:
        out[i] = tuple(c[i] if i <= res.length else 0 for c in per_v)
    return out


# -- n-exactness ----------------------------------------------------------------
def _require_shape(x: Complex, n: int):
    if n < 1:
        raise ValueError("n must be a positive integer")
    if len(x.terms) != n + 2:
        raise ComplexError(f"expected {n + 2} terms X_{n + 1} ... X_0, got {len(x.terms)}")
    if not x.is_projective():
        raise ComplexError("terms must be standard projectives")


def is_left_n_exact(x: Complex, n: int) -> bool:
    """Pointwise exact at degrees 1..n and ``d_{n+1}`` injective."""
    _require_shape(x, n)
    if not x.d(n + 1).is_mono():
        return False
    return all(is_exact_at(x.d(i + 1), x.d(i)) for i in range(1, n + 1))


def is_right_n_exact(x: Complex, n: int) -> bool:
    """``Hom(x, P_v)`` is exact at degrees 0..n for every vertex ``v``."""
    _require_shape(x, n)
    for P in x.algebra.projectives:
        coh = hom_cohomology(x, P)
        if any(coh[i] for i in range(n + 1)):
            return False
    return True


def ex_n_obstruction(f: Module, n: int, res: Optional[Resolution] = None) -> Optional[str]:
    """``None`` if ``f`` lies in ex_n, otherwise the first failing condition."""
    if f.is_zero():
        return None
    res = res or minimal_resolution(f, n + 1)
    pd = res.pdim
    if not pd.exact:
        return f"pdim {pd} != n+1 = {n + 1}"
    if pd.value != n + 1:
        return f"pdim = {pd} != n+1 = {n + 1}"
    table = ext_table(res, range(n + 1))
    for i in range(n + 1):
        if any(table[i]):
            return f"Ext^{i}(F, P_v) = {table[i]} is not zero"
    return None


def in_ex_n(f: Module, n: int) -> bool:
    return ex_n_obstruction(f, n) is None


def fun_of_complex(x: Complex) -> Module:
    if x.top == 0:
        return cokernel(zero_morphism(zero_module(x.algebra), x.terms[0]))[0]
    m, _ = cokernel(x.d(1))
    m.name = "Fun"
    return m


def is_n_exact(x: Complex, n: int) -> bool:
    """Left n-exact with ``Ext^i(Cok d_1, P_v) = 0`` for ``i <= n``."""
    if not is_left_n_exact(x, n):
        return False
    f = fun_of_complex(x)
    return all(ext_dim(f, P, i) == 0 for P in x.algebra.projectives for i in range(n + 1))


def res_of_module(f: Module, n: int) -> Complex:
    """The minimal resolution of an ex_n member as an n-exact sequence."""
    if f.is_zero():
        return zero_complex(f.algebra, n + 2)
    res = minimal_resolution(f, n + 1)
    why = ex_n_obstruction(f, n, res)
    if why:
        raise NotInExn(f"{f!r} is not in ex_{n}: {why}")
    return res.complex


# -- chain maps and homotopies ----------------------------------------------------
def lift_from_projective(h: ModMorphism, e: ModMorphism) -> ModMorphism:
    """``psi`` with ``e @ psi == h``; ``h`` starts at a standard projective."""
    P = h.source
    images = []
    for v, pos in generator_positions(P):
        y = la.solve_linear(e.at(v), h.at(v)[:, pos], h.p)
        if y is None:
            raise ValueError("map does not lift: image not contained in the target's image")
        images.append(y)
    return morphism_from_generators(P, e.source, images)


def lift_chain_map(x: Complex, y: Complex, g: ModMorphism) -> list[ModMorphism]:
    """Chain map ``x -> y`` of projective resolutions lifting ``g: Fun x -> Fun y``.

    ``x`` must consist of projectives and ``y`` must be exact in positive
    degrees up to the length of ``x``.
    """
    _, px = cokernel(x.d(1)) if x.top else (None, identity_morphism(x.terms[0]))
    _, py = cokernel(y.d(1)) if y.top else (None, identity_morphism(y.terms[0]))
    maps = [lift_from_projective(g @ px, py)]
    for i in range(1, x.top + 1):
        target = maps[-1] @ x.d(i)
        if i > y.top:
            if not target.is_zero():
                raise ValueError("chain map does not fit into the shorter complex")
            maps.append(zero_morphism(x.terms[i], zero_module(x.algebra)))
            continue
        maps.append(lift_from_projective(target, y.d(i)))
    return maps


def is_chain_map(x: Complex, y: Complex, maps: Sequence[ModMorphism]) -> bool:
    for i in range(1, min(x.top, y.top) + 1):
        if not (y.d(i) @ maps[i]).equals(maps[i - 1] @ x.d(i)):
            return False
    return True


def homotopy(x: Complex, h: Sequence[ModMorphism]) -> Optional[list[ModMorphism]]:
    """Solve ``h_i = d_{i+1} s_i + s_{i-1} d_i`` for ``s_i: X_i -> X_{i+1}``.

    Returns ``None`` when ``h`` is not null-homotopic.
    """
    top = x.top
    spaces = [HomSpace(x.terms[i], x.terms[i + 1]) for i in range(top)]
    cols_per_degree = []
    rows = []
    for i in range(top + 1):
        rows.append(h[i].vector())
    for i, sp in enumerate(spaces):
        cols = []
        for b in sp.basis:
            contrib = []
            for k in range(top + 1):
                if k == i:
                    contrib.append((x.d(i + 1) @ b).vector())
                elif k == i + 1:
                    contrib.append((b @ x.d(i + 1)).vector())
                else:
                    contrib.append(np.zeros(rows[k].shape, dtype=la.DTYPE))
            cols.append(np.concatenate(contrib))
        cols_per_degree.append(cols)
    target = np.concatenate(rows)
    all_cols = [c for cols in cols_per_degree for c in cols]
    if not all_cols:
        if np.any(target):
            return None
        return [zero_morphism(sp.source, sp.target) for sp in spaces]
    system = np.array(all_cols, dtype=la.DTYPE).T
    sol = la.solve_linear(system, target, x.algebra.p)
    if sol is None:
        return None
    out, k = [], 0
    for sp in spaces:
        out.append(sp.combine(sol[k:k + sp.dim]) if sp.dim else zero_morphism(sp.source, sp.target))
        k += sp.dim
    return out


def verify_homotopy(x: Complex, h: Sequence[ModMorphism], s: Sequence[ModMorphism]) -> bool:
    for i in range(x.top + 1):
        total = zero_morphism(x.terms[i], x.terms[i])
        if i < x.top:
            total = total + x.d(i + 1) @ s[i]
        if i > 0:
            total = total + s[i - 1] @ x.d(i)
        if not total.equals(h[i]):
            return False
    return True


@dataclass(frozen=True)
class HomotopyEquivalence:
    """``phi: x -> y`` and ``psi: y -> x`` with homotopies to the identities."""

    x: Complex
    y: Complex
    phi: list
    psi: list
    s_x: list
    s_y: list

    def verify(self) -> bool:
        ok = is_chain_map(self.x, self.y, self.phi) and is_chain_map(self.y, self.x, self.psi)
        hx = [identity_morphism(t) - b @ a for t, a, b in zip(self.x.terms, self.phi, self.psi)]
        hy = [identity_morphism(t) - a @ b for t, a, b in zip(self.y.terms, self.phi, self.psi)]
        return ok and verify_homotopy(self.x, hx, self.s_x) and verify_homotopy(self.y, hy, self.s_y)


def homotopy_equivalence(x: Complex, y: Complex, g: ModMorphism) -> HomotopyEquivalence:
    """Certificate that two resolutions related by an isomorphism ``g`` are homotopic."""
    if len(x.terms) != len(y.terms):
        raise ComplexError("complexes of different lengths")
    ginv = factor_through_epi(identity_morphism(g.source), g)
    phi = lift_chain_map(x, y, g)
    psi = lift_chain_map(y, x, ginv)
    hx = [identity_morphism(t) - b @ a for t, a, b in zip(x.terms, phi, psi)]
    hy = [identity_morphism(t) - a @ b for t, a, b in zip(y.terms, phi, psi)]
    s_x, s_y = homotopy(x, hx), homotopy(y, hy)
    if s_x is None or s_y is None:
        raise AssertionError("no chain homotopy found for a lift of the identity")
    eq = HomotopyEquivalence(x, y, phi, psi, s_x, s_y)
    if not eq.verify():
        raise AssertionError("homotopy certificate does not verify")
    return eq


def res_fun_witness(x: Complex, n: int) -> HomotopyEquivalence:
    """Homotopy equivalence between an n-exact sequence and Res(Fun(x))."""
    f = fun_of_complex(x)
    y = res_of_module(f, n)
    fy = fun_of_complex(y)
    # Fun(y) is a fresh quotient of Y_0; compare through an explicit isomorphism
    from .modcat import is_isomorphic

    ok, iso = is_isomorphic(f, fy)
    if not ok:
        raise AssertionError("Fun(Res(F)) is not isomorphic to F")
    return homotopy_equivalence(x, y, iso)


# -- duality ----------------------------------------------------------------------
def dual_morphism(d: ModMorphism, source: Module, target: Module) -> ModMorphism:
    """``Hom(d, A)`` between the corresponding projectives on the opposite side."""
    elems = d.to_elements().transpose(1, 0, 2)
    return morphism_from_elements(source, target, elems)


def op_complex(x: Complex) -> Complex:
    """Term ``i`` becomes ``Hom(X_{top-i}, A)``, a projective over the opposite algebra."""
    if not x.is_projective():
        raise ComplexError("op_complex needs a complex of standard projectives")
    op = x.algebra.opposite()
    top = x.top
    terms = [projective_module(op, x.terms[top - i].proj_vertices) for i in range(top + 1)]
    diffs = [dual_morphism(x.d(top - i + 1), terms[i], terms[i - 1]) for i in range(1, top + 1)]
    return Complex(terms, diffs)


def complete_n_kernel(partial: Complex, n: int) -> Complex:
    """Extend ``X_m -> ... -> X_0`` to a left n-exact sequence of length n+2."""
    if partial.top > n + 1:
        raise ComplexError("partial complex is longer than n+2 terms")
    if not partial.is_projective():
        raise ComplexError("terms must be standard projectives")
    for i in range(1, partial.top):
        if not is_exact_at(partial.d(i + 1), partial.d(i)):
            raise ComplexError(f"d_{i + 1} is not a weak kernel of d_{i}")
    if partial.top >= 1:
        f = fun_of_complex(partial)
        pd = pdim(f, n + 1)
        if not pd.exact or pd.value > n + 1:
            raise ComplexError(f"Cok d_1 has pdim {pd} > n+1; no n-kernel exists")
    terms, diffs = list(partial.terms), list(partial.diffs)
    if partial.top == 0:
        # the implicit map X_0 -> 0 has kernel X_0
        K, inc = terms[0], identity_morphism(terms[0])
    else:
        K, inc = kernel(diffs[-1])
    while len(terms) < n + 2:
        P, e = projective_cover(K)
        d = inc @ e
        terms.append(P)
        diffs.append(d)
        K, inc = kernel(d)
    if not K.is_zero():
        raise ComplexError("completion did not end with an injective map")
    x = Complex(terms, diffs)
    if not is_left_n_exact(x, n):
        raise AssertionError("completed complex is not left n-exact")
    return x


def transpose(f: Module, n: int) -> Module:
    """``Tr(f) = Fun(Op(Res f))``, a module over the opposite algebra."""
    if f.is_zero():
        return zero_module(f.algebra.opposite())
    t = fun_of_complex(op_complex(res_of_module(f, n)))
    t.name = f"Tr({f.name})" if f.name else "Tr"
    return t


def transpose_morphism(g: ModMorphism, n: int) -> tuple[Module, Module, ModMorphism]:
    """``Tr(g): Tr(target) -> Tr(source)`` induced by a lift of ``g``."""
    x = res_of_module(g.source, n)
    y = res_of_module(g.target, n)
    op = g.source.algebra.opposite()
    tx, ty = op_complex(x), op_complex(y)
    trx, px = cokernel(tx.d(1))
    try_, py = cokernel(ty.d(1))
    lift = lift_chain_map(x, y, g)
    top = n + 1
    # the top component X_{n+1} -> Y_{n+1} dualizes to degree 0 of the op complexes
    dual0 = dual_morphism(lift[top], ty.terms[0], tx.terms[0])
    return try_, trx, factor_through_epi(px @ dual0, py)
