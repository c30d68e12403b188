"""Finite-dimensional modules as quiver representations, and their morphisms.

Everything here is computed vertex by vertex: kernels, images and
cokernels are formed in each vertex space and the arrow maps are induced.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, Path

ISO_SCAN_CAP = 2 ** 20
LATTICE_CAP = 2 ** 14
RANDOM_TRIALS = 24
# invertible top maps can be sparse in the Hom image, so probe more before scanning
ISO_RANDOM_TRIALS = 1024


class SideMismatch(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A configured enumeration cap was hit; the result would be partial."""


class Undecided(RuntimeError):
    """An exhaustive search was needed but the space exceeds the cap."""


class Module:
    """A representation of the quiver satisfying the algebra's relations.

    ``maps[arrow]`` has shape ``(dim at target, dim at source)``.  Modules
    built as direct sums of indecomposable projectives remember the vertex
    list in ``proj_vertices``; their vertex spaces then use the path basis.
    """

    def __init__(self, algebra: Algebra, dims: Sequence[int], maps: Optional[dict] = None,
                 name: str = "", proj_vertices: Optional[tuple] = None, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != len(algebra.vertices):
            raise ValueError(f"need one dimension per vertex, got {self.dims}")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        p = algebra.p
        self.maps = {}
        for a in algebra.quiver.arrows:
            shape = (self.dim(a.target), self.dim(a.source))
            m = (maps or {}).get(a.name)
            m = la.zeros(*shape) if m is None else la.as_mat(m, p, shape if 0 in shape else None)
            if m.shape != shape:
                raise ValueError(f"arrow {a.name}: matrix shape {m.shape}, expected {shape}")
            self.maps[a.name] = m
        unknown = set(maps or {}) - set(self.maps)
        if unknown:
            raise ValueError(f"maps given for unknown arrows {sorted(unknown)}")
        self.name = name
        self.proj_vertices = proj_vertices
        if check:
            self._check_relations()

    def _check_relations(self):
        for r in self.algebra.relations:
            first = r.terms[0][1]
            src = self.algebra.quiver.arrow(first[0]).source
            tgt = self.algebra.quiver.arrow(first[-1]).target
            total = la.zeros(self.dim(tgt), self.dim(src))
            for c, arrows in r.terms:
                total = (total + c * self._arrows_matrix(arrows, src)) % self.p
            if np.any(total):
                raise ValueError(f"module {self.name or ''} violates relation {r}")

    # -- basic data --------------------------------------------------------
    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def side(self) -> str:
        return self.algebra.side

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.algebra.vertices

    def dim(self, v: str) -> int:
        return self.dims[self.algebra.quiver.index(v)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self) -> str:
        label = self.name or "Module"
        return f"{label}{self.dims}"

    def _arrows_matrix(self, arrows: Sequence[str], start: str) -> np.ndarray:
        m = la.identity(self.dim(start))
        for name in arrows:
            m = la.matmul(self.maps[name], m, self.p)
        return m

    def path_matrix(self, path: Path) -> np.ndarray:
        return self._arrows_matrix(path.arrows, path.source)

    @cached_property
    def basis_actions(self) -> list[np.ndarray]:
        return [self.path_matrix(b) for b in self.algebra.basis]

    def action(self, x: np.ndarray, source: str, target: str) -> np.ndarray:
        """Matrix of the algebra element ``x`` from vertex ``source`` to ``target``."""
        out = la.zeros(self.dim(target), self.dim(source))
        for i in self.algebra.paths_between(source, target):
            if x[i]:
                out = (out + int(x[i]) * self.basis_actions[i]) % self.p
        return out

    def same_category(self, other: "Module") -> bool:
        return self.algebra is other.algebra

    def vertex_offsets(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "side": self.side,
            "dims": list(self.dims),
            "maps": {k: v.tolist() for k, v in self.maps.items()},
        }


def _require_same(m: Module, n: Module):
    if not m.same_category(n):
        raise SideMismatch(f"{m!r} ({m.side}) and {n!r} ({n.side}) live over different algebras")


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, [0] * len(algebra.vertices), name="0", proj_vertices=())


def simple(algebra: Algebra, v: str) -> Module:
    dims = [1 if w == v else 0 for w in algebra.vertices]
    return Module(algebra, dims, name=f"S{v}")


def indecomposable_projective(algebra: Algebra, v: str) -> Module:
    p = algebra.p
    dims = [len(algebra.paths_between(v, w)) for w in algebra.vertices]
    maps = {}
    for a in algebra.quiver.arrows:
        src = algebra.paths_between(v, a.source)
        tgt = algebra.paths_between(v, a.target)
        m = la.zeros(len(tgt), len(src))
        arrow = algebra.element((a.name,))
        for k, i in enumerate(src):
            e = np.zeros(algebra.dim, dtype=la.DTYPE)
            e[i] = 1
            prod = algebra.multiply(arrow, e)
            m[:, k] = prod[tgt]
        maps[a.name] = m % p
    return Module(algebra, dims, maps, name=f"P{v}", proj_vertices=(v,), check=False)


def direct_sum(modules: Sequence[Module], algebra: Optional[Algebra] = None,
               name: str = "") -> Module:
    if not modules:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        return zero_module(algebra)
    alg = modules[0].algebra
    for m in modules[1:]:
        _require_same(modules[0], m)
    dims = [sum(m.dims[i] for m in modules) for i in range(len(alg.vertices))]
    maps = {}
    for a in alg.quiver.arrows:
        blocks = [m.maps[a.name] for m in modules]
        out = la.zeros(sum(b.shape[0] for b in blocks), sum(b.shape[1] for b in blocks))
        r = c = 0
        for b in blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        maps[a.name] = out
    proj = None
    if all(m.proj_vertices is not None for m in modules):
        proj = tuple(v for m in modules for v in m.proj_vertices)
    if not name:
        name = " + ".join(m.name or "?" for m in modules) if len(modules) > 1 else modules[0].name
    return Module(alg, dims, maps, name=name, proj_vertices=proj, check=False)


def projective_module(algebra: Algebra, vertices: Sequence[str]) -> Module:
    """The standard direct sum of indecomposable projectives ``P_v``."""
    vertices = tuple(vertices)
    if not vertices:
        return zero_module(algebra)
    return direct_sum([algebra.projective(v) for v in vertices], algebra,
                      name=" + ".join(f"P{v}" for v in vertices))


# -- morphisms ----------------------------------------------------------------
class ModMorphism:
    """A natural transformation: one matrix per vertex."""

    def __init__(self, source: Module, target: Module, mats: Sequence[np.ndarray],
                 check: bool = True):
        _require_same(source, target)
        p = source.p
        self.source = source
        self.target = target
        mats = list(mats)
        if len(mats) != len(source.vertices):
            raise ValueError("need one matrix per vertex")
        fixed = []
        for i, m in enumerate(mats):
            shape = (target.dims[i], source.dims[i])
            m = np.asarray(m, dtype=la.DTYPE).reshape(shape) % p
            fixed.append(m)
        self.mats = tuple(fixed)
        if check and not self.is_natural():
            raise ValueError("matrices do not commute with the arrow maps")

    @property
    def p(self) -> int:
        return self.source.p

    def at(self, v: str) -> np.ndarray:
        return self.mats[self.source.algebra.quiver.index(v)]

    def is_natural(self) -> bool:
        q = self.source.algebra.quiver
        for a in q.arrows:
            lhs = la.matmul(self.target.maps[a.name], self.at(a.source), self.p)
            rhs = la.matmul(self.at(a.target), self.source.maps[a.name], self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def __matmul__(self, other: "ModMorphism") -> "ModMorphism":
        """``g @ f`` is the composite "first f, then g"."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ValueError("morphisms are not composable")
        return ModMorphism(other.source, self.target,
                           [la.matmul(g, f, self.p) for g, f in zip(self.mats, other.mats)],
                           check=False)

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        return ModMorphism(self.source, self.target,
                           [(a + b) % self.p for a, b in zip(self.mats, other.mats)], check=False)

    def __neg__(self) -> "ModMorphism":
        return self.scale(-1)

    def __sub__(self, other: "ModMorphism") -> "ModMorphism":
        return self + (-other)

    def scale(self, c: int) -> "ModMorphism":
        return ModMorphism(self.source, self.target, [(c * a) % self.p for a in self.mats],
                           check=False)

    def is_zero(self) -> bool:
        return all(not np.any(m) for m in self.mats)

    def equals(self, other: "ModMorphism") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.mats, other.mats))

    def ranks(self) -> tuple[int, ...]:
        return tuple(la.rank(m, self.p) for m in self.mats)

    def is_mono(self) -> bool:
        return self.ranks() == self.source.dims

    def is_epi(self) -> bool:
        return self.ranks() == self.target.dims

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def vector(self) -> np.ndarray:
        return np.concatenate([m.reshape(-1) for m in self.mats]) if self.mats else \
            np.zeros(0, dtype=la.DTYPE)

    def to_elements(self) -> np.ndarray:
        """Matrix of algebra elements for a map between standard projectives.

        Entry ``[i, j]`` is the element ``x`` with ``e_{v_j} -> x`` in the
        ``i``-th target summand; it lies in ``e_{v_j} A e_{w_i}``.
        """
        src, tgt = self.source.proj_vertices, self.target.proj_vertices
        if src is None or tgt is None:
            raise ValueError("to_elements needs standard projective source and target")
        alg = self.source.algebra
        out = np.zeros((len(tgt), len(src), alg.dim), dtype=la.DTYPE)
        src_off = _summand_offsets(alg, src)
        tgt_off = _summand_offsets(alg, tgt)
        for j, v in enumerate(src):
            e_pos = src_off[j][v] + alg.paths_between(v, v).index(alg.index[Path(v, (), v)])
            image = self.at(v)[:, e_pos]
            for i, w in enumerate(tgt):
                paths = alg.paths_between(w, v)
                start = tgt_off[i][v]
                out[i, j, paths] = image[start:start + len(paths)]
        return out


def _summand_offsets(alg: Algebra, vertices: Sequence[str]) -> list[dict]:
    """For each summand ``P_v`` the offset of its block inside each vertex space."""
    running = {w: 0 for w in alg.vertices}
    out = []
    for v in vertices:
        out.append(dict(running))
        for w in alg.vertices:
            running[w] += len(alg.paths_between(v, w))
    return out


def identity_morphism(m: Module) -> ModMorphism:
    return ModMorphism(m, m, [la.identity(d) for d in m.dims], check=False)


def zero_morphism(m: Module, n: Module) -> ModMorphism:
    return ModMorphism(m, n, [la.zeros(b, a) for a, b in zip(m.dims, n.dims)], check=False)


def morphism_from_generators(source: Module, target: Module,
                             images: Sequence[np.ndarray]) -> ModMorphism:
    """The map from a standard projective sending ``e_{v_j}`` to ``images[j]``."""
    vs = source.proj_vertices
    if vs is None:
        raise ValueError("source must be a standard projective")
    alg = source.algebra
    mats = []
    for w in alg.vertices:
        cols = []
        for j, v in enumerate(vs):
            y = np.asarray(images[j], dtype=la.DTYPE).reshape(-1)
            for i in alg.paths_between(v, w):
                cols.append(la.matmul(target.basis_actions[i], y.reshape(-1, 1), alg.p))
        mats.append(np.hstack(cols) if cols else la.zeros(target.dim(w), 0))
    return ModMorphism(source, target, mats, check=False)


def morphism_from_elements(source: Module, target: Module, elements: np.ndarray) -> ModMorphism:
    """Inverse of :meth:`ModMorphism.to_elements`."""
    alg = source.algebra
    vs, ws = source.proj_vertices, target.proj_vertices
    tgt_off = _summand_offsets(alg, ws)
    images = []
    for j, v in enumerate(vs):
        y = np.zeros(target.dim(v), dtype=la.DTYPE)
        for i, w in enumerate(ws):
            paths = alg.paths_between(w, v)
            x = elements[i, j]
            stray = np.delete(x, paths) if paths else x
            if np.any(stray % alg.p):
                raise ValueError(f"element [{i},{j}] is not in e_{v} A e_{w}")
            start = tgt_off[i][v]
            y[start:start + len(paths)] = x[paths]
        images.append(y)
    return morphism_from_generators(source, target, images)


def block_morphism(blocks: Sequence[Sequence[ModMorphism]], sources: Sequence[Module],
                   targets: Sequence[Module], source_sum: Optional[Module] = None,
                   target_sum: Optional[Module] = None) -> ModMorphism:
    """Assemble a map ``(+) sources -> (+) targets`` from a block matrix."""
    alg = sources[0].algebra if sources else targets[0].algebra
    src = source_sum or direct_sum(list(sources), alg)
    tgt = target_sum or direct_sum(list(targets), alg)
    mats = []
    for k in range(len(alg.vertices)):
        rows = []
        for i, t in enumerate(targets):
            row = [blocks[i][j].mats[k] for j in range(len(sources))]
            rows.append(np.hstack(row) if row else la.zeros(t.dims[k], 0))
        mats.append(np.vstack(rows) if rows else la.zeros(0, src.dims[k]))
    return ModMorphism(src, tgt, mats, check=False)


# -- Hom spaces ----------------------------------------------------------------
class HomSpace:
    """An F_p-basis of Hom(m, n) with coordinate helpers."""

    def __init__(self, m: Module, n: Module):
        _require_same(m, n)
        self.source, self.target = m, n
        p = m.p
        q = m.algebra.quiver
        offsets, total = [], 0
        for a, b in zip(m.dims, n.dims):
            offsets.append(total)
            total += a * b
        rows = []
        for arr in q.arrows:
            v, w = q.index(arr.source), q.index(arr.target)
            mv, nw = m.dims[v], n.dims[w]
            if mv == 0 or nw == 0:
                continue
            block = la.zeros(nw * mv, total)
            if n.dims[v]:
                block[:, offsets[v]:offsets[v] + n.dims[v] * mv] += np.kron(
                    n.maps[arr.name], la.identity(mv))
            if m.dims[w]:
                block[:, offsets[w]:offsets[w] + nw * m.dims[w]] -= np.kron(
                    la.identity(nw), m.maps[arr.name].T)
            rows.append(block % p)
        system = np.vstack(rows) if rows else la.zeros(0, total)
        self._kernel = la.kernel_basis(system, p) if total else la.zeros(0, 0)
        self._offsets = offsets
        self.basis = [self._morphism(self._kernel[:, j]) for j in range(self._kernel.shape[1])]

    def _morphism(self, vec: np.ndarray) -> ModMorphism:
        m, n = self.source, self.target
        mats = [vec[o:o + a * b].reshape(b, a) for o, a, b in zip(self._offsets, m.dims, n.dims)]
        return ModMorphism(m, n, mats, check=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[int]) -> ModMorphism:
        vec = la.matmul(self._kernel, np.asarray(coeffs, dtype=la.DTYPE).reshape(-1, 1),
                        self.source.p).reshape(-1)
        return self._morphism(vec)

    def coordinates(self, f: ModMorphism) -> np.ndarray:
        x = la.solve_linear(self._kernel, f.vector(), self.source.p)
        if x is None:
            raise ValueError("not a morphism of this Hom space")
        return x

    def elements(self) -> Iterator[ModMorphism]:
        for c in la.all_vectors(self.dim, self.source.p):
            yield self.combine(c)

    def size(self) -> int:
        return self.source.p ** self.dim


def hom_basis(m: Module, n: Module) -> list[ModMorphism]:
    return HomSpace(m, n).basis


def hom_dim(m: Module, n: Module) -> int:
    return HomSpace(m, n).dim


# -- subspaces, kernels, images -------------------------------------------------
def _as_rows(r, d: int) -> np.ndarray:
    r = np.asarray(r, dtype=la.DTYPE)
    return r.reshape(r.size // d if d else r.shape[0] if r.ndim == 2 else 0, d)


class SubspaceFamily:
    """A submodule given by canonical (RREF row) bases of its vertex spaces."""

    def __init__(self, module: Module, rows: Sequence[np.ndarray]):
        self.module = module
        self.rows = tuple(_as_rows(r, d) for r, d in zip(rows, module.dims))
        self.key = tuple(r.tobytes() + bytes([r.shape[0]]) for r in self.rows)

    @classmethod
    def from_columns(cls, module: Module, cols: Sequence[np.ndarray]) -> "SubspaceFamily":
        return cls(module, [la.canonical_span(c, module.p) for c in cols])

    @classmethod
    def zero(cls, module: Module) -> "SubspaceFamily":
        return cls(module, [la.zeros(0, d) for d in module.dims])

    @classmethod
    def whole(cls, module: Module) -> "SubspaceFamily":
        return cls(module, [la.identity(d) for d in module.dims])

    def __eq__(self, other) -> bool:
        return isinstance(other, SubspaceFamily) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.shape[0] for r in self.rows)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def columns(self, k: int) -> np.ndarray:
        return self.rows[k].T.copy()

    def join(self, other: "SubspaceFamily") -> "SubspaceFamily":
        return SubspaceFamily(self.module, [
            la.canonical_span(np.hstack([a.T, b.T]), self.module.p)
            for a, b in zip(self.rows, other.rows)])

    def contains(self, other: "SubspaceFamily") -> bool:
        return self.join(other) == self

    def is_submodule(self) -> bool:
        m = self.module
        q = m.algebra.quiver
        for a in q.arrows:
            v, w = q.index(a.source), q.index(a.target)
            moved = la.matmul(m.maps[a.name], self.columns(v), m.p)
            if la.solve_linear(self.columns(w), moved, m.p) is None:
                return False
        return True

    def sort_key(self):
        return (self.total_dim, self.dims, self.key)


def generated_submodule(module: Module, vertex: str, vectors: np.ndarray) -> SubspaceFamily:
    """Smallest submodule containing the given column vectors at ``vertex``."""
    alg = module.algebra
    cols = []
    for w in alg.vertices:
        parts = [la.matmul(module.basis_actions[i], vectors, module.p)
                 for i in alg.paths_between(vertex, w)]
        cols.append(np.hstack(parts) if parts else la.zeros(module.dim(w), 0))
    return SubspaceFamily.from_columns(module, cols)


def submodule(family: SubspaceFamily, name: str = "") -> tuple[Module, ModMorphism]:
    """The submodule as a Module together with its inclusion."""
    m = family.module
    q = m.algebra.quiver
    maps = {}
    for a in q.arrows:
        v, w = q.index(a.source), q.index(a.target)
        moved = la.matmul(m.maps[a.name], family.columns(v), m.p)
        maps[a.name] = la.coordinates(family.columns(w), moved, m.p)
    sub = Module(m.algebra, family.dims, maps, name=name, check=False)
    return sub, ModMorphism(sub, m, [family.columns(k) for k in range(len(m.dims))], check=False)


def quotient(family: SubspaceFamily, name: str = "") -> tuple[Module, ModMorphism]:
    """The quotient module together with the canonical projection."""
    m = family.module
    p = m.p
    q = m.algebra.quiver
    projs, comps = [], []
    for k, d in enumerate(m.dims):
        sub = family.columns(k)
        comp = la.complement_basis(sub, p)
        if d == 0:
            projs.append(la.zeros(0, 0))
        else:
            full = la.inverse(np.hstack([sub, comp]), p)
            projs.append(full[sub.shape[1]:, :])
        comps.append(comp)
    maps = {}
    for a in q.arrows:
        v, w = q.index(a.source), q.index(a.target)
        maps[a.name] = la.matmul(projs[w], la.matmul(m.maps[a.name], comps[v], p), p)
    quo = Module(m.algebra, [c.shape[1] for c in comps], maps, name=name, check=False)
    return quo, ModMorphism(m, quo, projs, check=False)


@dataclass(frozen=True)
class ImageFactorisation:
    """Kernel, image and cokernel of a morphism with their canonical maps.

    ``inc`` is the kernel inclusion, ``coim`` the map onto the image,
    ``im_inc`` the image inclusion and ``proj`` the cokernel projection.
    """

    kernel: Module
    inc: ModMorphism
    image: Module
    coim: ModMorphism
    im_inc: ModMorphism
    cokernel: Module
    proj: ModMorphism


def kernel_family(phi: ModMorphism) -> SubspaceFamily:
    return SubspaceFamily.from_columns(phi.source, [la.kernel_basis(m, phi.p) for m in phi.mats])


def image_family(phi: ModMorphism) -> SubspaceFamily:
    return SubspaceFamily.from_columns(phi.target, list(phi.mats))


def ker_coker_image(phi: ModMorphism) -> ImageFactorisation:
    p = phi.p
    ker, inc = submodule(kernel_family(phi), name="Ker")
    image, im_inc = submodule(image_family(phi), name="Im")
    coim_mats = [la.coordinates(j, f, p) if j.shape[1] else la.zeros(0, f.shape[1])
                 for j, f in zip(im_inc.mats, phi.mats)]
    coim = ModMorphism(phi.source, image, coim_mats, check=False)
    cok, proj = quotient(image_family(phi), name="Cok")
    return ImageFactorisation(ker, inc, image, coim, im_inc, cok, proj)


def cokernel(phi: ModMorphism) -> tuple[Module, ModMorphism]:
    return quotient(image_family(phi), name="Cok")


def kernel(phi: ModMorphism) -> tuple[Module, ModMorphism]:
    return submodule(kernel_family(phi), name="Ker")


def factor_through_epi(f: ModMorphism, epi: ModMorphism) -> ModMorphism:
    """The unique ``g`` with ``g @ epi == f`` (``f`` must kill ``ker epi``)."""
    mats = []
    for fm, em in zip(f.mats, epi.mats):
        sol = la.solve_linear(em.T, fm.T, f.p)
        if sol is None:
            raise ValueError("map does not factor through the epimorphism")
        mats.append(sol.T)
    return ModMorphism(epi.target, f.target, mats, check=False)


def factor_through_mono(f: ModMorphism, mono: ModMorphism) -> ModMorphism:
    """The unique ``g`` with ``mono @ g == f`` (``f`` must land in the image)."""
    mats = []
    for fm, mm in zip(f.mats, mono.mats):
        sol = la.solve_linear(mm, fm, f.p)
        if sol is None:
            raise ValueError("map does not factor through the monomorphism")
        mats.append(sol)
    return ModMorphism(f.source, mono.source, mats, check=False)


def is_exact_at(f: ModMorphism, g: ModMorphism) -> bool:
    """Pointwise exactness of ``. -f-> . -g-> .`` at the middle term."""
    if not (g @ f).is_zero():
        return False
    return all(la.rank(fm, f.p) + la.rank(gm, f.p) == d
               for fm, gm, d in zip(f.mats, g.mats, f.target.dims))


@dataclass(frozen=True)
class RSnake:
    """``0 -> left -> middle -> right -> 0`` plus the comparison isomorphism."""

    left: Module
    middle: Module
    right: Module
    inc: ModMorphism
    proj: ModMorphism
    comparison: ModMorphism


def rsnake(alpha: ModMorphism, beta: ModMorphism) -> RSnake:
    """Third-isomorphism sequence for a composable pair ``alpha``, ``beta``.

    Returns ``0 -> Im(p_{ba} b) -> Cok(ba) -> Cok(b) -> 0`` and the
    isomorphism ``Cok(a) / Im(p_a i_b) -> Im(p_{ba} b)``.
    """
    if alpha.target.dims != beta.source.dims or not alpha.target.same_category(beta.source):
        raise ValueError("alpha and beta are not composable")
    ba = beta @ alpha
    cok_ba, p_ba = cokernel(ba)
    cok_b, p_b = cokernel(beta)
    fact = ker_coker_image(p_ba @ beta)
    left, inc = fact.image, fact.im_inc
    proj = factor_through_epi(p_b, p_ba)
    if not (is_exact_at(inc, proj) and inc.is_mono() and proj.is_epi()):
        raise AssertionError("induced sequence is not pointwise exact")

    cok_a, p_a = cokernel(alpha)
    _, i_b = kernel(beta)
    quo, q = cokernel(p_a @ i_b)
    # Cok(a) -> Im(p_{ba} b) induced by b, then through the quotient by Im(p_a i_b)
    to_left = factor_through_epi(fact.coim, p_a)
    comparison = factor_through_epi(to_left, q)
    if not comparison.is_iso():
        raise AssertionError("comparison map is not an isomorphism")
    return RSnake(left, cok_ba, cok_b, inc, proj, comparison)


# -- submodule lattice ---------------------------------------------------------
def cyclic_submodules(m: Module) -> list[SubspaceFamily]:
    seen = {}
    for v in m.vertices:
        for x in la.projective_points(m.dim(v), m.p):
            fam = generated_submodule(m, v, x.reshape(-1, 1))
            seen.setdefault(fam.key, fam)
    return sorted(seen.values(), key=SubspaceFamily.sort_key)


def submodules(m: Module, cap: int = LATTICE_CAP) -> list[SubspaceFamily]:
    """All submodules: joins of cyclic submodules, saturated."""
    cyclic = cyclic_submodules(m)
    zero = SubspaceFamily.zero(m)
    found = {zero.key: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic:
                j = s.join(c)
                if j.key not in found:
                    found[j.key] = j
                    nxt.append(j)
                    if len(found) > cap:
                        raise CapExceeded(f"submodule lattice of {m!r} exceeds cap {cap}")
        frontier = nxt
    return sorted(found.values(), key=SubspaceFamily.sort_key)


# -- radical, top, socle, invariants ------------------------------------------------
def radical_family(m: Module) -> SubspaceFamily:
    q = m.algebra.quiver
    cols = []
    for v in m.vertices:
        parts = [m.maps[a.name] for a in q.arrows if a.target == v]
        cols.append(np.hstack(parts) if parts else la.zeros(m.dim(v), 0))
    return SubspaceFamily.from_columns(m, cols)


def socle_family(m: Module) -> SubspaceFamily:
    q = m.algebra.quiver
    cols = []
    for v in m.vertices:
        parts = [m.maps[a.name] for a in q.arrows if a.source == v]
        stacked = np.vstack(parts) if parts else la.zeros(0, m.dim(v))
        cols.append(la.kernel_basis(stacked, m.p))
    return SubspaceFamily.from_columns(m, cols)


def top_dims(m: Module) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(m.dims, radical_family(m).dims))


def fingerprint(m: Module) -> tuple:
    """Isomorphism invariants; equal modules-up-to-iso get equal tuples."""
    cached = getattr(m, "_fingerprint", None)
    if cached is not None:
        return cached
    p = m.p
    loewy, cur = [], m
    while cur.total_dim:
        rad = radical_family(cur)
        if rad.total_dim == cur.total_dim:
            break
        loewy.append(tuple(a - b for a, b in zip(cur.dims, rad.dims)))
        cur, _ = submodule(rad)
    ranks = tuple(la.rank(a, p) for a in m.basis_actions)
    socle = socle_family(m).dims
    end = hom_dim(m, m)
    to_proj = tuple(hom_dim(m, P) for P in m.algebra.projectives)
    fp = (m.dims, tuple(loewy), socle, ranks, end, to_proj)
    m._fingerprint = fp
    return fp


@dataclass(frozen=True)
class CanonicalForm:
    fingerprint: tuple
    representative: Module


def canonical_form(m: Module) -> CanonicalForm:
    return CanonicalForm(fingerprint(m), m)


def module_order_key(m: Module) -> tuple:
    """Global deterministic order: total dimension, dimension vector, fingerprint."""
    return (m.total_dim, m.dims, repr(fingerprint(m)))


# -- isomorphism ---------------------------------------------------------------
def _top_projector(m: Module):
    """Per vertex: (lift of a top basis into m_v, projection m_v -> top_v)."""
    rad = radical_family(m)
    out = []
    for k, d in enumerate(m.dims):
        sub = rad.columns(k)
        comp = la.complement_basis(sub, m.p)
        if d == 0:
            out.append((comp, la.zeros(0, 0)))
            continue
        inv = la.inverse(np.hstack([sub, comp]), m.p)
        out.append((comp, inv[sub.shape[1]:, :]))
    return out


def is_isomorphic(m: Module, n: Module, cap: int = ISO_SCAN_CAP,
                  seed: int = 0) -> tuple[bool, Optional[ModMorphism]]:
    """Decide ``m ≅ n`` and return a witnessing isomorphism when there is one.

    A morphism between modules of equal dimension is invertible iff it
    induces surjections on tops, so the search runs over the image of
    Hom(m, n) in the top maps.  Raises :class:`Undecided` when that space
    is larger than ``cap`` and random probing found nothing.
    """
    _require_same(m, n)
    if m.dims != n.dims:
        return False, None
    if m.total_dim == 0:
        return True, zero_morphism(m, n)
    if m is n:
        return True, identity_morphism(m)
    if fingerprint(m) != fingerprint(n):
        return False, None
    hom = HomSpace(m, n)
    if hom.dim == 0:
        return False, None
    p = m.p
    tm, tn = _top_projector(m), _top_projector(n)
    blocks = []
    for k in range(len(m.dims)):
        lift = tm[k][0]
        proj = tn[k][1]
        blocks.append((lift, proj))
    # linear map: Hom coefficients -> concatenated top matrices
    top_vecs = []
    for f in hom.basis:
        parts = [la.matmul(proj, la.matmul(f.mats[k], lift, p), p).reshape(-1)
                 for k, (lift, proj) in enumerate(blocks)]
        top_vecs.append(np.concatenate(parts) if parts else np.zeros(0, dtype=la.DTYPE))
    tmat = np.array(top_vecs, dtype=la.DTYPE).T.reshape(-1, hom.dim)
    span = la.image_basis(tmat, p)
    sizes = [lift.shape[1] for lift, _ in blocks]

    def invertible(vec):
        off = 0
        for s in sizes:
            block = vec[off:off + s * s].reshape(s, s)
            off += s * s
            if s and not la.is_invertible(block, p):
                return False
        return True

    def witness(vec):
        coeffs = la.solve_linear(tmat, vec, p)
        f = hom.combine(coeffs)
        if not f.is_iso():
            raise AssertionError("top criterion produced a non-isomorphism")
        return f

    rng = np.random.default_rng(seed)
    r = span.shape[1]
    for _ in range(min(ISO_RANDOM_TRIALS, p ** r)):
        c = rng.integers(0, p, size=r)
        vec = la.matmul(span, c.reshape(-1, 1), p).reshape(-1)
        if invertible(vec):
            return True, witness(vec)
    if p ** r > cap:
        raise Undecided(f"isomorphism search space p^{r} exceeds cap {cap}")
    for c in la.all_vectors(r, p):
        vec = la.matmul(span, c.reshape(-1, 1), p).reshape(-1)
        if invertible(vec):
            return True, witness(vec)
    return False, None


def isomorphic(m: Module, n: Module, **kw) -> bool:
    return is_isomorphic(m, n, **kw)[0]


# -- Krull-Schmidt -------------------------------------------------------------
def _fitting_split(m: Module, phi: ModMorphism):
    """``(Im phi^N, Ker phi^N)`` if that splits ``m`` nontrivially, else None."""
    p = m.p
    N = max(m.total_dim, 1)
    powered = [la.mat_power(a, N, p) for a in phi.mats]
    r = sum(la.rank(a, p) for a in powered)
    if r == 0 or r == m.total_dim:
        return None
    psi = ModMorphism(m, m, powered, check=False)
    return image_family(psi), kernel_family(psi)


def find_splitting(m: Module, cap: int = ISO_SCAN_CAP, seed: int = 0):
    """A pair of complementary nonzero submodules, or ``None`` if ``m`` is indecomposable."""
    end = HomSpace(m, m)
    if end.dim <= 1:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_TRIALS):
        split = _fitting_split(m, end.combine(rng.integers(0, m.p, size=end.dim)))
        if split:
            return split
    if end.size() > cap:
        raise Undecided(f"End({m!r}) has p^{end.dim} elements, above cap {cap}")
    for c in la.all_vectors(end.dim, m.p):
        split = _fitting_split(m, end.combine(c))
        if split:
            return split
    return None


def is_indecomposable(m: Module, cap: int = ISO_SCAN_CAP, seed: int = 0) -> bool:
    return m.total_dim > 0 and find_splitting(m, cap, seed) is None


def decompose(m: Module, cap: int = ISO_SCAN_CAP, seed: int = 0) -> list[Module]:
    """Indecomposable summands of ``m``, sorted by :func:`module_order_key`."""
    parts, stack = [], [m]
    while stack:
        x = stack.pop()
        if x.total_dim == 0:
            continue
        split = find_splitting(x, cap, seed)
        if split is None:
            parts.append(x)
        else:
            stack.extend(submodule(f)[0] for f in split)
    return sorted(parts, key=module_order_key)


# -- extensions ----------------------------------------------------------------
@dataclass(frozen=True)
class Extension:
    """A class in Ext^1(z, x) with its middle term ``0 -> x -> middle -> z -> 0``."""

    coefficients: tuple[int, ...]
    representative: ModMorphism
    middle: Module
    inl: ModMorphism
    proj: ModMorphism


def ext1_data(z: Module, x: Module):
    """Presentation data: (cover P0 -> z, Omega -> P0, Hom(Omega, x), complement)."""
    from .homology import projective_cover

    _require_same(z, x)
    p = z.p
    P0, eps = projective_cover(z)
    omega, iota = kernel(eps)
    hom_ox = HomSpace(omega, x)
    hom_px = HomSpace(P0, x)
    restricted = [hom_ox.coordinates(g @ iota) for g in hom_px.basis]
    rmat = (np.array(restricted, dtype=la.DTYPE).T.reshape(hom_ox.dim, len(restricted))
            if restricted else la.zeros(hom_ox.dim, 0))
    img = la.image_basis(rmat, p)
    comp = la.complement_basis(img, p) if hom_ox.dim else la.zeros(0, 0)
    return P0, eps, omega, iota, hom_ox, comp


def ext1_dim(z: Module, x: Module) -> int:
    return ext1_data(z, x)[5].shape[1]


def extension_middle_terms(z: Module, x: Module) -> list[Extension]:
    """One extension per element of Ext^1(z, x), the zero class first."""
    P0, eps, omega, iota, hom_ox, comp = ext1_data(z, x)
    p = z.p
    total = direct_sum([x, P0], z.algebra)
    in_x = block_morphism([[identity_morphism(x)], [zero_morphism(x, P0)]], [x], [x, P0],
                          target_sum=total)
    out = []
    for c in la.all_vectors(comp.shape[1], p):
        coeffs = la.matmul(comp, c.reshape(-1, 1), p).reshape(-1) if comp.size else \
            np.zeros(hom_ox.dim, dtype=la.DTYPE)
        f = hom_ox.combine(coeffs) if hom_ox.dim else zero_morphism(omega, x)
        phi = block_morphism([[f], [-iota]], [omega], [x, P0], target_sum=total)
        middle, pE = cokernel(phi)
        to_z = block_morphism([[zero_morphism(x, z), eps]], [x, P0], [z], source_sum=total)
        proj = factor_through_epi(to_z, pE)
        out.append(Extension(tuple(int(t) for t in c), f, middle, pE @ in_x, proj))
    return out
