"""Basic algebras ``F_p Q / I`` presented by a quiver with admissible relations.

Conventions: a path is stored in traversal order (first arrow first) and
printed in composition order, so ``b*a`` means "``a`` then ``b``".  Modules
are covariant representations of the quiver, i.e. left modules, and the
indecomposable projective ``P_v = A e_v`` is spanned by the basis paths that
start at ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg as la

A_SIDE = "A"
OP_SIDE = "Aop"
DEFAULT_PATH_CAP = 32


class AlgebraError(ValueError):
    """Invalid quiver or relation data."""


class NotFiniteDimensional(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError(f"duplicate vertex labels in {self.vertices}")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate arrow names in {names}")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise AlgebraError(f"arrow {a.name} has an unknown endpoint")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple[str, str, str]]) -> "Quiver":
        return cls(tuple(str(v) for v in vertices),
                   tuple(Arrow(n, str(s), str(t)) for n, s, t in edges))

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise AlgebraError(f"unknown arrow {name!r}")

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)


@dataclass(frozen=True, order=True)
class Path:
    source: str
    arrows: tuple[str, ...]
    target: str

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return "*".join(reversed(self.arrows))


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths; each path in traversal order."""

    terms: tuple[tuple[int, tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(c), tuple(path)) for c, path in self.terms))

    @classmethod
    def monomial(cls, *composite: str) -> "Relation":
        """``Relation.monomial("b", "a")`` is the relation ``b*a = 0``."""
        return cls(((1, tuple(reversed(composite))),))

    def __str__(self) -> str:
        return format_relation(self)


def _path(quiver: Quiver, arrows: Sequence[str], start: Optional[str] = None) -> Path:
    if not arrows:
        if start is None:
            raise AlgebraError("trivial path needs a vertex")
        return Path(start, (), start)
    first = quiver.arrow(arrows[0])
    here = first.target
    for name in arrows[1:]:
        a = quiver.arrow(name)
        if a.source != here:
            raise AlgebraError(f"path {'*'.join(reversed(arrows))} is not composable")
        here = a.target
    return Path(first.source, tuple(arrows), here)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


class Algebra:
    """A finite-dimensional basic algebra with an explicit path basis.

    ``mult[i, j]`` holds the coordinates of ``basis[i] * basis[j]``, the
    path ``basis[j]`` followed by ``basis[i]``.
    """

    def __init__(self, quiver: Quiver, relations: tuple[Relation, ...], p: int,
                 basis: tuple[Path, ...], mult: np.ndarray, side: str = A_SIDE,
                 name: str = "A"):
        self.quiver = quiver
        self.relations = relations
        self.p = p
        self.basis = basis
        self.mult = mult
        self.side = side
        self.name = name
        self.index = {b: i for i, b in enumerate(basis)}
        self._opposite: Optional[Algebra] = None
        self._projectives: dict = {}

    def __repr__(self) -> str:
        return f"Algebra({self.name}, side={self.side}, dim={self.dim}, p={self.p})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def paths_between(self, source: str, target: str) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.source == source and b.target == target]

    def paths_from(self, source: str) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.source == source]

    def idempotent(self, v: str) -> np.ndarray:
        x = np.zeros(self.dim, dtype=la.DTYPE)
        x[self.index[Path(v, (), v)]] = 1
        return x

    def one(self) -> np.ndarray:
        return sum((self.idempotent(v) for v in self.vertices), np.zeros(self.dim, dtype=la.DTYPE)) % self.p

    def element(self, arrows: Sequence[str], start: Optional[str] = None) -> np.ndarray:
        """Coordinates of a path given in traversal order."""
        path = _path(self.quiver, arrows, start)
        if path in self.index:
            x = np.zeros(self.dim, dtype=la.DTYPE)
            x[self.index[path]] = 1
            return x
        # a non-basis path: multiply arrow by arrow
        x = self.idempotent(path.source)
        for a in path.arrows:
            x = self.multiply(self.element((a,)), x)
        return x

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``x * y``: first ``y``, then ``x``."""
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def element_str(self, x: np.ndarray) -> str:
        """``x`` as a combination of basis paths, e.g. ``b*a + e2``."""
        parts = []
        for i, c in enumerate(np.asarray(x) % self.p):
            if c:
                parts.append(str(self.basis[i]) if c == 1 else f"{int(c)}{self.basis[i]}")
        return " + ".join(parts) or "0"

    def projective(self, v: str):
        if v not in self._projectives:
            from .modcat import indecomposable_projective
            self._projectives[v] = indecomposable_projective(self, v)
        return self._projectives[v]

    @property
    def projectives(self) -> list:
        return [self.projective(v) for v in self.vertices]

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = opposite_algebra(self)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def is_associative(self) -> bool:
        d, p = self.dim, self.p
        left = np.einsum("ijk,klm->ijlm", self.mult, self.mult) % p
        right = np.einsum("jlk,ikm->ijlm", self.mult, self.mult) % p
        return bool(np.array_equal(left, right))

    def to_text(self, n: Optional[int] = None) -> str:
        lines = [f"field p={self.p}"]
        lines += [f"vertex {v}" for v in self.vertices]
        lines += [f"arrow {a.name}: {a.source} -> {a.target}" for a in self.quiver.arrows]
        for r in self.relations:
            lines.append("relation " + format_relation(r))
        if n is not None:
            lines.append(f"n = {n}")
        return "\n".join(lines) + "\n"


def format_relation(r: Relation) -> str:
    out = []
    for k, (c, path) in enumerate(r.terms):
        comp = "*".join(reversed(path))
        term = comp if abs(c) == 1 else f"{abs(c)}*{comp}"
        if k == 0:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {term}")
    return " ".join(out)


def _validate_relations(quiver: Quiver, relations: Sequence[Relation]) -> list[tuple[Path, list]]:
    checked = []
    for r in relations:
        if not r.terms:
            raise AlgebraError("empty relation")
        paths = [(c, _path(quiver, path)) for c, path in r.terms]
        ends = {(pt.source, pt.target) for _, pt in paths}
        if len(ends) != 1:
            raise AlgebraError(f"relation {r} mixes paths with different endpoints")
        for _, pt in paths:
            if len(pt) < 2:
                raise AlgebraError(f"relation {r} is not admissible: path {pt} has length < 2")
        checked.append(paths)
    return checked


def build_algebra(quiver: Quiver, relations: Sequence[Relation] = (), p: int = 2,
                  cap: int = DEFAULT_PATH_CAP, name: str = "A") -> Algebra:
    """Compute a path basis and structure constants of ``F_p Q / I``.

    Paths are generated length by length.  At length ``L`` the ideal is
    truncated to paths of length at most ``L``; once every path of length
    ``L`` lies in that truncation, all longer paths lie in ``I`` and the
    remaining non-pivot paths form a basis.
    """
    if not _is_prime(p):
        raise AlgebraError(f"modulus {p} is not prime")
    relations = tuple(relations)
    rels = _validate_relations(quiver, relations)

    layers: list[list[Path]] = [[Path(v, (), v) for v in quiver.vertices]]
    for L in range(1, cap + 1):
        layers.append(sorted(
            Path(pt.source, pt.arrows + (a.name,), a.target)
            for pt in layers[-1] for a in quiver.arrows if a.source == pt.target))
        # longest paths first so that pivots land on long paths
        columns = [pt for layer in reversed(layers) for pt in layer]
        col = {pt: i for i, pt in enumerate(columns)}
        gens = []
        for terms in rels:
            minlen = min(len(pt) for _, pt in terms)
            src, tgt = terms[0][1].source, terms[0][1].target
            for lq in range(0, L - minlen + 1):
                for q in layers[lq]:
                    if q.target != src:
                        continue
                    for lp in range(0, L - minlen - lq + 1):
                        for pp in layers[lp]:
                            if pp.source != tgt:
                                continue
                            row = np.zeros(len(columns), dtype=la.DTYPE)
                            for c, pt in terms:
                                full = q.arrows + pt.arrows + pp.arrows
                                if len(full) <= L:
                                    row[col[Path(q.source, full, pp.target)]] += c
                            if np.any(row % p):
                                gens.append(row % p)
        gen_mat = np.array(gens, dtype=la.DTYPE).reshape(len(gens), len(columns))
        top = np.zeros((len(layers[L]), len(columns)), dtype=la.DTYPE)
        for k, pt in enumerate(layers[L]):
            top[k, col[pt]] = 1
        if la.rank(gen_mat, p) == la.rank(np.vstack([gen_mat, top]), p):
            return _assemble(quiver, relations, p, layers, L, np.vstack([gen_mat, top]),
                             columns, name)
    raise NotFiniteDimensional(f"not finite-dimensional under cap {cap}")


def _assemble(quiver, relations, p, layers, L, gen_mat, columns, name) -> Algebra:
    red, pivots, rk = la.rref(gen_mat, p)
    pivot_set = set(pivots)
    free = [c for c in range(len(columns)) if c not in pivot_set]
    order = sorted(free, key=lambda c: (quiver.index(columns[c].source), len(columns[c]),
                                        quiver.index(columns[c].target), columns[c].arrows))
    basis = tuple(columns[c] for c in order)
    position = {c: k for k, c in enumerate(order)}
    normal: dict[Path, np.ndarray] = {}
    for c in free:
        v = np.zeros(len(basis), dtype=la.DTYPE)
        v[position[c]] = 1
        normal[columns[c]] = v
    for i, pc in enumerate(pivots):
        v = np.zeros(len(basis), dtype=la.DTYPE)
        for c in free:
            if red[i, c]:
                v[position[c]] = (-red[i, c]) % p
        normal[columns[pc]] = v

    d = len(basis)
    mult = np.zeros((d, d, d), dtype=la.DTYPE)
    for (i, bi), (j, bj) in product(enumerate(basis), enumerate(basis)):
        if bj.target != bi.source:
            continue
        full = Path(bj.source, bj.arrows + bi.arrows, bi.target)
        if len(full) >= L:
            continue
        mult[i, j] = normal[full]
    return Algebra(quiver, relations, p, basis, mult, A_SIDE, name)


def _op_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def opposite_algebra(a: Algebra) -> Algebra:
    """Reverse every arrow; the basis is the reversed path basis, same order."""
    q = a.quiver
    quiver = Quiver(q.vertices, tuple(Arrow(_op_name(x.name), x.target, x.source) for x in q.arrows))
    relations = tuple(
        Relation(tuple((c, tuple(_op_name(x) for x in reversed(path))) for c, path in r.terms))
        for r in a.relations)
    basis = tuple(Path(b.target, tuple(_op_name(x) for x in reversed(b.arrows)), b.source)
                  for b in a.basis)
    mult = np.ascontiguousarray(np.transpose(a.mult, (1, 0, 2)))
    side = OP_SIDE if a.side == A_SIDE else A_SIDE
    name = a.name[:-3] if a.name.endswith("^op") else a.name + "^op"
    return Algebra(quiver, relations, a.p, basis, mult, side, name)
