"""Glue between the brute-force oracles and the package's module type."""

from itertools import product

import numpy as np

from nexact.modcat import Module
from oracles import Rep, representations


def quiver_data(alg):
    vertices = tuple(alg.vertices)
    arrows = tuple((a.name, a.source, a.target) for a in alg.quiver.arrows)
    relations = []
    for r in alg.relations:
        (c, path), = r.terms  # fixtures use monomial relations only
        relations.append(tuple(path))
    return vertices, arrows, tuple(relations)


def to_module(alg, rep: Rep, name: str = "") -> Module:
    return Module(alg, list(rep.dims), dict(rep.maps), name=name)


def to_rep(m: Module) -> Rep:
    vertices, arrows, _ = quiver_data(m.algebra)
    return Rep(vertices, arrows, m.dims, {k: v.copy() for k, v in m.maps.items()})


def all_modules(alg, max_total: int):
    """Every representation (not up to iso) of total dimension <= ``max_total``."""
    vertices, arrows, relations = quiver_data(alg)
    for dims in product(range(max_total + 1), repeat=len(vertices)):
        if 0 < sum(dims) <= max_total:
            for rep in representations(vertices, arrows, relations, dims):
                yield to_module(alg, rep)


def dim_vector_multiset(mods):
    return sorted(tuple(int(x) for x in m.dims) for m in mods)


def random_module(alg, dims, rng: np.random.Generator):
    """A random representation satisfying the (monomial) relations, by rejection."""
    vertices, arrows, relations = quiver_data(alg)
    for _ in range(200):
        maps = {}
        for name, s, t in arrows:
            shape = (dims[vertices.index(t)], dims[vertices.index(s)])
            maps[name] = rng.integers(0, alg.p, size=shape).astype(np.int64)
        try:
            return Module(alg, list(dims), maps)
        except ValueError:
            continue
    return Module(alg, list(dims), {name: np.zeros((dims[vertices.index(t)],
                                                    dims[vertices.index(s)]), dtype=np.int64)
                                    for name, s, t in arrows})
