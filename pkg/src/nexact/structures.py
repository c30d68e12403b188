"""Classes of ex_n members: the Pb/Po operators, max_n, and structure enumeration.

A class is stored by its indecomposable members.  Membership of an
arbitrary module means that every indecomposable summand is isomorphic to
a member; the zero module is always a member.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Optional, Sequence

from . import linalg as la
from .algebra import Algebra
from .homology import ex_n_obstruction, minimal_resolution, res_of_module, transpose
from .modcat import (CapExceeded, HomSpace, ModMorphism, Module, cokernel, decompose,
                     direct_sum, ext1_dim, extension_middle_terms, fingerprint,
                     is_isomorphic, module_order_key, projective_module, quotient, simple,
                     submodule, submodules)

SUBSET_CAP = 2 ** 20
CANDIDATE_CAP = 2 ** 16
DEFAULT_MULT_BOUND = 2
DEFAULT_PROJ_BOUND = 2

PASS = "pass"
PASS_BOUNDED = "pass up to bound"
FAIL = "fail"


def default_dim_bound(algebra: Algebra) -> int:
    return 2 * algebra.dim


# -- carrier ---------------------------------------------------------------------
def _find(m: Module, pool: Sequence[Module], cap: int, seed: int) -> Optional[int]:
    fp = fingerprint(m)
    for i, x in enumerate(pool):
        if fingerprint(x) == fp and is_isomorphic(m, x, cap=cap, seed=seed)[0]:
            return i
    return None


def _label(m: Module, taken: dict) -> str:
    alg = m.algebra
    if m.total_dim == 1:
        base = "S" + alg.vertices[m.dims.index(1)]
    else:
        base = None
        for v in alg.vertices:
            P = alg.projective(v)
            if P.dims == m.dims and is_isomorphic(m, P)[0]:
                base = "P" + v
                break
        if base is None:
            base = "M" + "".join(str(d) for d in m.dims) if max(m.dims) < 10 else \
                "M(" + ",".join(str(d) for d in m.dims) + ")"
    k = taken.get(base, 0)
    taken[base] = k + 1
    return base if k == 0 else f"{base}_{k}"


def enumerate_indecomposables(algebra: Algebra, dim_bound: Optional[int] = None,
                              cap: int = CANDIDATE_CAP, iso_cap: int = 2 ** 20,
                              seed: int = 0) -> list[Module]:
    """All indecomposable modules of total dimension <= ``dim_bound``, up to iso.

    Every indecomposable ``M`` of dimension ``d >= 2`` is an extension
    ``0 -> S -> M -> N -> 0`` with ``S`` simple in its socle.  If ``M`` is
    indecomposable, each summand ``X`` of ``N`` has ``Ext^1(X, S) != 0`` and
    occurs at most ``dim Ext^1(X, S)`` times (otherwise a base change of
    the multiple summand splits off a copy of ``X``).  So running over
    those ``N`` and all their extensions by ``S`` is complete.
    """
    dim_bound = default_dim_bound(algebra) if dim_bound is None else dim_bound
    if dim_bound < 1:
        raise ValueError("dimension bound must be at least 1")
    found = [simple(algebra, v) for v in algebra.vertices]
    by_dim = {1: list(found)}
    simples = list(found)
    ext_cache: dict = {}

    def ext_mult(x: Module, s: Module) -> int:
        key = (id(x), id(s))
        if key not in ext_cache:
            ext_cache[key] = ext1_dim(x, s)
        return ext_cache[key]

    candidates = 0
    for d in range(2, dim_bound + 1):
        new = []
        for s in simples:
            options = [(x, ext_mult(x, s)) for x in found if x.total_dim <= d - 1]
            options = [(x, e) for x, e in options if e > 0]
            for combo in _multisets(options, d - 1):
                n = direct_sum(combo, algebra)
                for ext in extension_middle_terms(n, s):
                    candidates += 1
                    if candidates > cap:
                        raise CapExceeded(f"more than {cap} extension candidates")
                    m = ext.middle
                    if decompose_count(m, iso_cap, seed) != 1:
                        continue
                    if _find(m, new, iso_cap, seed) is None:
                        new.append(m)
        by_dim[d] = new
        found.extend(new)
    found.sort(key=module_order_key)
    taken: dict = {}
    for m in found:
        m.name = _label(m, taken)
    return found


def decompose_count(m: Module, cap: int, seed: int) -> int:
    from .modcat import find_splitting
    return 1 if find_splitting(m, cap, seed) is None else 2


def _multisets(options: list, total: int):
    """Lists of modules (with multiplicity bounds) whose dimensions add to ``total``."""
    def rec(i, left, acc):
        if left == 0:
            yield list(acc)
            return
        if i == len(options):
            return
        x, bound = options[i]
        for k in range(0, bound + 1):
            need = k * x.total_dim
            if need > left:
                break
            yield from rec(i + 1, left - need, acc + [x] * k)
    yield from rec(0, total, [])


# -- classes -----------------------------------------------------------------------
@dataclass
class StructureSet:
    """An additive, isomorphism-closed class given by indecomposable members."""

    algebra: Algebra
    n: int
    members: tuple
    dim_bound: int
    trace: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    iso_cap: int = 2 ** 20
    seed: int = 0
    lattice_cap: int = 2 ** 14

    def __post_init__(self):
        self.members = tuple(sorted(self.members, key=module_order_key))

    @property
    def side(self) -> str:
        return self.algebra.side

    @property
    def names(self) -> list[str]:
        return [m.name for m in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def index_of(self, m: Module) -> Optional[int]:
        return _find(m, self.members, self.iso_cap, self.seed)

    def contains(self, m: Module) -> bool:
        if m.algebra is not self.algebra:
            raise ValueError("module and class live over different algebras")
        if m.is_zero():
            return True
        if not self._dims_reachable(m.dims):
            return False
        return all(self.index_of(part) is not None
                   for part in decompose(m, self.iso_cap, self.seed))

    def _dims_reachable(self, dims: tuple) -> bool:
        """Is ``dims`` a sum of member dimension vectors?  Necessary for membership."""
        vectors = sorted({x.dims for x in self.members})
        memo: dict = {}

        def reach(t):
            if not any(t):
                return True
            if t not in memo:
                i = next(k for k, d in enumerate(t) if d)
                memo[t] = any(
                    reach(tuple(a - b for a, b in zip(t, u))) for u in vectors
                    if u[i] and all(b <= a for a, b in zip(t, u)))
            return memo[t]
        return reach(tuple(dims))

    def restrict(self, keep: Sequence[int]) -> "StructureSet":
        return StructureSet(self.algebra, self.n, tuple(self.members[i] for i in keep),
                            self.dim_bound, iso_cap=self.iso_cap, seed=self.seed,
                            lattice_cap=self.lattice_cap)

    def same_members(self, other: "StructureSet") -> bool:
        return len(self) == len(other) and all(a is b for a, b in zip(self.members, other.members))

    def key(self) -> tuple:
        return tuple(m.name for m in self.members)


@dataclass(frozen=True)
class PbCounterexample:
    module: Module
    sub: Module
    quo: Module
    missing: str

    def describe(self) -> str:
        return (f"{self.module.name}: submodule {self.sub.dims} with quotient "
                f"{self.quo.dims}; {self.missing} is not in the class")


def pb_member(f: Module, s: StructureSet, lattice_cap: Optional[int] = None):
    """``(True, None)`` if every image in ``f`` and its cokernel lie in ``s``."""
    for fam in submodules(f, lattice_cap or s.lattice_cap):
        sub, _ = submodule(fam)
        quo, _ = quotient(fam)
        if not s.contains(sub):
            return False, PbCounterexample(f, sub, quo, "the submodule")
        if not s.contains(quo):
            return False, PbCounterexample(f, sub, quo, "the quotient")
    return True, None


def pb_step(s: StructureSet):
    """``Pb(s)`` together with the counterexamples of the removed members."""
    keep, removed = [], []
    for i, f in enumerate(s.members):
        ok, why = pb_member(f, s)
        if ok:
            keep.append(i)
        else:
            removed.append(why)
    return s.restrict(keep), removed


def transpose_class(s: StructureSet) -> StructureSet:
    op = s.algebra.opposite()
    members = []
    for f in s.members:
        t = transpose(f, s.n)
        t.name = f"Tr({f.name})"
        t._origin = f
        members.append(t)
    return StructureSet(op, s.n, tuple(members), s.dim_bound, iso_cap=s.iso_cap, seed=s.seed,
                        lattice_cap=s.lattice_cap)


def origin(m: Module) -> Module:
    """The A-side member a transposed module was built from (or ``m`` itself)."""
    return getattr(m, "_origin", m)


def po_step(s: StructureSet):
    """``Po(s) = Tr(Pb(Tr(s)))`` computed member by member."""
    ts = transpose_class(s)
    kept, removed = pb_step(ts)
    survivors = {id(t._origin) for t in kept.members}
    keep = [i for i, f in enumerate(s.members) if id(f) in survivors]
    return s.restrict(keep), removed


# -- extension closure ---------------------------------------------------------------
@dataclass(frozen=True)
class Verdict:
    axiom: str
    status: str
    detail: str = ""
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        out = {"axiom": self.axiom, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _sums(s: StructureSet, mult_bound: int) -> list[tuple[str, Module]]:
    out = []
    for k in range(1, mult_bound + 1):
        for combo in combinations_with_replacement(range(len(s.members)), k):
            mods = [s.members[i] for i in combo]
            out.append((" + ".join(m.name for m in mods), direct_sum(mods, s.algebra)))
    return out


def is_extension_closed(s: StructureSet, mult_bound: int = DEFAULT_MULT_BOUND) -> Verdict:
    sums = _sums(s, mult_bound)
    for zname, z in sums:
        for xname, x in sums:
            for ext in extension_middle_terms(z, x):
                if not s.contains(ext.middle):
                    return Verdict("extension closure", FAIL,
                                   f"middle term of an extension of {zname} by {xname}",
                                   {"z": zname, "x": xname, "class": list(ext.coefficients),
                                    "middle": ext.middle.to_dict()})
    return Verdict("extension closure", PASS_BOUNDED,
                   f"all extensions among sums of at most {mult_bound} members")


# -- direct deflation check ------------------------------------------------------------
def _projective_objects(algebra: Algebra, bound: int) -> list[Module]:
    objs = [projective_module(algebra, ())]
    for k in range(1, bound + 1):
        for combo in combinations_with_replacement(algebra.vertices, k):
            objs.append(projective_module(algebra, combo))
    return objs


def deflation_composition_check(s: StructureSet, proj_bound: int = DEFAULT_PROJ_BOUND,
                                axiom: str = "Ex1op (direct)") -> Verdict:
    """Compose every pair of deflations between small projectives.

    A map ``d`` of projectives is a deflation of the class exactly when
    ``Cok d`` lies in ``s``: the cokernel then has an n-exact resolution
    and ``d`` differs from its last map by contractible summands.
    """
    objs = _projective_objects(s.algebra, proj_bound)
    memo: dict = {}

    def is_deflation(d: ModMorphism) -> bool:
        key = (d.source.proj_vertices, d.target.proj_vertices, d.vector().tobytes())
        if key not in memo:
            dims = tuple(t - r for t, r in zip(d.target.dims, d.ranks()))
            memo[key] = s._dims_reachable(dims) and s.contains(cokernel(d)[0])
        return memo[key]

    into = {id(v): [] for v in objs}
    out_of = {id(v): [] for v in objs}
    for u in objs:
        for v in objs:
            for d in HomSpace(u, v).elements():
                if is_deflation(d):
                    into[id(v)].append(d)
                    out_of[id(u)].append(d)
    pairs = 0
    for v in objs:
        for d1 in into[id(v)]:
            for d2 in out_of[id(v)]:
                pairs += 1
                if not is_deflation(d2 @ d1):
                    return Verdict(axiom, FAIL, "composite of deflations is not a deflation", {
                        "d1": {"source": list(d1.source.proj_vertices),
                               "target": list(d1.target.proj_vertices),
                               "elements": d1.to_elements().tolist()},
                        "d2": {"source": list(d2.source.proj_vertices),
                               "target": list(d2.target.proj_vertices),
                               "elements": d2.to_elements().tolist()},
                    })
    return Verdict(axiom, PASS_BOUNDED,
                   f"{pairs} composable pairs between sums of at most {proj_bound} "
                   "indecomposable projectives")


# -- axioms -----------------------------------------------------------------------
@dataclass
class AxiomReport:
    verdicts: list

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def __getitem__(self, axiom: str) -> Verdict:
        for v in self.verdicts:
            if v.axiom == axiom:
                return v
        raise KeyError(axiom)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "verdicts": [v.to_dict() for v in self.verdicts]}


def gate(s: StructureSet) -> list[tuple[str, str]]:
    """Members failing the ex_n test, with the reason."""
    out = []
    for m in s.members:
        why = ex_n_obstruction(m, s.n)
        if why:
            out.append((m.name, why))
    return out


def check_structure(s: StructureSet, mult_bound: int = DEFAULT_MULT_BOUND,
                    proj_bound: int = DEFAULT_PROJ_BOUND, direct: bool = True) -> AxiomReport:
    from .homology import NotInExn

    bad = gate(s)
    if bad:
        raise NotInExn("; ".join(f"{name}: {why}" for name, why in bad))
    verdicts = [Verdict("Ex0", PASS, "the zero complex corresponds to the zero module")]

    def stability(axiom, step):
        kept, removed = step(s)
        if len(kept) == len(s):
            return Verdict(axiom, PASS, "every member is stable")
        c = removed[0]
        return Verdict(axiom, FAIL, c.describe(), {
            "member": c.module.name, "sub": c.sub.to_dict(), "quotient": c.quo.to_dict()})

    ex2op = stability("Ex2op", pb_step)
    ex2 = stability("Ex2", po_step)
    ext = is_extension_closed(s, mult_bound)
    verdicts += [ex2op, ex2]
    for axiom, base in (("Ex1op", ex2op), ("Ex1", ex2)):
        note = ext.detail if base.ok else f"{ext.detail}; criterion assumes {base.axiom}"
        verdicts.append(Verdict(axiom, ext.status, note, ext.counterexample))
    if direct:
        verdicts.append(deflation_composition_check(s, proj_bound))
        verdicts.append(deflation_composition_check(transpose_class(s), proj_bound,
                                                    axiom="Ex1 (direct)"))
    return AxiomReport(verdicts)


# -- ex_n, max_n, and all structures ----------------------------------------------------
def compute_exn(algebra: Algebra, n: int, dim_bound: Optional[int] = None,
                seed: int = 0, carrier: Optional[list] = None) -> StructureSet:
    if n < 1:
        raise ValueError("n must be a positive integer")
    dim_bound = default_dim_bound(algebra) if dim_bound is None else dim_bound
    carrier = enumerate_indecomposables(algebra, dim_bound, seed=seed) if carrier is None \
        else carrier
    members, rejected = [], []
    for m in carrier:
        why = ex_n_obstruction(m, n)
        if why is None:
            members.append(m)
        else:
            rejected.append((m.name, why))
    s = StructureSet(algebra, n, tuple(members), dim_bound, seed=seed)
    s.flags["rejected"] = rejected
    s.flags["carrier"] = [m.name for m in carrier]
    s.flags["carrier_modules"] = list(carrier)
    return s


def max_n(algebra: Algebra, n: int, dim_bound: Optional[int] = None, seed: int = 0,
          mult_bound: int = DEFAULT_MULT_BOUND, exn: Optional[StructureSet] = None
          ) -> StructureSet:
    cur = exn or compute_exn(algebra, n, dim_bound, seed)
    trace = []
    for op, step in (("Pb", pb_step), ("Po", po_step)):
        k = 0
        while True:
            k += 1
            nxt, removed = step(cur)
            trace.append({"operator": op, "iteration": k,
                          "removed": [origin(c.module).name for c in removed]})
            if len(nxt) == len(cur):
                break
            cur = nxt
    # stability restated as executable checks
    if len(pb_step(cur)[0]) != len(cur) or len(po_step(cur)[0]) != len(cur):
        raise AssertionError("max_n is not Pb- and Po-stable")
    ext = is_extension_closed(cur, mult_bound)
    if not ext.ok:
        raise AssertionError(f"max_n is not extension closed: {ext.detail}")
    cur.trace = trace
    cur.flags.update({"pb_stable": True, "po_stable": True,
                      "extension_closed": ext.status, "mult_bound": mult_bound})
    return cur


def is_subclass(a: StructureSet, b: StructureSet) -> bool:
    return all(any(x is y for y in b.members) or b.index_of(x) is not None for x in a.members)


def enumerate_structures(algebra: Algebra, n: int, dim_bound: Optional[int] = None,
                         seed: int = 0, mult_bound: int = DEFAULT_MULT_BOUND,
                         subset_cap: int = SUBSET_CAP, direct: bool = True,
                         mx: Optional[StructureSet] = None) -> list[StructureSet]:
    """Every subset of ``max_n`` that passes all axiom checks, smallest first."""
    mx = mx or max_n(algebra, n, dim_bound, seed, mult_bound)
    k = len(mx)
    if 2 ** k > subset_cap:
        raise CapExceeded(f"{2 ** k} subsets of max_{n} exceed the cap {subset_cap}")
    out = []
    for size in range(k + 1):
        for keep in combinations(range(k), size):
            s = mx.restrict(keep)
            if check_structure(s, mult_bound, direct=direct).ok:
                out.append(s)
    return out


@dataclass(frozen=True)
class QuasiAbelianResult:
    holds: bool
    unstable: tuple

    def __bool__(self) -> bool:
        return self.holds


def is_quasi_n_abelian(algebra: Algebra, n: int, dim_bound: Optional[int] = None,
                       seed: int = 0, exn: Optional[StructureSet] = None) -> QuasiAbelianResult:
    s = exn or compute_exn(algebra, n, dim_bound, seed)
    unstable = []
    for op, step in (("Pb", pb_step), ("Po", po_step)):
        _, removed = step(s)
        unstable += [(op, origin(c.module).name, c.describe()) for c in removed]
    return QuasiAbelianResult(not unstable, tuple(unstable))


def conflations(s: StructureSet) -> list[tuple[str, object]]:
    """Each member with its n-exact sequence."""
    return [(m.name, res_of_module(m, s.n)) for m in s.members]
