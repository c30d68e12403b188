"""Batch front end: ``nexact <command> ALGEBRA [options]``.

Exit status: 0 success, 1 input error, 2 a cap was hit or a search was
undecided, 3 an internal self-check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .algebra import Algebra, format_relation
from .homology import (NotInExn, ex_n_obstruction, ext_table, minimal_resolution,
                       res_of_module, transpose)
from .modcat import CapExceeded, Module, SideMismatch, Undecided, is_isomorphic
from .structures import (StructureSet, check_structure, compute_exn, default_dim_bound,
                         enumerate_indecomposables, enumerate_structures, gate, max_n)
from .textio import ParseError, parse_algebra, parse_modules, parse_structure

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class SessionConfig:
    command: str
    algebra: str
    n: int
    dim_bound: int
    mult_bound: int
    iso_cap: int
    lattice_cap: int
    subset_cap: int
    seed: int
    format: str
    modules: Optional[str] = None
    module: Optional[str] = None
    structure: Optional[str] = None
    bound: Optional[int] = None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("algebra", help="algebra description file")
    common.add_argument("--n", type=int, default=None,
                        help="positive integer n (default: the file's 'n =' line, else 1)")
    common.add_argument("--dim-bound", type=int, default=None,
                        help="largest total dimension of enumerated indecomposables "
                             "(default 2 * dim A)")
    common.add_argument("--mult-bound", type=int, default=2,
                        help="summands per side when checking extension closure")
    common.add_argument("--iso-cap", type=int, default=2 ** 20)
    common.add_argument("--lattice-cap", type=int, default=2 ** 14)
    common.add_argument("--subset-cap", type=int, default=2 ** 20)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized searches (results do not depend on it)")

    parser = argparse.ArgumentParser(prog="nexact", description=(
        "n-exact structures on proj A for a finite-dimensional algebra A over F_p"))
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("exn", parents=[common], help="list the indecomposables of ex_n")
    sub.add_parser("maxn", parents=[common], help="compute the maximal n-exact structure")
    sub.add_parser("structures", parents=[common], help="enumerate all n-exact structures")
    chk = sub.add_parser("check", parents=[common], help="check the axioms for a class")
    chk.add_argument("structure", help="file listing module names")
    chk.add_argument("--modules", help="module bundle the names refer to "
                                       "(default: enumerated indecomposables)")
    tr = sub.add_parser("tr", parents=[common], help="transpose of an ex_n member")
    tr.add_argument("--modules", required=True, help="module bundle file")
    tr.add_argument("--module", help="module name (default: first in bundle)")
    res = sub.add_parser("resolve", parents=[common], help="minimal projective resolution")
    res.add_argument("--modules", required=True, help="module bundle file")
    res.add_argument("--module", help="module name (default: first in bundle)")
    res.add_argument("--bound", type=int, default=None, help="resolution length bound "
                                                              "(default 2n+4)")
    return parser


# -- report pieces --------------------------------------------------------------
def algebra_dict(a: Algebra) -> dict:
    return {
        "p": a.p,
        "dim": a.dim,
        "vertices": list(a.vertices),
        "arrows": [[x.name, x.source, x.target] for x in a.quiver.arrows],
        "relations": [format_relation(r) for r in a.relations],
        "basis": [str(b) for b in a.basis],
    }


def module_dict(m: Module) -> dict:
    return {"name": m.name, "side": m.side, "dims": list(m.dims),
            "maps": {k: v.tolist() for k, v in sorted(m.maps.items())}}


def _ext_rows(m: Module, n: int, bound: int) -> dict:
    res = minimal_resolution(m, bound)
    table = ext_table(res, range(n + 2))
    return {"pdim": str(res.pdim), "ext": {str(i): list(v) for i, v in table.items()}}


def _config_dict(cfg: SessionConfig) -> dict:
    out = asdict(cfg)
    out["algebra"] = Path(cfg.algebra).name
    for k in ("modules", "structure"):
        if out[k]:
            out[k] = Path(out[k]).name
    return out


def _scope(cfg: SessionConfig) -> dict:
    return {
        "carrier": f"indecomposables of total dimension <= {cfg.dim_bound}",
        "extension_closure": f"verified for sums of at most {cfg.mult_bound} members per side",
    }


def _carrier(alg: Algebra, cfg: SessionConfig) -> list[Module]:
    return enumerate_indecomposables(alg, cfg.dim_bound, iso_cap=cfg.iso_cap, seed=cfg.seed)


def _exn(alg: Algebra, cfg: SessionConfig) -> StructureSet:
    s = compute_exn(alg, cfg.n, cfg.dim_bound, cfg.seed, carrier=_carrier(alg, cfg))
    s.iso_cap = cfg.iso_cap
    s.lattice_cap = cfg.lattice_cap
    return s


def _rejections(alg: Algebra, s: StructureSet, cfg: SessionConfig) -> list[dict]:
    carrier = {m.name: m for m in s.flags.get("carrier_modules", [])}
    out = []
    for name, why in s.flags["rejected"]:
        out.append({"name": name, "dims": list(carrier[name].dims) if name in carrier else None,
                    "reason": why})
    return out


def cmd_exn(alg: Algebra, cfg: SessionConfig) -> dict:
    s = _exn(alg, cfg)
    bound = 2 * cfg.n + 4
    members = []
    for m in s.members:
        row = {"module": module_dict(m), "resolution": res_of_module(m, cfg.n).to_dict(),
               "resolution_text": res_of_module(m, cfg.n).describe()}
        row.update(_ext_rows(m, cfg.n, bound))
        members.append(row)
    n = cfg.n
    summary = (f"ex_{n} is zero; only the split structure exists" if not members
               else f"ex_{n} has {len(members)} indecomposable member(s)")
    return {"members": members, "rejected": _rejections(alg, s, cfg),
            "carrier": s.flags["carrier"], "summary": summary}


def _pdim_notes(alg: Algebra, s: StructureSet, cfg: SessionConfig) -> list[str]:
    bound = 2 * cfg.n + 4
    notes = []
    for m in s.flags.get("carrier_modules", []):
        if any(m is x for x in s.members):
            continue
        res = minimal_resolution(m, bound)
        if not res.terminated:
            notes.append(f"{m.name} has pdim {res.pdim} (resolution not finished by length "
                         f"{bound})")
    return notes


def cmd_maxn(alg: Algebra, cfg: SessionConfig) -> dict:
    exn = _exn(alg, cfg)
    mx = max_n(alg, cfg.n, cfg.dim_bound, cfg.seed, cfg.mult_bound, exn=exn)
    removed = sum(len(t["removed"]) for t in mx.trace)
    conf = []
    for m in mx.members:
        x = res_of_module(m, cfg.n)
        conf.append({"member": m.name, "dims": list(m.dims), "sequence": x.describe() + " -> 0",
                     "complex": x.to_dict()})
    return {
        "exn": exn.names,
        "max": mx.names,
        "trace": mx.trace,
        "removed_total": removed,
        "quasi_n_abelian": removed == 0,
        "conflations": conf,
        "extension_closed": mx.flags["extension_closed"],
        "notes": _pdim_notes(alg, exn, cfg),
    }


def cmd_structures(alg: Algebra, cfg: SessionConfig) -> dict:
    exn = _exn(alg, cfg)
    mx = max_n(alg, cfg.n, cfg.dim_bound, cfg.seed, cfg.mult_bound, exn=exn)
    structs = enumerate_structures(alg, cfg.n, cfg.dim_bound, cfg.seed, cfg.mult_bound,
                                   cfg.subset_cap, mx=mx)
    sets = [set(s.names) for s in structs]
    hasse = []
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if a < b and not any(a < c < b for c in sets):
                hasse.append([i, j])
    return {"max": mx.names, "count": len(structs),
            "structures": [{"index": i, "members": s.names} for i, s in enumerate(structs)],
            "hasse": hasse}


def _resolve_names(alg: Algebra, cfg: SessionConfig, names: list[str]) -> list[Module]:
    pool: dict = {}
    if cfg.modules:
        pool = parse_modules(Path(cfg.modules).read_text(), alg)
    else:
        pool = {m.name: m for m in _carrier(alg, cfg)}
    out = []
    for name in names:
        if name not in pool:
            raise ValueError(f"unknown module name {name!r}")
        m = pool[name]
        if m.algebra is not alg:
            raise SideMismatch(f"{name} is not an {alg.side}-module")
        out.append(m)
    return out


def cmd_check(alg: Algebra, cfg: SessionConfig) -> dict:
    names = parse_structure(Path(cfg.structure).read_text())
    mods = _resolve_names(alg, cfg, names)
    from .modcat import decompose

    parts = []
    for m in mods:
        for k, part in enumerate(decompose(m, cfg.iso_cap, cfg.seed)):
            part.name = m.name if k == 0 else f"{m.name}/{k}"
            parts.append(part)
    # drop repeated isomorphism classes
    uniq = []
    for part in parts:
        if not any(is_isomorphic(part, u, cap=cfg.iso_cap, seed=cfg.seed)[0] for u in uniq):
            uniq.append(part)
    s = StructureSet(alg, cfg.n, tuple(uniq), cfg.dim_bound, iso_cap=cfg.iso_cap, seed=cfg.seed)
    rejected = gate(s)
    if rejected:
        raise NotInExn("; ".join(f"{name}: {why}" for name, why in rejected))
    report = check_structure(s, cfg.mult_bound)
    return {"members": s.names, "axioms": report.to_dict()}


def _pick(alg: Algebra, cfg: SessionConfig) -> Module:
    pool = parse_modules(Path(cfg.modules).read_text(), alg)
    if not pool:
        raise ValueError("module bundle is empty")
    name = cfg.module or next(iter(pool))
    if name not in pool:
        raise ValueError(f"unknown module name {name!r}")
    m = pool[name]
    if m.algebra is not alg:
        raise SideMismatch(f"{name} is not an {alg.side}-module")
    return m


def cmd_tr(alg: Algebra, cfg: SessionConfig) -> dict:
    f = _pick(alg, cfg)
    why = ex_n_obstruction(f, cfg.n)
    if why:
        raise NotInExn(f"{f.name} is not in ex_{cfg.n}: {why}")
    t = transpose(f, cfg.n)
    if f.is_zero():
        table = [0] * len(alg.vertices)
    else:
        table = list(ext_table(minimal_resolution(f, cfg.n + 1), [cfg.n + 1])[cfg.n + 1])
    tt = transpose(t, cfg.n)
    back, _ = is_isomorphic(tt, f, cap=cfg.iso_cap, seed=cfg.seed)
    agree = list(t.dims) == table
    if not (agree and back):
        raise AssertionError("transpose self-check failed")
    return {"module": module_dict(f), "transpose": module_dict(t),
            "ext_table": {"degree": cfg.n + 1, "dims": table},
            "dims_match_ext": agree, "double_transpose_isomorphic": back}


def cmd_resolve(alg: Algebra, cfg: SessionConfig) -> dict:
    m = _pick(alg, cfg)
    bound = cfg.bound or 2 * cfg.n + 4
    res = minimal_resolution(m, bound)
    return {"module": module_dict(m), "bound": bound, "terminated": res.terminated,
            "pdim": str(res.pdim), "resolution": res.complex.to_dict(),
            "sequence": (res.complex.describe() if res.terminated
                         else "... -> " + res.complex.describe()[len("0 -> "):])
            + " -> " + (m.name or "M") + " -> 0"}


COMMANDS = {"exn": cmd_exn, "maxn": cmd_maxn, "structures": cmd_structures,
            "check": cmd_check, "tr": cmd_tr, "resolve": cmd_resolve}


# -- text rendering -----------------------------------------------------------------
def _fmt_dims(d) -> str:
    return "(" + ",".join(str(x) for x in d) + ")"


def _diff_lines(cx: dict) -> list[str]:
    out = []
    for d in cx["differentials"]:
        rows = "; ".join(", ".join(row) for row in d["elements"]) if d["elements"] else ""
        out.append(f"    d_{d['degree']} = [{rows}]")
    return out


def render_text(report: dict) -> str:
    cfg = report["config"]
    cmd = cfg["command"]
    lines = [f"# nexact {cmd}  algebra={cfg['algebra']}  n={cfg['n']}  "
             f"dim-bound={cfg['dim_bound']}  mult-bound={cfg['mult_bound']}  seed={cfg['seed']}"]
    a = report["algebra"]
    lines.append(f"algebra: F_{a['p']}, dim {a['dim']}, vertices {' '.join(a['vertices'])}, "
                 f"relations: {', '.join(a['relations']) or 'none'}")
    for k, v in report["scope"].items():
        lines.append(f"scope[{k}]: {v}")
    body = report["result"]
    n = cfg["n"]
    if cmd == "exn":
        lines.append(body["summary"])
        for row in body["members"]:
            m = row["module"]
            lines.append(f"  {m['name']} dims {_fmt_dims(m['dims'])} pdim {row['pdim']}")
            lines.append(f"    resolution: {row['resolution_text']} -> {m['name']} -> 0")
            for i, dims in row["ext"].items():
                lines.append(f"    Ext^{i}({m['name']}, P_v) = {_fmt_dims(dims)}")
        for r in body["rejected"]:
            lines.append(f"  rejected {r['name']}: {r['reason']}")
    elif cmd == "maxn":
        lines.append(f"ex_{n}: {{{', '.join(body['exn'])}}}")
        for t in body["trace"]:
            lines.append(f"  {t['operator']} step {t['iteration']}: removed "
                         f"{{{', '.join(t['removed'])}}}")
        lines.append(f"max_{n}: {{{', '.join(body['max'])}}} "
                     f"({len(body['max'])} indecomposable(s), {body['removed_total']} removal(s))")
        lines.append(f"quasi {n}-abelian: {'yes' if body['quasi_n_abelian'] else 'no'}")
        lines.append(f"extension closure: {body['extension_closed']}")
        for c in body["conflations"]:
            lines.append(f"  conflation for {c['member']}: {c['sequence']}")
            lines.extend(_diff_lines(c["complex"]))
        for note in body["notes"]:
            lines.append(f"note: {note}")
    elif cmd == "structures":
        lines.append(f"max_{n}: {{{', '.join(body['max'])}}}")
        lines.append(f"{body['count']} {n}-exact structure(s):")
        for s in body["structures"]:
            lines.append(f"  [{s['index']}] {{{', '.join(s['members'])}}}")
        for i, j in body["hasse"]:
            lines.append(f"  [{i}] < [{j}]")
    elif cmd == "check":
        lines.append(f"class: {{{', '.join(body['members'])}}}")
        for v in body["axioms"]["verdicts"]:
            lines.append(f"  {v['axiom']}: {v['status']} ({v['detail']})")
            if "counterexample" in v:
                lines.append(f"    counterexample: {json.dumps(v['counterexample'], sort_keys=True)}")
        lines.append("all axioms hold" if body["axioms"]["ok"] else "some axiom fails")
    elif cmd == "tr":
        f, t = body["module"], body["transpose"]
        lines.append(f"{f['name']} dims {_fmt_dims(f['dims'])} over {f['side']}")
        lines.append(f"Tr({f['name']}) dims {_fmt_dims(t['dims'])} over {t['side']}")
        for arrow, mat in t["maps"].items():
            if not any(len(row) for row in mat):
                continue
            lines.append(f"  map {arrow} = {json.dumps(mat)}")
        e = body["ext_table"]
        lines.append(f"Ext^{e['degree']}({f['name']}, P_v) = {_fmt_dims(e['dims'])}  "
                     f"(matches: {'yes' if body['dims_match_ext'] else 'no'})")
        lines.append(f"Tr(Tr({f['name']})) isomorphic to {f['name']}: "
                     f"{'yes' if body['double_transpose_isomorphic'] else 'no'}")
    elif cmd == "resolve":
        m = body["module"]
        lines.append(f"{m['name']} dims {_fmt_dims(m['dims'])}: pdim {body['pdim']}"
                     f" (bound {body['bound']})")
        lines.append(f"  {body['sequence']}")
        lines.extend(_diff_lines(body["resolution"]))
    return "\n".join(lines) + "\n"


def _config(args) -> tuple[SessionConfig, Algebra]:
    cfg = SessionConfig(
        command=args.command, algebra=args.algebra, n=0, dim_bound=0,
        mult_bound=args.mult_bound, iso_cap=args.iso_cap, lattice_cap=args.lattice_cap,
        subset_cap=args.subset_cap, seed=args.seed, format=args.format,
        modules=getattr(args, "modules", None), module=getattr(args, "module", None),
        structure=getattr(args, "structure", None), bound=getattr(args, "bound", None))
    text = Path(cfg.algebra).read_text()
    alg, file_n = parse_algebra(text)
    alg.name = Path(cfg.algebra).stem
    cfg.n = args.n if args.n is not None else (file_n or 1)
    cfg.dim_bound = args.dim_bound if args.dim_bound is not None else default_dim_bound(alg)
    for name in ("n", "dim_bound", "mult_bound", "iso_cap", "lattice_cap", "subset_cap"):
        if getattr(cfg, name) < 1:
            raise ValueError(f"--{name.replace('_', '-')} must be positive")
    return cfg, alg


def main(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg, alg = _config(args)
        result = COMMANDS[cfg.command](alg, cfg)
    except (ParseError, NotInExn, SideMismatch, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (CapExceeded, Undecided) as exc:
        print(f"cap reached, no result: {exc}", file=stderr)
        return EXIT_CAP
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=stderr)
        return EXIT_INTERNAL
    report = {"config": _config_dict(cfg), "algebra": algebra_dict(alg), "scope": _scope(cfg),
              "result": result}
    if cfg.format == "json":
        stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stdout.write(render_text(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
