"""Line-oriented text formats for algebras, module bundles, and class files.

Algebra file::

    field p=2
    vertex 1
    arrow a: 1 -> 2
    relation b*a            # "a then b"; terms may carry coefficients: 2*b*a - d*c
    n = 1

Module bundle::

    module S1 over A        # side is A or Aop
    dim 1 = 1               # unlisted vertices have dimension 0
    map a = [[1, 0]]        # rows of the target-by-source matrix

Class file: module names separated by whitespace or newlines.
"""

from __future__ import annotations

import json
import re
from typing import Optional

import numpy as np

from .algebra import (A_SIDE, OP_SIDE, Algebra, AlgebraError, Arrow, Quiver, Relation,
                      _validate_relations, build_algebra)
from .modcat import Module

_SIDES = {"a": A_SIDE, "aop": OP_SIDE, "a^op": OP_SIDE, "op": OP_SIDE}


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str):
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_relation(body: str) -> Relation:
    body = body.strip()
    if body.endswith("= 0"):
        body = body[:-3].strip()
    if not body:
        raise ValueError("empty relation")
    terms = []
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot read relation near {body[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        factors = [f.strip() for f in m.group(2).strip().split("*")]
        if any(not f for f in factors):
            raise ValueError(f"malformed term {m.group(2).strip()!r}")
        coef = sign
        while factors and re.fullmatch(r"\d+", factors[0]):
            coef *= int(factors.pop(0))
        if not factors:
            raise ValueError(f"term {m.group(2).strip()!r} has no path")
        for f in factors:
            if not re.fullmatch(r"[A-Za-z_][\w']*\*?", f):
                raise ValueError(f"bad arrow name {f!r}")
        # written in composition order; stored in traversal order
        terms.append((coef, tuple(reversed(factors))))
        pos = m.end()
    return Relation(tuple(terms))


def parse_algebra(text: str, cap: int = 32) -> tuple[Algebra, Optional[int]]:
    """Returns the algebra and the ``n = k`` value if the file sets one."""
    p, n = 2, None
    vertices, arrows, relations = [], [], []
    for k, line in _lines(text):
        try:
            if line.startswith("field"):
                m = re.fullmatch(r"field\s+p\s*=\s*(\d+)", line)
                if not m:
                    raise ValueError("expected 'field p=<prime>'")
                p = int(m.group(1))
            elif line.startswith("vertex"):
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError("expected 'vertex <label>'")
                vertices.append(parts[1])
            elif line.startswith("arrow"):
                m = re.fullmatch(r"arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)", line)
                if not m:
                    raise ValueError("expected 'arrow <name>: <src> -> <tgt>'")
                arrows.append((k, Arrow(m.group(1), m.group(2), m.group(3))))
            elif line.startswith("relation"):
                relations.append((k, parse_relation(line[len("relation"):])))
            elif re.fullmatch(r"n\s*=\s*\S+", line):
                value = line.split("=", 1)[1].strip()
                if not re.fullmatch(r"\d+", value) or int(value) < 1:
                    raise ValueError("n must be a positive integer")
                n = int(value)
            else:
                raise ValueError(f"unrecognised line {line!r}")
        except ValueError as exc:
            raise ParseError(k, str(exc)) from None
    for k, a in arrows:
        for v in (a.source, a.target):
            if v not in vertices:
                raise ParseError(k, f"arrow {a.name} uses undeclared vertex {v}")
    try:
        quiver = Quiver(tuple(vertices), tuple(a for _, a in arrows))
    except AlgebraError as exc:
        raise ParseError(0, str(exc)) from None
    for k, r in relations:
        try:
            _validate_relations(quiver, [r])
        except AlgebraError as exc:
            raise ParseError(k, str(exc)) from None
    try:
        alg = build_algebra(quiver, [r for _, r in relations], p, cap=cap)
    except AlgebraError as exc:
        raise ParseError(0, str(exc)) from None
    return alg, n


def parse_modules(text: str, algebra: Algebra) -> dict[str, Module]:
    """Read a module bundle; modules may sit on either side of ``algebra``."""
    blocks = []
    for k, line in _lines(text):
        if line.startswith("module"):
            m = re.fullmatch(r"module\s+(\S+)\s+over\s+(\S+)", line)
            if not m:
                raise ParseError(k, "expected 'module <name> over <A|Aop>'")
            side = _SIDES.get(m.group(2).lower())
            if side is None:
                raise ParseError(k, f"unknown side {m.group(2)!r}")
            blocks.append({"line": k, "name": m.group(1), "side": side, "dims": {}, "maps": {}})
        elif not blocks:
            raise ParseError(k, "module data before any 'module' line")
        elif line.startswith("dim"):
            m = re.fullmatch(r"dim\s+(\S+)\s*=\s*(\d+)", line)
            if not m:
                raise ParseError(k, "expected 'dim <vertex> = <k>'")
            blocks[-1]["dims"][m.group(1)] = (k, int(m.group(2)))
        elif line.startswith("map"):
            m = re.fullmatch(r"map\s+(\S+)\s*=\s*(.+)", line)
            if not m:
                raise ParseError(k, "expected 'map <arrow> = [[...]]'")
            try:
                blocks[-1]["maps"][m.group(1)] = (k, json.loads(m.group(2)))
            except json.JSONDecodeError:
                raise ParseError(k, "matrix is not a nested list of integers") from None
        else:
            raise ParseError(k, f"unrecognised line {line!r}")
    out = {}
    for b in blocks:
        alg = algebra if b["side"] == algebra.side else algebra.opposite()
        dims = [0] * len(alg.vertices)
        for v, (k, d) in b["dims"].items():
            if v not in alg.vertices:
                raise ParseError(k, f"unknown vertex {v}")
            dims[alg.quiver.index(v)] = d
        maps = {}
        for name, (k, rows) in b["maps"].items():
            try:
                arrow = alg.quiver.arrow(name)
            except AlgebraError:
                raise ParseError(k, f"unknown arrow {name!r} on side {b['side']}") from None
            shape = (dims[alg.quiver.index(arrow.target)], dims[alg.quiver.index(arrow.source)])
            mat = np.array(rows, dtype=np.int64)
            if mat.size == 0 and 0 in shape:
                mat = mat.reshape(shape)
            if mat.shape != shape:
                raise ParseError(k, f"map {name} has shape {mat.shape}, expected {shape}")
            maps[name] = mat
        if b["name"] in out:
            raise ParseError(b["line"], f"duplicate module name {b['name']}")
        try:
            out[b["name"]] = Module(alg, dims, maps, name=b["name"])
        except ValueError as exc:
            raise ParseError(b["line"], str(exc)) from None
    return out


def parse_structure(text: str) -> list[str]:
    names = []
    for _, line in _lines(text):
        names.extend(line.replace(",", " ").split())
    return names


def format_module(m: Module, name: Optional[str] = None) -> str:
    lines = [f"module {name or m.name or 'M'} over {m.side}"]
    for v, d in zip(m.vertices, m.dims):
        lines.append(f"dim {v} = {d}")
    for a, mat in m.maps.items():
        if mat.size:
            lines.append(f"map {a} = {json.dumps(mat.tolist())}")
    return "\n".join(lines) + "\n"
