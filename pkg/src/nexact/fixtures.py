"""Small algebras used throughout the tests and demos (all over F_2).

FIX_A  one vertex, no arrows: the field itself.
FIX_B  1 -> 2, no relations.
FIX_C  1 -> 2 -> 3 with b*a = 0.  ex_1 = add S1 with resolution P3 -> P2 -> P1.
FIX_D  one loop x with x*x = 0, i.e. F_2[x]/(x^2).  The simple has infinite pdim.
FIX_E  1 -> 2 -> 3 -> 4 with c*b*a = 0.  ex_1 has two indecomposables, max_1 is zero.
FIX_F  1 -> 2 -> 3 -> 4 -> 5 with b*a = 0 and d*c = 0.  max_1 = ex_1 = add(S1 + S3).
FIX_G  1 -> 2 -> 3 -> 4 with b*a = 0 and c*b = 0, read with n = 2.  ex_2 = add S1 with
       resolution P4 -> P3 -> P2 -> P1; ex_1 is zero.
"""

from __future__ import annotations

from .algebra import Algebra
from .textio import parse_algebra

FIX_A = """\
field p=2
vertex 1
n = 1
"""

FIX_B = """\
field p=2
vertex 1
vertex 2
arrow a: 1 -> 2
n = 1
"""

FIX_C = """\
field p=2
vertex 1
vertex 2
vertex 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relation b*a
n = 1
"""

FIX_D = """\
field p=2
vertex 1
arrow x: 1 -> 1
relation x*x
n = 1
"""

FIX_E = """\
field p=2
vertex 1
vertex 2
vertex 3
vertex 4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
relation c*b*a
n = 1
"""

FIX_F = """\
field p=2
vertex 1
vertex 2
vertex 3
vertex 4
vertex 5
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
arrow d: 4 -> 5
relation b*a
relation d*c
n = 1
"""

FIX_G = """\
field p=2
vertex 1
vertex 2
vertex 3
vertex 4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
relation b*a
relation c*b
n = 2
"""

TEXTS = {"A": FIX_A, "B": FIX_B, "C": FIX_C, "D": FIX_D, "E": FIX_E, "F": FIX_F, "G": FIX_G}
_cache: dict = {}


def fixture(name: str) -> Algebra:
    """The fixture algebra ``name`` (one of A..G); built once per process."""
    key = name.upper().removeprefix("FIX_").removeprefix("FIX-")
    if key not in _cache:
        alg, _ = parse_algebra(TEXTS[key])
        alg.name = f"FIX-{key}"
        _cache[key] = alg
    return _cache[key]
