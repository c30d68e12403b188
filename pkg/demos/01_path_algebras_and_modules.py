# coding: utf-8

# # Path algebras and their modules
#
# A bound quiver algebra is built from a text file: vertices, arrows and
# monomial (or linear) relations over a prime field.  Here we load the
# three-vertex chain with the composite of its two arrows set to zero.

from pathlib import Path

from nexact.modcat import decompose, hom_dim, simple, submodules
from nexact.structures import enumerate_indecomposables
from nexact.textio import parse_algebra

DATA = Path(__file__).resolve().parent / "data"

alg, n = parse_algebra((DATA / "fix_c.alg").read_text())
print(alg)
print("basis:", [str(b) for b in alg.basis])

# The indecomposable projectives are the rows of the regular module.

for P in alg.projectives:
    print(P.name, P.dims)

# Hom spaces between small modules are computed by solving the
# naturality equations over F_p.

s1 = simple(alg, "1")
P1 = alg.projective("1")
print("dim Hom(P1, S1) =", hom_dim(P1, s1))
print("dim Hom(S1, P1) =", hom_dim(s1, P1))

# The submodule lattice of P1 has three members: 0, the socle, and P1.

print("submodules of P1:", [f.dims for f in submodules(P1)])

# Every indecomposable of bounded dimension is found by building
# extensions of simples, then splitting off summands.

for m in enumerate_indecomposables(alg, 4):
    print(m.name, m.dims, "pieces after decompose:", len(decompose(m)))
