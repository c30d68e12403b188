# coding: utf-8

# # Minimal projective resolutions and Ext
#
# Resolutions are computed by repeated projective covers of kernels.
# For the simple at vertex 1 of the radical-square-zero chain the
# resolution has length two.

from pathlib import Path

from nexact.homology import ext_dim, minimal_resolution, pdim
from nexact.modcat import simple
from nexact.textio import parse_algebra

DATA = Path(__file__).resolve().parent / "data"

alg, _ = parse_algebra((DATA / "fix_c.alg").read_text())
s1 = simple(alg, "1")
res = minimal_resolution(s1, 4)
print(res.complex.describe(), "->", s1.name)
print("pdim S1 =", res.pdim)

# Ext against each indecomposable projective, degree by degree.

for i in range(3):
    print(f"Ext^{i}(S1, P_v):", [ext_dim(s1, P, i) for P in alg.projectives])

# Over the dual numbers the simple module is its own syzygy, so the
# resolution never stops.  The computation reports a lower bound
# rather than pretending to know the answer.

dual, _ = parse_algebra((DATA / "fix_d.alg").read_text())
print("pdim over F_2[x]/(x^2):", pdim(simple(dual, "1"), 5))
