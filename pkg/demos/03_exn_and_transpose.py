# coding: utf-8

# # The class ex_n and the transpose
#
# A module belongs to ex_n when its projective dimension is exactly n+1
# and it has no Ext^i into projectives for i <= n.  Each such module is
# the cokernel of an n-exact sequence of projectives.

from pathlib import Path

from nexact.homology import (ext_dim, fun_of_complex, is_n_exact, res_fun_witness,
                             res_of_module, transpose)
from nexact.modcat import is_isomorphic
from nexact.structures import compute_exn
from nexact.textio import parse_algebra

DATA = Path(__file__).resolve().parent / "data"

alg, n = parse_algebra((DATA / "fix_c.alg").read_text())
ex = compute_exn(alg, n)
print("ex_1:", ex.names)
for name, why in ex.flags["rejected"]:
    print("  rejected", name, "--", why)

# Res and Fun go back and forth between modules and sequences.

f = ex.members[0]
x = res_of_module(f, n)
print(x.describe(), " n-exact:", is_n_exact(x, n))
print("Fun(Res f) = f:", is_isomorphic(fun_of_complex(x), f)[0])
print("homotopy witness verifies:", res_fun_witness(x, n).verify())

# The transpose lives over the opposite algebra.  Its dimension vector
# is read off from Ext^{n+1}(f, P_v), and applying it twice gives f back.

t = transpose(f, n)
print("Tr(S1) over", t.algebra.side, "dims", t.dims)
print("Ext^2(S1, P_v):", [ext_dim(f, P, n + 1) for P in alg.projectives])
print("Tr(Tr(S1)) = S1:", is_isomorphic(transpose(t, n), f)[0])

# A four-vertex chain with all length-two paths zero gives an example in
# degree n = 2, where the resolution has three maps.

g, n2 = parse_algebra((DATA / "fix_g.alg").read_text())
ex2 = compute_exn(g, n2)
print("ex_2 over FIX-G:", ex2.names, res_of_module(ex2.members[0], n2).describe())
