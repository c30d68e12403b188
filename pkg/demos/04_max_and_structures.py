# coding: utf-8

# # The maximal structure and the lattice of all structures
#
# max_n is found by iterating Pb (stability under images and quotients
# of submodules) to a fixpoint, then Po (the same condition seen through
# the transpose).  The four-vertex chain with one cubic relation shows
# both operators removing something.

from pathlib import Path

from nexact.structures import (compute_exn, conflations, enumerate_structures, is_quasi_n_abelian,
                               max_n, pb_member)
from nexact.textio import parse_algebra

DATA = Path(__file__).resolve().parent / "data"

alg, n = parse_algebra((DATA / "fix_e.alg").read_text())
mx = max_n(alg, n)
for step in mx.trace:
    print(step["operator"], step["iteration"], "removed", step["removed"])
print("max_1:", mx.names)
print("quasi 1-abelian:", bool(is_quasi_n_abelian(alg, n)))

# The reason the first member goes: a submodule whose cokernel is not
# in the class.

ex = compute_exn(alg, n)
ok, why = pb_member(ex.members[1], ex)
print(why.describe())

# With two independent relations the maximal class has two members and
# every subset of it is a structure.

five, _ = parse_algebra((DATA / "fix_f.alg").read_text())
found = enumerate_structures(five, 1)
print(len(found), "structures:", [s.names for s in found])

# Each conflation of the maximal structure is the resolution of a member.

for name, x in conflations(max_n(five, 1)):
    print(name, ":", x.describe())
