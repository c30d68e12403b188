"""Exact structures on proj A for finite-dimensional algebras over F_p."""

from .algebra import Algebra, Arrow, Quiver, Relation, build_algebra, opposite_algebra
from .homology import (Complex, complete_n_kernel, ext_dim, fun_of_complex, is_left_n_exact,
                       is_n_exact, minimal_resolution, op_complex, pdim, projective_cover,
                       res_of_module, transpose)
from .modcat import (ModMorphism, Module, decompose, extension_middle_terms, hom_basis,
                     is_isomorphic, ker_coker_image, rsnake, simple, submodules)
from .structures import (StructureSet, check_structure, compute_exn, enumerate_indecomposables,
                         enumerate_structures, is_extension_closed, is_quasi_n_abelian, max_n,
                         pb_member, pb_step, po_step)

__all__ = [
    "Algebra", "Arrow", "Quiver", "Relation", "build_algebra", "opposite_algebra",
    "Complex", "complete_n_kernel", "ext_dim", "fun_of_complex", "is_left_n_exact",
    "is_n_exact", "minimal_resolution", "op_complex", "pdim", "projective_cover",
    "res_of_module", "transpose",
    "ModMorphism", "Module", "decompose", "extension_middle_terms", "hom_basis",
    "is_isomorphic", "ker_coker_image", "rsnake", "simple", "submodules",
    "StructureSet", "check_structure", "compute_exn", "enumerate_indecomposables",
    "enumerate_structures", "is_extension_closed", "is_quasi_n_abelian", "max_n",
    "pb_member", "pb_step", "po_step",
]
