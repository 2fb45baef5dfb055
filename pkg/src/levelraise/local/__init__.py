"""Finite models of the local representation theory: parahorics, fixed-space tables, Hecke algebras, Satake checks."""

from .groups import FiniteMatrixGroup, GroupTooLarge, ParahoricShape, classical_order, double_coset_count, shape
from .induced import induced_fixed_dim
from .iwahori import iwahori_rank1_characters, module_report, u3_unipotent_relation_solve
from .parahoric import parahoric_indices, weyl_fixed_dim
from .satake import SatakeParam, satake_congruence_check, type_congruence
from .tables import TableRow, classify, family_sums, load_table
from .verify import verify_golden

__all__ = [
    "FiniteMatrixGroup", "GroupTooLarge", "ParahoricShape", "SatakeParam", "TableRow",
    "classical_order", "classify", "double_coset_count", "family_sums", "induced_fixed_dim",
    "iwahori_rank1_characters", "load_table", "module_report", "parahoric_indices",
    "satake_congruence_check", "shape", "type_congruence", "u3_unipotent_relation_solve",
    "verify_golden", "weyl_fixed_dim",
]
