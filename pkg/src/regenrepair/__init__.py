"""Helper selection for regenerating codes: tradeoffs, min-cut oracle and GFR codes."""

from .core import (BudgetExceeded, ConstructionFailed, DimensionMismatch,
                   NoSolution, OperatingPoint, ParamOutOfRange,
                   PreconditionViolated, RankDeficient, SchemeViolation,
                   SystemParams, UnsupportedField, format_rational,
                   parse_rational, validate_params)
from .family import (FamilyIndexPermutation, FamilyStructure,
                     enumerate_label_sequences, family_index_vector, modify,
                     rfip, y_offset, y_scores, z_scores)
from .tradeoff import (Partition, TradeoffCurve, br_mbr, br_mincut, br_msr,
                       br_tradeoff_curve, cm_values, family_plus_mbr,
                       family_plus_mincut, family_plus_partition, fr_mbr,
                       fr_mincut, fr_msr, fr_tradeoff_curve, grouped_lrc_mbr,
                       helper_selection_beneficial, optimality_class,
                       stationary_lower_bound)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConstructionFailed",
    "DimensionMismatch",
    "NoSolution",
    "OperatingPoint",
    "ParamOutOfRange",
    "PreconditionViolated",
    "RankDeficient",
    "SchemeViolation",
    "SystemParams",
    "UnsupportedField",
    "format_rational",
    "parse_rational",
    "validate_params",
    "FamilyIndexPermutation",
    "FamilyStructure",
    "enumerate_label_sequences",
    "family_index_vector",
    "modify",
    "rfip",
    "y_offset",
    "y_scores",
    "z_scores",
    "Partition",
    "TradeoffCurve",
    "br_mbr",
    "br_mincut",
    "br_msr",
    "br_tradeoff_curve",
    "cm_values",
    "family_plus_mbr",
    "family_plus_mincut",
    "family_plus_partition",
    "fr_mbr",
    "fr_mincut",
    "fr_msr",
    "fr_tradeoff_curve",
    "grouped_lrc_mbr",
    "helper_selection_beneficial",
    "optimality_class",
    "stationary_lower_bound",
]
