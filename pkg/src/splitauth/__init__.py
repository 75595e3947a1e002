"""Exact-arithmetic toolkit for splitting designs and splitting authentication codes.

The package verifies splitting t-designs, screens parameter tuples against
the counting and divisibility conditions, searches exhaustively for designs
with coverage 1, converts between designs and authentication codes, and
evaluates multi-fold spoofing security by exhaustive game analysis.  Every
verdict is computed in integer or `fractions.Fraction` arithmetic.
"""
from __future__ import annotations

from .codes import (
    AuthCode,
    canonical_form,
    code_to_design,
    decode,
    design_to_code,
    encode,
    format_matrix,
    load_matrix,
    parse_matrix,
    source_trace,
    store_matrix,
    valid_messages,
)
from .designs import (
    DesignParams,
    FeasibilityReport,
    SplittingDesign,
    VerificationReport,
    canonicalize,
    check_divisibility,
    check_feasibility,
    check_fisher,
    check_parameter_relations,
    count_qualifying_blocks,
    format_design,
    load_design,
    parse_design,
    replication_number,
    store_design,
    verify_splitting_design,
)
from .errors import (
    InputError,
    ParseError,
    SplitAuthError,
    StructureError,
    UnsupportedParametersError,
    UnverifiedDesignError,
)
from .search import SearchConfig, SearchOutcome, SearchStats, search
from .security import (
    AttackEvaluation,
    AttackWitness,
    DeceptionProfile,
    OrderReport,
    SecurityModel,
    deception_bound,
    deception_probability,
    deception_profile,
    encoding_rule_bound,
    is_optimal,
    joint_deception_probability,
    security_order,
)

__version__ = "0.1.0"

__all__ = [
    "AttackEvaluation",
    "AttackWitness",
    "AuthCode",
    "DeceptionProfile",
    "DesignParams",
    "FeasibilityReport",
    "InputError",
    "OrderReport",
    "ParseError",
    "SearchConfig",
    "SearchOutcome",
    "SearchStats",
    "SecurityModel",
    "SplitAuthError",
    "SplittingDesign",
    "StructureError",
    "UnsupportedParametersError",
    "UnverifiedDesignError",
    "VerificationReport",
    "canonical_form",
    "canonicalize",
    "check_divisibility",
    "check_feasibility",
    "check_fisher",
    "check_parameter_relations",
    "code_to_design",
    "count_qualifying_blocks",
    "decode",
    "deception_bound",
    "deception_probability",
    "deception_profile",
    "design_to_code",
    "encode",
    "encoding_rule_bound",
    "format_design",
    "format_matrix",
    "is_optimal",
    "joint_deception_probability",
    "load_design",
    "load_matrix",
    "parse_design",
    "parse_matrix",
    "replication_number",
    "search",
    "security_order",
    "source_trace",
    "store_design",
    "store_matrix",
    "valid_messages",
    "verify_splitting_design",
]
