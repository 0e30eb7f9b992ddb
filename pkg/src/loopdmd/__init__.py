"""Reuse-distance and data-movement-distance analysis for affine loop programs.

Pipeline: DSL source -> tokens -> AST -> validated program -> timestamp
space + access map -> exact per-binding reuse analysis, and -> fitted
closed-form reuse/multiplicity formulas with an assembled data-movement
distance expression.
"""

from .ast import Program, render_program, structurally_equal
from .errors import (
    Diagnostic,
    FitFailure,
    FormulaError,
    LexError,
    ParseError,
    ResourceLimitError,
    SourceError,
    ValidationError,
)
from .lexer import Token, TokenKind, tokenize
from .locality import (
    ConcreteDistribution,
    ReuseRecord,
    analyze_concrete,
    dmd_numeric,
)
from .oracle import lru_hits, stack_distances
from .parser import parse, parse_source
from .polyhedral import (
    AccessMap,
    DataPoint,
    TimestampSpace,
    build_access_map,
    build_timestamp_space,
    dump_access_map,
    dump_space,
    enumerate_points,
    evaluate_access,
)
from .fitting import Poly, QuasiPoly, fit
from .semantics import ValidatedProgram, check_source, validate
from .symbolic import (
    DMDFormula,
    ReuseClass,
    SymbolicDistribution,
    SymbolicGroup,
    analyze_symbolic,
    assemble_dmd,
    classify,
    scaling_filter,
)
from .symbolic_config import SymbolicConfig

__all__ = [
    "AccessMap",
    "ConcreteDistribution",
    "DMDFormula",
    "DataPoint",
    "Diagnostic",
    "FitFailure",
    "FormulaError",
    "LexError",
    "ParseError",
    "Poly",
    "Program",
    "QuasiPoly",
    "ResourceLimitError",
    "ReuseClass",
    "ReuseRecord",
    "SourceError",
    "SymbolicConfig",
    "SymbolicDistribution",
    "SymbolicGroup",
    "TimestampSpace",
    "Token",
    "TokenKind",
    "ValidatedProgram",
    "ValidationError",
    "analyze_concrete",
    "analyze_symbolic",
    "assemble_dmd",
    "build_access_map",
    "build_timestamp_space",
    "check_source",
    "classify",
    "dmd_numeric",
    "dump_access_map",
    "dump_space",
    "enumerate_points",
    "evaluate_access",
    "fit",
    "lru_hits",
    "parse",
    "parse_source",
    "render_program",
    "scaling_filter",
    "stack_distances",
    "structurally_equal",
    "tokenize",
    "validate",
]

__version__ = "0.1.0"
