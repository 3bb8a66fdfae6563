"""Python bindings for the fblbench core library."""

from ._core import (
    ConfigError,
    DimensionError,
    Expr,
    FblError,
    LiftParams,
    NonFiniteError,
    ParseError,
    Space,
    beta,
    check_biorthogonal,
    check_disjoint,
    check_freenorm,
    check_lemma44,
    check_normspan,
    lift,
    norm_lower_bound,
    norm_upper_bound,
    run_cli,
    tuple_constraint,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "Expr",
    "FblError",
    "LiftParams",
    "NonFiniteError",
    "ParseError",
    "Space",
    "beta",
    "check_biorthogonal",
    "check_disjoint",
    "check_freenorm",
    "check_lemma44",
    "check_normspan",
    "lift",
    "norm_lower_bound",
    "norm_upper_bound",
    "run_cli",
    "tuple_constraint",
]
