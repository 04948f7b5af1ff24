"""Gauss map of surfaces in R^4 given as graphs (x, y, phi, psi)."""

from ._core import (
    DomainError,
    Error,
    EvalError,
    InconsistencyError,
    InputError,
    NumericalError,
    ParseError,
    Surface,
    blaschke_check,
    cli,
    congruence,
    curvature_report,
    gauss_map,
    great_circle_fit,
    load_surface,
    make_surface,
    parse_surface,
    reconstruct,
    run_suite,
    suite_names,
)

__all__ = [
    "DomainError",
    "Error",
    "EvalError",
    "InconsistencyError",
    "InputError",
    "NumericalError",
    "ParseError",
    "Surface",
    "blaschke_check",
    "cli",
    "congruence",
    "curvature_report",
    "gauss_map",
    "great_circle_fit",
    "load_surface",
    "make_surface",
    "parse_surface",
    "reconstruct",
    "run_suite",
    "suite_names",
]
