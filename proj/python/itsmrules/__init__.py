"""Structured-English rule compiler and ITSM service tree engine."""

from ._core import (
    DiagnosticError,
    ServiceTree,
    canonical_render,
    check_vocabulary,
    compile,
    run_scenario,
)

__all__ = [
    "DiagnosticError",
    "ServiceTree",
    "canonical_render",
    "check_vocabulary",
    "compile",
    "run_scenario",
]
