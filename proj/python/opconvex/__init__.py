"""Operator convexity toolkit.

Matrices are passed as complex NumPy arrays; verdicts and membership results
come back as plain dictionaries mirroring the JSON report format.
"""

from ._core import (
    ConvergenceError,
    DimensionError,
    DomainError,
    Error,
    InvalidInput,
    apply_combination,
    apply_function,
    apply_log_combination,
    eig_hermitian,
    epigraph_closure_test,
    function_class,
    geometric_mean,
    hull_membership,
    interval_set_falsifier,
    jensen_test,
    lch_membership,
    log_epigraph_closure_test,
    log_harmonic_jensen_test,
    log_midpoint_test,
    loewner_leq,
    midpoint_convexity_test,
    run_cli,
    sample_hermitian,
    sample_tuple,
    spectral_interval_oracle,
    two_point_witness,
    validate_tuple,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
