"""Quantum Fisher and Kirillov-Kostant-Souriau geometry on unitary orbits of density matrices."""

from ._core import (
    DomainError,
    Error,
    InclusionError,
    NoSolutionError,
    NotInNormalError,
    StratumError,
    ValidationError,
    bures_lambda,
    bures_tangent,
    classify,
    d_map,
    dimension_identity,
    fisher_split,
    fisher_tensor,
    fisher_u3_closed_form,
    kks_compatible_metric,
    kks_form,
    nesting_report,
    normal_basis,
    orbit_dimension,
    phi_inverse,
    pullback_identity_check,
    selftest,
    sld,
    sld_linear_solve,
    spectral_decompose,
)

__all__ = [name for name in dir() if not name.startswith("_")]
