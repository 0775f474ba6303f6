"""Transition densities of subordinators: saddle point and contour inversion,
sharp two-sided estimates, Green functions and Monte Carlo oracles."""

from ._core import (
    CapabilityError,
    DomainError,
    Model,
    ModelInvalidError,
    NumericalIntegrityError,
    SpecFormatError,
    SubdenseError,
    SupportError,
    concentration_h,
    concentration_K,
    density,
    green,
    heat_kernel,
    psi_star,
    sample,
    sharp_estimate,
    verify,
)

__all__ = [
    "CapabilityError",
    "DomainError",
    "Model",
    "ModelInvalidError",
    "NumericalIntegrityError",
    "SpecFormatError",
    "SubdenseError",
    "SupportError",
    "concentration_K",
    "concentration_h",
    "density",
    "green",
    "heat_kernel",
    "psi_star",
    "sample",
    "sharp_estimate",
    "verify",
]
