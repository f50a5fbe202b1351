"""Python bindings for the smoothlab C++ core."""

from ._core import (
    InfeasibleLevel,
    InvalidArgument,
    UnsupportedOperation,
    alpha_shrink_radius,
    certified_radius,
    closed_form_excess,
    excess_risk,
    main_upper_bound,
    norm_inverse,
    psi,
    run_scenario,
    sample_spheres,
    shifted_cdf,
    verify_1d_construction,
)

__all__ = [
    "InfeasibleLevel",
    "InvalidArgument",
    "UnsupportedOperation",
    "alpha_shrink_radius",
    "certified_radius",
    "closed_form_excess",
    "excess_risk",
    "main_upper_bound",
    "norm_inverse",
    "psi",
    "run_scenario",
    "sample_spheres",
    "shifted_cdf",
    "verify_1d_construction",
]
