"""Numerical solver for the discrete generalized Gaussian log-Minkowski problem."""

from ._core import (
    DomainError,
    Error,
    GGParams,
    HemisphereError,
    TieError,
    ToleranceError,
    UnboundedBodyError,
    VariationalDomainError,
    __version__,
    ball_radius_for_volume,
    ball_volume,
    density,
    density_at_radius,
    euler_lagrange_residual,
    hemisphere_check,
    lp_surface_measure,
    measures,
    radial_cumulative,
    solve,
    support_radius,
    volume_gradient,
    wulff_shape,
)

__all__ = [
    "DomainError",
    "Error",
    "GGParams",
    "HemisphereError",
    "TieError",
    "ToleranceError",
    "UnboundedBodyError",
    "VariationalDomainError",
    "__version__",
    "ball_radius_for_volume",
    "ball_volume",
    "density",
    "density_at_radius",
    "euler_lagrange_residual",
    "hemisphere_check",
    "lp_surface_measure",
    "measures",
    "radial_cumulative",
    "solve",
    "support_radius",
    "volume_gradient",
    "wulff_shape",
]
