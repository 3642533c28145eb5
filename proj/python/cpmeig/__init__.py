"""Laplace-Beltrami eigenvalues on curves, surfaces and solids via the
closest point method.  Thin wrapper over the C++ core."""

from ._core import (  # noqa: F401
    Band,
    ConfigError,
    DomainError,
    FilterReport,
    Grid,
    NumericError,
    SparseOperator,
    SpectralResult,
    Surface,
    analytic_circle,
    analytic_closed_curve,
    analytic_hemisphere_neumann,
    analytic_sphere,
    arnoldi_near_shift,
    assemble_stabilized,
    assemble_unstabilized,
    build_band,
    build_extension_matrix,
    build_fd_laplacian,
    closest_point,
    condition_number_2norm,
    cosine_curve_arclength,
    cp_bar,
    dense_spectrum,
    embedded_circle_eigenfunction,
    filter_spurious,
    is_ghost,
    kept_real_eigenvalues,
    load_mesh_surface,
    make_surface,
    read_matrix_market,
    sample_eigenfunction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
