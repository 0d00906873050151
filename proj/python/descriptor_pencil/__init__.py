"""Descriptor systems F Y' = G Y + B V: pencil analysis, continuous solutions,
zero-order-hold discretization and nabla fractional difference models."""

from ._core import (
    DescriptorError,
    DescriptorSystem,
    DiscretizedSystem,
    InputSignal,
    build_system,
    classify_pencil,
    compare_with_continuous,
    consistency_check,
    correspondence_diagnostic,
    det_polynomial,
    discrete_simulate,
    discretize,
    elementary_divisors,
    fast_correction_coeffs,
    fundamental_matrix,
    nabla_coefficient_direct,
    nabla_coefficients,
    residual_check,
    rising_factorial,
    run_command,
    solve_continuous,
    solve_fractional,
    solve_via_fundamental,
    spectral_structure,
    telescope_recursion,
    uniform_grid,
    weierstrass_decompose,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
