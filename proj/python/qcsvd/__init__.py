"""Heisenberg ring ground states and correlation-matrix SVD analysis."""

from ._core import (
    ConvergenceError,
    QcsvdError,
    SvdSpectrum,
    component,
    degeneracy_pairs,
    dense_hamiltonian,
    dominant_wavenumber,
    ed_ground_state,
    eigendecompose,
    enumerate_sector,
    fit_scaling,
    full_spectrum_energies,
    gamma_half_integral,
    haar_transform,
    inverse_haar_transform,
    kernel_reconstruct,
    measure_domain_size,
    mps_ground_state,
    oracle4,
    read_matrix_csv,
    thermal_correlation,
    write_matrix_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
