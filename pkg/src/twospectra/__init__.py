"""Two-spectra direct and inverse problems for finite Jacobi matrices.

Forward direction: given a Jacobi matrix and a first-mass perturbation
ratio theta, compute and pair the spectra of the original and perturbed
matrices and verify the exact identities they satisfy.  Inverse: recover
theta, the spectral weights, the matrix, and the underlying mass-spring
chain from the two spectra.
"""

from .core import (
    IndexedSpectrum,
    JacobiMatrix,
    ShiftDirection,
    SpectralMeasure,
    SpectrumPair,
    apply_theta,
    default_zero_tolerance,
    enumerate_spectrum,
    pair_spectra,
)
from .tridiag import (
    EigenDecomposition,
    PolynomialTable,
    asymptotic_coeffs,
    eigen,
    normalizing_constants,
    poly_table,
    riccati_next,
    weyl_m,
)
from . import errors

__all__ = [
    "IndexedSpectrum",
    "JacobiMatrix",
    "ShiftDirection",
    "SpectralMeasure",
    "SpectrumPair",
    "apply_theta",
    "default_zero_tolerance",
    "enumerate_spectrum",
    "pair_spectra",
    "EigenDecomposition",
    "PolynomialTable",
    "asymptotic_coeffs",
    "eigen",
    "normalizing_constants",
    "poly_table",
    "riccati_next",
    "weyl_m",
    "errors",
]

__version__ = "0.1.0"
