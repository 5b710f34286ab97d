"""Direct problem: from a matrix and a perturbation ratio to paired spectra.

Produces the spectra of J and of its first-mass perturbation J(theta),
pairs them by the mirrored interlacing convention, and checks the exact
finite-size identities they satisfy: the trace shift
sum(mu_k - lambda_k) = q1 (theta^2 - 1), the determinant-scale identity
prod(mu_k / lambda_k) = theta^2, the eigenvalue derivative
d lambda_k / d theta = 2 lambda_k / (theta alpha_k), and the agreement of
the two evaluations of the spectral ratio function
prod (zeta - mu_k)/(zeta - lambda_k) = zeta (theta^2 - 1) m(zeta) + theta^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import (
    IndexedSpectrum,
    JacobiMatrix,
    ShiftDirection,
    SpectrumPair,
    apply_theta,
    default_zero_tolerance,
    enumerate_spectrum,
    pair_spectra,
)
from .errors import IndexNotFound, InconsistentShift, PoleProximity
from .tridiag import EigenDecomposition, _local_gap, eigen, normalizing_constants, weyl_m

__all__ = [
    "DirectReport",
    "spectra_pair",
    "eigenvalue_derivative",
    "trace_shift",
    "weyl_ratio_from_values",
    "weyl_ratio_from_spectra",
    "weyl_ratio_from_m",
]

#: Probe points (scaled by the spectral radius) at which the report compares
#: the product and m-function forms of the spectral ratio.
_PROBE_POINTS = (0.37 + 1.1j, -0.81 + 2.3j, 0.05 + 0.9j)

_TRACE_TOL = 1e-9
_THETA_PRODUCT_TOL = 1e-10
_RATIO_AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class DirectReport:
    """Paired spectra of (J, J(theta)) with identity-check diagnostics.

    ``pair`` is None exactly when theta == 1 (degenerate: both spectra
    coincide).  ``alpha`` holds the normalizing constants of J(theta)
    aligned with ``mus.values``.  ``diagnostics`` maps check names to
    absolute residuals, ``tolerances`` to the thresholds that ``passed``
    was judged against.
    """

    theta: float
    lambdas: IndexedSpectrum
    mus: IndexedSpectrum
    pair: SpectrumPair | None
    alpha: tuple[float, ...]
    diagnostics: dict[str, float]
    tolerances: dict[str, float]
    passed: bool

    @property
    def degenerate(self) -> bool:
        return self.pair is None

    def alpha_at(self, index: int) -> float:
        """Normalizing constant of J(theta) at a signed spectrum index."""
        try:
            return self.alpha[self.mus.position_of(index)]
        except KeyError as exc:
            raise IndexNotFound(str(exc)) from exc


def weyl_ratio_from_values(
    lam_values, mu_values, zeta, pole_tolerance_factor: float = 1e-8
):
    """prod_k (zeta - mu_k)/(zeta - lambda_k), evaluated in log space.

    Summing complex logarithms keeps the product stable for thousands of
    near-unit factors.  Raises PoleProximity when ``zeta`` is closer to a
    lambda (a pole) than ``pole_tolerance_factor`` times the local gap.
    Returns a float for real input, complex otherwise.
    """
    lams = tuple(float(v) for v in lam_values)
    mus = tuple(float(v) for v in mu_values)
    if len(lams) != len(mus):
        raise ValueError(f"value lists must have equal length: {len(lams)} vs {len(mus)}")
    zc = complex(zeta)
    dists = [abs(zc - lam) for lam in lams]
    k_min = min(range(len(dists)), key=dists.__getitem__)
    tol = pole_tolerance_factor * _local_gap(lams, k_min)
    if dists[k_min] < tol:
        raise PoleProximity(
            f"point {zeta!r} is within {dists[k_min]:.3e} of pole {lams[k_min]!r} "
            f"(tolerance {tol:.3e})"
        )
    if any(zc == mu for mu in mus):
        return 0.0 if not isinstance(zeta, complex) else 0.0j
    logs = [cmath.log(zc - mu) - cmath.log(zc - lam) for lam, mu in zip(lams, mus)]
    total = complex(math.fsum(t.real for t in logs), math.fsum(t.imag for t in logs))
    value = cmath.exp(total)
    if isinstance(zeta, complex):
        return value
    return value.real


def weyl_ratio_from_spectra(pair: SpectrumPair, zeta, pole_tolerance_factor: float = 1e-8):
    """Spectral ratio function evaluated from a paired spectrum."""
    return weyl_ratio_from_values(
        pair.lambdas.values, pair.mus.values, zeta, pole_tolerance_factor
    )


def weyl_ratio_from_m(
    j: JacobiMatrix,
    theta: float,
    zeta,
    decomposition: EigenDecomposition | None = None,
):
    """Same function through the m-function: zeta (theta^2-1) m(zeta) + theta^2."""
    theta = float(theta)
    return zeta * (theta * theta - 1.0) * weyl_m(j, zeta, decomposition) + theta * theta


def _relative_disagreement(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def spectra_pair(
    j: JacobiMatrix, theta: float, zero_tolerance: float | None = None
) -> DirectReport:
    """Compute, enumerate and pair the spectra of J and J(theta).

    theta = 1 is allowed and yields a degenerate report (identical
    spectra, no pair).  Otherwise the shift direction always comes out
    RIGHT_POS for theta > 1 and LEFT_POS for theta < 1, zero belongs to
    both spectra or neither, and the report's diagnostics record how well
    the computed spectra satisfy the trace-shift, ratio-product, and
    dual-evaluation identities.
    """
    theta = float(theta)
    eig_orig = eigen(j)
    jp = apply_theta(j, theta)
    eig_pert = eigen(jp)
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(
            eig_orig.eigenvalues + eig_pert.eigenvalues
        )
    lams = enumerate_spectrum(eig_orig.eigenvalues, zero_tolerance)
    alpha = normalizing_constants(jp, eig_pert)
    if theta == 1.0:
        mus = enumerate_spectrum(eig_pert.eigenvalues, zero_tolerance)
        return DirectReport(theta, lams, mus, None, alpha, {}, {}, True)

    pair = pair_spectra(lams, eig_pert.eigenvalues, zero_tolerance)
    expected = ShiftDirection.RIGHT_POS if theta > 1.0 else ShiftDirection.LEFT_POS
    if pair.shift is not expected:
        raise InconsistentShift(
            f"theta = {theta} should shift {expected.value} but the spectra "
            f"interlace as {pair.shift.value}"
        )

    theta_sq = theta * theta
    diagnostics: dict[str, float] = {}
    tolerances: dict[str, float] = {}

    q1 = j.q[0]
    lhs = math.fsum(pair.gaps())
    diagnostics["trace_shift"] = abs(lhs - q1 * (theta_sq - 1.0))
    tolerances["trace_shift"] = _TRACE_TOL * (1.0 + abs(q1) * max(1.0, theta_sq))

    if pair.has_zero:
        zp = pair.lambdas.zero_pos
        log_terms = [
            math.log(mu / lam)
            for i, (lam, mu) in enumerate(zip(pair.lambdas.values, pair.mus.values))
            if i != zp
        ]
        prod_prime = math.exp(math.fsum(log_terms))
        alpha0 = normalizing_constants(j, eig_orig)[zp]
        diagnostics["ratio_product"] = abs(
            prod_prime - (theta_sq - (theta_sq - 1.0) / alpha0)
        )
        tolerances["ratio_product"] = 1e-9 * max(1.0, theta_sq)
    else:
        log_terms = [
            math.log(mu / lam)
            for lam, mu in zip(pair.lambdas.values, pair.mus.values)
        ]
        theta_sq_rec = math.exp(math.fsum(log_terms))
        diagnostics["ratio_product"] = abs(theta_sq_rec - theta_sq)
        tolerances["ratio_product"] = _THETA_PRODUCT_TOL * theta_sq

    radius = max(1.0, max(abs(v) for v in pair.lambdas.values))
    worst = 0.0
    for probe in _PROBE_POINTS:
        zeta = probe * radius
        via_product = weyl_ratio_from_spectra(pair, zeta)
        via_m = weyl_ratio_from_m(j, theta, zeta, eig_orig)
        worst = max(worst, _relative_disagreement(via_product, via_m))
    diagnostics["ratio_dual_evaluation"] = worst
    tolerances["ratio_dual_evaluation"] = _RATIO_AGREEMENT_TOL

    passed = all(diagnostics[k] <= tolerances[k] for k in diagnostics)
    return DirectReport(theta, lams, pair.mus, pair, alpha, diagnostics, tolerances, passed)


def eigenvalue_derivative(
    j: JacobiMatrix, theta: float, k: int, zero_tolerance: float | None = None
) -> float:
    """d lambda_k / d theta for the eigenvalue curve of J(theta).

    Equals 2 lambda_k(theta) / (theta alpha_k(theta)); in particular a
    zero eigenvalue is stationary in theta.  ``k`` is a signed spectrum
    index of J(theta).
    """
    theta = float(theta)
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta}")
    jp = apply_theta(j, theta)
    eig = eigen(jp)
    spectrum = enumerate_spectrum(eig.eigenvalues, zero_tolerance)
    try:
        pos = spectrum.position_of(k)
    except KeyError as exc:
        raise IndexNotFound(
            f"index {k} not in the spectrum enumeration {spectrum.indices()}"
        ) from exc
    alpha = normalizing_constants(jp, eig)
    return 2.0 * eig.eigenvalues[pos] / (theta * alpha[pos])


def trace_shift(
    j: JacobiMatrix,
    theta1: float,
    theta2: float,
    zero_tolerance: float | None = None,
) -> tuple[float, float]:
    """Both sides of sum(mu_k - lambda_k) = q1 (theta2^2 - theta1^2).

    The left side pairs the spectra of J(theta1) and J(theta2); at finite
    size it telescopes to the trace difference, so the identity is exact
    up to rounding.
    """
    theta1 = float(theta1)
    theta2 = float(theta2)
    if not 0.0 < theta1 <= theta2:
        raise ValueError(f"need 0 < theta1 <= theta2, got {theta1}, {theta2}")
    if theta1 == theta2:
        return (0.0, 0.0)
    eig1 = eigen(apply_theta(j, theta1))
    eig2 = eigen(apply_theta(j, theta2))
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(eig1.eigenvalues + eig2.eigenvalues)
    lams = enumerate_spectrum(eig1.eigenvalues, zero_tolerance)
    pair = pair_spectra(lams, eig2.eigenvalues, zero_tolerance)
    lhs = math.fsum(pair.gaps())
    rhs = j.q[0] * (theta2 * theta2 - theta1 * theta1)
    return (lhs, rhs)
