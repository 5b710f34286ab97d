"""Reconstruction from two spectra: theta, weights, measure, matrix.

Pipeline: the perturbation ratio comes out of the eigenvalue-ratio
product theta^2 = prod(mu_k / lambda_k) (or, when zero is an eigenvalue,
out of one auxiliary datum: the first diagonal entry, the normalizing
constant at zero, or theta itself).  The spectral weights follow from

    tau_n = (mu_n - lambda_n) / (lambda_n (theta^2 - 1))
            * prod_{k != n} (mu_k - lambda_n)/(lambda_k - lambda_n),

with the zero-case variants for n = 0.  Running the discrete Stieltjes
procedure on the resulting measure (a Lanczos three-term recurrence with
full reorthogonalization, which classical moment-based Gram-Schmidt is
too ill-conditioned to replace) yields the recurrence coefficients, i.e.
the Jacobi matrix.  A forward eigenvalue check plus the moment identities
q1 = s1 and b1^2 = s2 - s1^2 close the loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    JacobiMatrix,
    ShiftDirection,
    SpectralMeasure,
    SpectrumPair,
    apply_theta,
)
from .errors import (
    BoundViolated,
    BreakdownAtStep,
    ForwardCheckFailure,
    HintMissing,
    NonPositiveProduct,
    NonPositiveWeight,
    NormalizationFailure,
    ZeroInSpectrum,
)
from .tridiag import eigen

__all__ = [
    "InverseInput",
    "InverseSolution",
    "recover_theta",
    "recover_theta_zero_case",
    "recover_weights",
    "moments",
    "reconstruct_jacobi",
    "solve",
]

_NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class InverseInput:
    """A spectrum pair plus the auxiliary datum the zero case requires.

    Exactly one of ``q1`` / ``alpha0`` / ``theta`` must be given when zero
    is an eigenvalue, none otherwise.
    """

    pair: SpectrumPair
    q1: float | None = None
    alpha0: float | None = None
    theta: float | None = None

    def __post_init__(self):
        hints = [h for h in (self.q1, self.alpha0, self.theta) if h is not None]
        if self.pair.has_zero:
            if not hints:
                raise HintMissing(
                    "zero is an eigenvalue: supply exactly one of q1, alpha0, theta"
                )
            if len(hints) > 1:
                raise ValueError("supply at most one of q1, alpha0, theta")
        elif hints:
            raise ValueError("hints are only meaningful when zero is an eigenvalue")
        if self.alpha0 is not None and not self.alpha0 > 1.0:
            raise ValueError(
                f"alpha0 must exceed 1 (weights are sub-unit), got {self.alpha0}"
            )
        if self.theta is not None and not (self.theta > 0.0 and self.theta != 1.0):
            raise ValueError(f"theta hint must be positive and != 1, got {self.theta}")
        if self.q1 is not None and self.q1 == 0.0:
            raise ValueError("q1 hint must be nonzero")


@dataclass(frozen=True)
class InverseSolution:
    """Reconstructed matrix, ratio, and measure, with round-trip residuals."""

    jacobi: JacobiMatrix
    theta: float
    measure: SpectralMeasure
    residuals: dict[str, float]


def _log_ratio_product(pairs) -> float:
    """exp(sum log(mu/lam)) over (lam, mu) pairs; ratios must be positive."""
    logs = []
    for lam, mu in pairs:
        ratio = mu / lam
        if not ratio > 0.0:
            raise NonPositiveProduct(
                f"eigenvalue ratio {mu!r}/{lam!r} is not positive; pairing is corrupted"
            )
        logs.append(math.log(ratio))
    return math.exp(math.fsum(logs))


def recover_theta(pair: SpectrumPair) -> float:
    """theta = sqrt(prod mu_k / lambda_k) for zero-free spectra.

    Exact up to rounding at finite size: the product is the ratio of the
    two determinants, which the perturbation scales by exactly theta^2.
    """
    if pair.has_zero:
        raise ZeroInSpectrum(
            "zero is an eigenvalue: use recover_theta_zero_case with a hint"
        )
    theta_sq = _log_ratio_product(zip(pair.lambdas.values, pair.mus.values))
    return math.sqrt(theta_sq)


def _ratio_product_skipping_zero(pair: SpectrumPair) -> float:
    zp = pair.lambdas.zero_pos
    return _log_ratio_product(
        (lam, mu)
        for i, (lam, mu) in enumerate(zip(pair.lambdas.values, pair.mus.values))
        if i != zp
    )


def _theta_squared_zero_case(
    pair: SpectrumPair,
    q1: float | None,
    alpha0: float | None,
    theta: float | None,
) -> float:
    """Raw theta^2 from one hint, without the admissibility bound check."""
    hints = [h for h in (q1, alpha0, theta) if h is not None]
    if not hints:
        raise HintMissing("zero case needs exactly one of q1, alpha0, theta")
    if len(hints) > 1:
        raise ValueError("supply at most one of q1, alpha0, theta")
    if theta is not None:
        theta = float(theta)
        if not theta > 0.0:
            raise ValueError(f"theta must be positive, got {theta}")
        return theta * theta
    if alpha0 is not None:
        alpha0 = float(alpha0)
        if not alpha0 > 1.0:
            raise ValueError(f"alpha0 must exceed 1, got {alpha0}")
        prod_prime = _ratio_product_skipping_zero(pair)
        return (alpha0 * prod_prime - 1.0) / (alpha0 - 1.0)
    q1 = float(q1)
    if q1 == 0.0:
        raise ValueError("q1 hint must be nonzero")
    return 1.0 + math.fsum(pair.gaps()) / q1


def recover_theta_zero_case(
    pair: SpectrumPair,
    q1: float | None = None,
    alpha0: float | None = None,
    theta: float | None = None,
) -> float:
    """theta for spectra sharing the eigenvalue zero, from one auxiliary datum.

    With ``alpha0``: theta^2 = (alpha0 * P' - 1)/(alpha0 - 1) where P' is
    the ratio product excluding index 0.  With ``q1``: theta^2 =
    1 + sum(mu_k - lambda_k)/q1.  With ``theta``: pass-through.  In every
    case the result must land on the correct side of P' (strictly above
    it for a right shift on the positive half-line, strictly below for a
    left shift); BoundViolated signals inconsistent data.
    """
    if not pair.has_zero:
        raise ZeroInSpectrum("pair has no zero eigenvalue: use recover_theta")
    theta_sq = _theta_squared_zero_case(pair, q1, alpha0, theta)
    prod_prime = _ratio_product_skipping_zero(pair)
    if not (theta_sq > 0.0 and math.isfinite(theta_sq)):
        raise BoundViolated(
            f"recovered theta^2 = {theta_sq!r} is not a positive finite number"
        )
    if pair.shift is ShiftDirection.RIGHT_POS:
        if not theta_sq > prod_prime:
            raise BoundViolated(
                f"right-shifted pair requires theta^2 > {prod_prime!r}, got {theta_sq!r}"
            )
    else:
        if not theta_sq < prod_prime:
            raise BoundViolated(
                f"left-shifted pair requires theta^2 < {prod_prime!r}, got {theta_sq!r}"
            )
    return math.sqrt(theta_sq)


def compute_tau_candidates(pair: SpectrumPair, theta: float) -> tuple[float, ...]:
    """Raw weights from the interpolation-style product formula.

    No positivity or normalization enforcement; admissibility gates use
    this directly.  The zero-index weight (when present) comes last from
    tau_0 = (theta^2 - P')/(theta^2 - 1), never from 1 - sum.
    """
    theta = float(theta)
    theta_sq = theta * theta
    if theta_sq == 1.0:
        raise ValueError("theta = 1 does not define weights (degenerate pair)")
    lams = pair.lambdas.values
    mus = pair.mus.values
    n = pair.n
    zp = pair.lambdas.zero_pos
    taus: list[float] = [0.0] * n
    for i in range(n):
        if i == zp:
            continue
        lam_n = lams[i]
        sign = 1.0
        logs = []
        degenerate = False
        for k in range(n):
            if k == i:
                continue
            num = mus[k] - lam_n
            den = lams[k] - lam_n
            if num == 0.0:
                degenerate = True
                break
            if num < 0.0:
                sign = -sign
            if den < 0.0:
                sign = -sign
            logs.append(math.log(abs(num)) - math.log(abs(den)))
        if degenerate:
            taus[i] = 0.0
            continue
        front = (mus[i] - lam_n) / (lam_n * (theta_sq - 1.0))
        taus[i] = front * sign * math.exp(math.fsum(logs))
    if zp is not None:
        taus[zp] = (theta_sq - _ratio_product_skipping_zero(pair)) / (theta_sq - 1.0)
    return tuple(taus)


def recover_weights(pair: SpectrumPair, theta: float) -> SpectralMeasure:
    """Spectral measure of the unperturbed matrix from the paired spectra.

    All weights must come out strictly positive and sum to one;
    violations signal inconsistent input spectra rather than a numerical
    problem here.
    """
    taus = compute_tau_candidates(pair, theta)
    indices = pair.indices()
    for idx, tau in zip(indices, taus):
        if not tau > 0.0:
            raise NonPositiveWeight(
                f"weight at spectrum index {idx} is {tau!r}", index=idx
            )
    total = math.fsum(taus)
    if abs(total - 1.0) > _NORMALIZATION_TOL:
        raise NormalizationFailure(
            f"weights sum to {total!r}, off by {abs(total - 1.0):.3e} "
            f"(tolerance {_NORMALIZATION_TOL:g})"
        )
    return SpectralMeasure(tuple(zip(pair.lambdas.values, taus)))


def moments(measure: SpectralMeasure, count: int) -> tuple[float, ...]:
    """First ``count`` power moments s_j = sum_k x_k^j tau_k, j = 0..count-1."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    xs = measure.positions()
    ws = measure.weights()
    powers = [1.0] * len(xs)
    out = []
    for _ in range(count):
        out.append(math.fsum(p * w for p, w in zip(powers, ws)))
        powers = [p * x for p, x in zip(powers, xs)]
    return tuple(out)


def reconstruct_jacobi(
    measure: SpectralMeasure, breakdown_tolerance: float | None = None
) -> JacobiMatrix:
    """Recurrence coefficients of the measure's orthonormal polynomials.

    Discrete Stieltjes procedure in Lanczos form: starting from the
    square-root weight vector, each step orthogonalizes t * p_k against
    all previous polynomials (full reorthogonalization, applied twice)
    in the N-point weighted inner product.  The diagonal recurrence
    coefficients become q, the residual norms become b; the eigen-data of
    the result reproduce the measure.

    Raises BreakdownAtStep when a residual norm falls below the breakdown
    tolerance (default 1e-12 times the spectral diameter): the measure
    has fewer effective atoms than nominal.
    """
    if measure.n < 2:
        raise ValueError(f"need at least 2 atoms, got {measure.n}")
    x = np.asarray(measure.positions(), dtype=float)
    w = np.asarray(measure.weights(), dtype=float)
    n = x.size
    if breakdown_tolerance is None:
        breakdown_tolerance = 1e-12 * (x[-1] - x[0])
    basis = np.zeros((n, n))
    v = np.sqrt(w)
    v /= np.linalg.norm(v)
    v_prev = np.zeros(n)
    beta_prev = 0.0
    diag: list[float] = []
    off: list[float] = []
    for k in range(n):
        basis[:, k] = v
        u = x * v
        alpha = float(v @ u)
        diag.append(alpha)
        if k == n - 1:
            break
        r = u - alpha * v - beta_prev * v_prev
        active = basis[:, : k + 1]
        for _ in range(2):
            r -= active @ (active.T @ r)
        beta = float(np.linalg.norm(r))
        if beta <= breakdown_tolerance:
            raise BreakdownAtStep(
                f"recurrence broke down at step {k + 1}: residual norm {beta:.3e} "
                f"<= tolerance {breakdown_tolerance:.3e}",
                step=k + 1,
            )
        off.append(beta)
        v_prev = v
        v = r / beta
        beta_prev = beta
    return JacobiMatrix(tuple(diag), tuple(off))


def solve(inp: InverseInput, forward_tolerance: float = 1e-6) -> InverseSolution:
    """Full reconstruction with a forward round-trip check.

    Recovers theta, the weights, and the matrix, then re-computes both
    spectra from the result and compares them (scaled by the spectral
    radius) against the input; the corner entries are cross-checked
    against the measure moments via q1 = s1 and b1^2 = s2 - s1^2.
    """
    pair = inp.pair
    if pair.has_zero:
        theta = recover_theta_zero_case(pair, q1=inp.q1, alpha0=inp.alpha0, theta=inp.theta)
    else:
        theta = recover_theta(pair)
    measure = recover_weights(pair, theta)
    jrec = reconstruct_jacobi(measure)
    eig_orig = eigen(jrec)
    eig_pert = eigen(apply_theta(jrec, theta))
    scale = max(1.0, max(abs(v) for v in pair.lambdas.values + pair.mus.values))
    res_lam = max(
        abs(got - want)
        for got, want in zip(eig_orig.eigenvalues, pair.lambdas.values)
    ) / scale
    res_mu = max(
        abs(got - want)
        for got, want in zip(eig_pert.eigenvalues, pair.mus.values)
    ) / scale
    s0, s1, s2 = moments(measure, 3)
    variance = s2 - s1 * s1
    res_q1 = abs(jrec.q[0] - s1) / max(1.0, abs(s1))
    res_b1 = abs(jrec.b[0] ** 2 - variance) / max(1.0, abs(variance))
    residuals = {
        "lambda_spectrum": res_lam,
        "mu_spectrum": res_mu,
        "q1_vs_first_moment": res_q1,
        "b1sq_vs_second_moment": res_b1,
        "weight_normalization": abs(s0 - 1.0),
    }
    worst = max(residuals.values())
    if worst > forward_tolerance:
        raise ForwardCheckFailure(
            f"round-trip residual {worst:.3e} exceeds tolerance {forward_tolerance:g}",
            max_residual=worst,
        )
    return InverseSolution(jacobi=jrec, theta=theta, measure=measure, residuals=residuals)
