"""Spectral kernel for symmetric tridiagonal matrices.

Eigenvalues and first eigenvector components via an implicit-shift QL
iteration that accumulates only the first row of the rotation product:
O(N^2) total and the squared first components are exactly the reciprocal
normalizing constants.  On top of that: the two families of orthogonal
polynomials, normalizing constants, Weyl m-function evaluation, the
Riccati step linking m-functions of successive truncations, and the
leading moments that drive the large-|zeta| expansion
m(zeta) = -1/zeta - q1/zeta^2 - (b1^2 + q1^2)/zeta^3 + O(zeta^-4).

Everything here is a pure function of immutable inputs; callers may
evaluate over point grids in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import JacobiMatrix
from .errors import ConvergenceFailure, PoleProximity, ZeroMFunction

__all__ = [
    "EigenDecomposition",
    "PolynomialTable",
    "eigen",
    "poly_table",
    "normalizing_constants",
    "weyl_m",
    "riccati_next",
    "asymptotic_coeffs",
]

_EPS = 2.220446049250313e-16

#: Rescale checkpoint interval and magnitude trigger for the polynomial
#: recurrence; prevents overflow at large |zeta| without touching the
#: common desk-scale path.
_RESCALE_EVERY = 50
_RESCALE_TRIGGER = 1e150


@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted eigenvalues and first components of the unit eigenvectors.

    ``first_components[k]`` is u1(k) > 0, the first entry of the unit-norm
    eigenvector for ``eigenvalues[k]``; the squares sum to one (first row
    of an orthogonal matrix) and none vanishes.
    """

    eigenvalues: tuple[float, ...]
    first_components: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(float(v) for v in self.eigenvalues))
        object.__setattr__(self, "first_components", tuple(float(v) for v in self.first_components))
        if len(self.eigenvalues) != len(self.first_components):
            raise ValueError("eigenvalues and first components must align")
        for a, b in zip(self.eigenvalues, self.eigenvalues[1:]):
            if not a < b:
                raise ValueError(f"eigenvalues must be strictly increasing: {a!r} !< {b!r}")
        if any(u == 0.0 for u in self.first_components):
            raise ValueError("first eigenvector components must not vanish")
        total = math.fsum(u * u for u in self.first_components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"squared first components must sum to 1, got {total!r}")

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def weights(self) -> tuple[float, ...]:
        """Spectral weights u1(k)^2 (reciprocal normalizing constants)."""
        return tuple(u * u for u in self.first_components)


def eigen(j: JacobiMatrix, max_sweeps: int = 50) -> EigenDecomposition:
    """Full eigendecomposition data of a Jacobi matrix.

    Implicit-shift QL on the tridiagonal (d, e) pair, accumulating only
    the first row of the eigenvector matrix.  Eigenvalues come out sorted
    ascending and strictly separated (positive off-diagonals make the
    spectrum simple); first components carry the sign convention
    u1(k) > 0.

    Raises
    ------
    ConvergenceFailure : an eigenvalue failed to deflate within
        ``max_sweeps`` sweeps, or rounding collapsed the separation.  The
        exception's ``residual`` is the leftover off-diagonal magnitude,
        a backward-error bound for the reported values.
    """
    n = j.n
    d = list(j.q)
    e = list(j.b) + [0.0]
    z = [0.0] * n
    z[0] = 1.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceFailure(
                    f"eigenvalue {l} not converged after {max_sweeps} sweeps "
                    f"(leftover off-diagonal {abs(e[l]):.3e})",
                    residual=abs(e[l]),
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                h = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated early; skip the shift update
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * h
                p = s * r
                d[i + 1] = g + p
                g = c * r - h
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = sorted(range(n), key=d.__getitem__)
    values = [d[k] for k in order]
    firsts = [abs(z[k]) for k in order]
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise ConvergenceFailure(
                f"computed eigenvalues collapsed at {a!r}: input scale is pathological",
                residual=abs(b - a),
            )
    if any(u == 0.0 for u in firsts):
        raise ConvergenceFailure(
            "a first eigenvector component underflowed to zero", residual=0.0
        )
    return EigenDecomposition(tuple(values), tuple(firsts))


@dataclass(frozen=True)
class PolynomialTable:
    """Values of the first- and second-kind polynomials at one point.

    Entry k stores a scaled mantissa; the true value is
    ``first_kind[k] * exp(log_scale[k])`` (same for ``second_kind``).  The
    scale stays exactly 0 unless the recurrence ran long enough to risk
    overflow.  For every k >= 1 the pair satisfies
    ``b_k (P_{k-1} Q_k - P_k Q_{k-1}) = 1``.
    """

    point: complex | float
    first_kind: tuple
    second_kind: tuple
    log_scale: tuple[float, ...]

    def first(self, k: int):
        """Unscaled P_k; may overflow to inf if the true value is huge."""
        c = self.log_scale[k]
        return self.first_kind[k] if c == 0.0 else self.first_kind[k] * math.exp(c)

    def second(self, k: int):
        """Unscaled Q_k."""
        c = self.log_scale[k]
        return self.second_kind[k] if c == 0.0 else self.second_kind[k] * math.exp(c)

    def wronskian_values(self, j: JacobiMatrix) -> tuple:
        """b_k (P_{k-1} Q_k - P_k Q_{k-1}) for k = 1..n; each should be 1."""
        out = []
        for k in range(1, len(self.first_kind)):
            w = j.b[k - 1] * (
                self.first_kind[k - 1] * self.second_kind[k]
                - self.first_kind[k] * self.second_kind[k - 1]
            )
            c = self.log_scale[k - 1] + self.log_scale[k]
            out.append(w if c == 0.0 else w * math.exp(c))
        return tuple(out)


def poly_table(j: JacobiMatrix, zeta: complex | float, n: int) -> PolynomialTable:
    """Evaluate P_0..P_n and Q_0..Q_n at ``zeta`` by the three-term recurrence.

    P_0 = 1, b_1 P_1 = (zeta - q_1) P_0; Q_0 = 0, Q_1 = 1/b_1; then
    b_k P_k = (zeta - q_k) P_{k-1} - b_{k-1} P_{k-2} and the same for Q.
    Requires 0 <= n <= N - 1 (step k consumes q_k and b_k).
    """
    if not 0 <= n <= j.n - 1:
        raise ValueError(f"polynomial order must be in [0, {j.n - 1}], got {n}")
    if isinstance(zeta, complex):
        one = 1.0 + 0.0j
    else:
        zeta = float(zeta)
        one = 1.0
    p_vals = [one]
    q_vals = [one * 0]
    logs = [0.0]
    if n >= 1:
        p_vals.append((zeta - j.q[0]) / j.b[0])
        q_vals.append(one / j.b[0])
        logs.append(0.0)
    cum = 0.0
    for k in range(2, n + 1):
        qk = j.q[k - 1]
        bk = j.b[k - 1]
        bk_prev = j.b[k - 2]
        p_vals.append(((zeta - qk) * p_vals[-1] - bk_prev * p_vals[-2]) / bk)
        q_vals.append(((zeta - qk) * q_vals[-1] - bk_prev * q_vals[-2]) / bk)
        if k % _RESCALE_EVERY == 0:
            mag = max(abs(p_vals[-1]), abs(p_vals[-2]), abs(q_vals[-1]), abs(q_vals[-2]))
            if mag > _RESCALE_TRIGGER:
                inv = 1.0 / mag
                p_vals[-1] *= inv
                p_vals[-2] *= inv
                q_vals[-1] *= inv
                q_vals[-2] *= inv
                cum += math.log(mag)
                logs[-1] = cum
        logs.append(cum)
    return PolynomialTable(zeta, tuple(p_vals), tuple(q_vals), tuple(logs))


def normalizing_constants(
    j: JacobiMatrix, decomposition: EigenDecomposition | None = None
) -> tuple[float, ...]:
    """Squared norms alpha_k = sum_{i<N} P_i(lambda_k)^2, one per eigenvalue.

    Finite-dimensional identity: alpha_k = 1 / u1(k)^2 from :func:`eigen`
    (the eigenvector for lambda_k is proportional to the P-values there).
    """
    eig = decomposition if decomposition is not None else eigen(j)
    out = []
    for lam in eig.eigenvalues:
        table = poly_table(j, lam, j.n - 1)
        out.append(
            math.fsum(
                v * v if c == 0.0 else v * v * math.exp(2.0 * c)
                for v, c in zip(table.first_kind, table.log_scale)
            )
        )
    return tuple(out)


def _local_gap(values: tuple[float, ...], k: int) -> float:
    """Distance from values[k] to its nearest neighbour (scale for N=1)."""
    n = len(values)
    if n == 1:
        return max(1.0, abs(values[0]))
    gaps = []
    if k > 0:
        gaps.append(values[k] - values[k - 1])
    if k + 1 < n:
        gaps.append(values[k + 1] - values[k])
    return min(gaps)


def weyl_m(
    j: JacobiMatrix,
    zeta: complex | float,
    decomposition: EigenDecomposition | None = None,
    pole_tolerance_factor: float = 1e-8,
):
    """Weyl m-function m(zeta) = <e1, (J - zeta)^{-1} e1>.

    Evaluated in partial-fraction form sum_k u1(k)^2 / (lambda_k - zeta).
    Herglotz: Im m / Im zeta > 0 off the real axis.  Returns a complex for
    complex input, a float for real input.

    Raises PoleProximity when ``zeta`` is closer to an eigenvalue than
    ``pole_tolerance_factor`` times the local spectral gap.
    """
    eig = decomposition if decomposition is not None else eigen(j)
    zc = complex(zeta)
    dists = [abs(zc - lam) for lam in eig.eigenvalues]
    k_min = min(range(len(dists)), key=dists.__getitem__)
    tol = pole_tolerance_factor * _local_gap(eig.eigenvalues, k_min)
    if dists[k_min] < tol:
        raise PoleProximity(
            f"point {zeta!r} is within {dists[k_min]:.3e} of eigenvalue "
            f"{eig.eigenvalues[k_min]!r} (tolerance {tol:.3e})"
        )
    terms = [
        u * u / (lam - zc)
        for lam, u in zip(eig.eigenvalues, eig.first_components)
    ]
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    if isinstance(zeta, complex):
        return value
    return value.real


def riccati_next(
    m_prev: complex | float,
    q_n: float,
    b_n: float,
    zeta: complex | float,
    zero_tolerance: float = 0.0,
):
    """One Riccati step: m_n = (q_n - zeta - 1/m_{n-1}) / b_n^2.

    Links the m-function of a truncation to the next one (dropping one
    leading row and column).  ``m_prev`` at a zero of the previous
    m-function is a declared singularity.
    """
    if not b_n > 0.0:
        raise ValueError(f"b_n must be positive, got {b_n}")
    if m_prev == 0 or abs(m_prev) <= zero_tolerance:
        raise ZeroMFunction(f"previous m-function value {m_prev!r} is (numerically) zero")
    inv = 1.0 / m_prev
    if isinstance(inv, complex):
        if not (math.isfinite(inv.real) and math.isfinite(inv.imag)):
            raise ZeroMFunction(f"1/m overflowed for m = {m_prev!r}")
    elif not math.isfinite(inv):
        raise ZeroMFunction(f"1/m overflowed for m = {m_prev!r}")
    return (q_n - zeta - inv) / (b_n * b_n)


def asymptotic_coeffs(
    j: JacobiMatrix, decomposition: EigenDecomposition | None = None
) -> tuple[float, float, float]:
    """Leading spectral moments (s0, s1, s2) = (1, q1, q1^2 + b1^2).

    Computed from the eigen-data as sum u^2, sum lambda u^2,
    sum lambda^2 u^2; these are the coefficients of -1/zeta, -1/zeta^2,
    -1/zeta^3 in the large-|zeta| expansion of the m-function.  The exact
    identities with the matrix corner entries are verified here and a
    violation (possible only through eigensolver trouble) raises
    ConvergenceFailure.
    """
    eig = decomposition if decomposition is not None else eigen(j)
    w = eig.weights()
    s0 = math.fsum(w)
    s1 = math.fsum(lam * wk for lam, wk in zip(eig.eigenvalues, w))
    s2 = math.fsum(lam * lam * wk for lam, wk in zip(eig.eigenvalues, w))
    q1 = j.q[0]
    b1 = j.b[0]
    checks = (
        (s0, 1.0, 1e-12),
        (s1, q1, 1e-10 * max(1.0, abs(q1))),
        (s2, q1 * q1 + b1 * b1, 1e-10 * max(1.0, q1 * q1 + b1 * b1)),
    )
    for got, want, tol in checks:
        if abs(got - want) > tol:
            raise ConvergenceFailure(
                f"moment identity violated: {got!r} vs {want!r} (tolerance {tol:g})",
                residual=abs(got - want),
            )
    return (s0, s1, s2)
