"""Core domain types: Jacobi matrices, indexed spectra, spectrum pairs.

A finite Jacobi matrix is symmetric tridiagonal with strictly positive
off-diagonal entries, so its spectrum is simple.  Perturbing the first
mass of the underlying mass-spring chain by the ratio theta^2 = m1/(m1+dm)
multiplies the (1,1) entry by theta^2 and the (1,2)/(2,1) entries by theta;
the two spectra of the original and perturbed matrices interlace on each
half-line with mirrored shift directions, and eigenvalue zero (if any) is
shared by both.

Spectra are enumerated by signed integer indices: negative eigenvalues get
indices ..., -2, -1, a zero eigenvalue gets index 0, positive eigenvalues
get 1, 2, ....  Index 0 is absent when zero is not an eigenvalue.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DuplicateValues,
    InconsistentShift,
    MultipleZeros,
    NotInterlacing,
    ZeroMismatch,
)

__all__ = [
    "JacobiMatrix",
    "IndexedSpectrum",
    "ShiftDirection",
    "SpectrumPair",
    "SpectralMeasure",
    "apply_theta",
    "enumerate_spectrum",
    "pair_spectra",
    "detect_shift",
    "default_zero_tolerance",
    "default_tie_tolerance",
]

#: Base factor for the default zero-classification tolerance.  The actual
#: tolerance scales with the spectral radius because eigensolver backward
#: error scales with the matrix norm.  Overridable via the JACOBI_TOLERANCE
#: environment variable.
BASE_TOLERANCE = 1e-10


def _env_tolerance() -> float | None:
    raw = os.environ.get("JACOBI_TOLERANCE")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"JACOBI_TOLERANCE is not a number: {raw!r}") from exc
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"JACOBI_TOLERANCE must be a positive finite number, got {raw!r}")
    return value


def default_zero_tolerance(values: Sequence[float]) -> float:
    """Zero-classification tolerance scaled to the data.

    Returns ``t * max(1, max|v|)`` where ``t`` is ``BASE_TOLERANCE`` or the
    JACOBI_TOLERANCE environment override.
    """
    base = _env_tolerance()
    if base is None:
        base = BASE_TOLERANCE
    radius = max((abs(v) for v in values), default=0.0)
    return base * max(1.0, radius)


def default_tie_tolerance(values: Sequence[float]) -> float:
    """Resolution floor for interlacing checks on computed eigenvalues.

    Eigenvalues carry absolute errors of order eps * norm, so a true gap
    below that can show up with the wrong sign.  Inversions no larger
    than this tolerance are treated as resolution noise rather than
    pattern violations.  One hundredth of the zero-tolerance base (so the
    JACOBI_TOLERANCE override scales both consistently).
    """
    base = _env_tolerance()
    if base is None:
        base = BASE_TOLERANCE
    radius = max((abs(v) for v in values), default=0.0)
    return 0.01 * base * max(1.0, radius)


def _as_float_tuple(xs: Sequence[float], name: str) -> tuple[float, ...]:
    out = tuple(float(x) for x in xs)
    for x in out:
        if not math.isfinite(x):
            raise ValueError(f"{name} entries must be finite, got {x!r}")
    return out


@dataclass(frozen=True)
class JacobiMatrix:
    """Finite symmetric tridiagonal matrix with positive off-diagonal.

    Parameters
    ----------
    q : diagonal entries q_1..q_N (real).
    b : off-diagonal entries b_1..b_{N-1} (strictly positive).
    """

    q: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", _as_float_tuple(self.q, "q"))
        object.__setattr__(self, "b", _as_float_tuple(self.b, "b"))
        if len(self.q) < 2:
            raise ValueError(f"need N >= 2 diagonal entries, got {len(self.q)}")
        if len(self.b) != len(self.q) - 1:
            raise ValueError(
                f"off-diagonal length must be N-1 = {len(self.q) - 1}, got {len(self.b)}"
            )
        for j, bj in enumerate(self.b, start=1):
            if not bj > 0.0:
                raise ValueError(f"b_{j} must be strictly positive, got {bj}")

    @property
    def n(self) -> int:
        return len(self.q)

    def to_dense(self) -> np.ndarray:
        """Dense symmetric ndarray, mainly for tests and oracles."""
        m = np.diag(np.asarray(self.q, dtype=float))
        off = np.asarray(self.b, dtype=float)
        m += np.diag(off, 1) + np.diag(off, -1)
        return m

    def truncated(self, drop: int) -> "JacobiMatrix":
        """Matrix with the first ``drop`` rows and columns removed."""
        if not 0 <= drop <= self.n - 2:
            raise ValueError(f"can drop between 0 and {self.n - 2} rows, got {drop}")
        return JacobiMatrix(self.q[drop:], self.b[drop:])


def apply_theta(j: JacobiMatrix, theta: float) -> JacobiMatrix:
    """First-mass perturbation: q_1 -> theta^2 q_1, b_1 -> theta b_1.

    Equivalent to the rank-two update
    ``J + q_1 (theta^2 - 1) e1 e1^T + b_1 (theta - 1)(e1 e2^T + e2 e1^T)``.
    theta = 1 is the identity.
    """
    theta = float(theta)
    if not (theta > 0.0 and math.isfinite(theta)):
        raise ValueError(f"theta must be a positive finite number, got {theta}")
    q = (theta * theta * j.q[0],) + j.q[1:]
    b = (theta * j.b[0],) + j.b[1:]
    return JacobiMatrix(q, b)


@dataclass(frozen=True)
class IndexedSpectrum:
    """Strictly increasing eigenvalues with signed-index enumeration.

    ``values`` is ascending; ``zero_pos`` is the position of the (single)
    eigenvalue classified as zero, or None when zero is not an eigenvalue.
    The index set is a contiguous integer range that contains 0 exactly
    when ``zero_pos`` is set and otherwise jumps from -1 to 1.
    """

    values: tuple[float, ...]
    zero_pos: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_tuple(self.values, "spectrum"))
        if self.zero_pos is not None:
            object.__setattr__(self, "zero_pos", int(self.zero_pos))
        values = self.values
        if not values:
            raise ValueError("spectrum must contain at least one value")
        for a, b in zip(values, values[1:]):
            if not a < b:
                raise DuplicateValues(f"values must be strictly increasing: {a!r} !< {b!r}")
        zp = self.zero_pos
        if zp is not None and not 0 <= zp < len(values):
            raise ValueError(f"zero_pos {zp} out of range for {len(values)} values")
        neg = self.neg_count
        for i, v in enumerate(values):
            if i == zp:
                continue
            if i < neg and not v < 0.0:
                raise ValueError(f"value at negative index must be < 0, got {v}")
            if i >= neg + (1 if zp is not None else 0) and not v > 0.0:
                raise ValueError(f"value at positive index must be > 0, got {v}")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def has_zero(self) -> bool:
        return self.zero_pos is not None

    @property
    def neg_count(self) -> int:
        if self.zero_pos is not None:
            return self.zero_pos
        return sum(1 for v in self.values if v < 0.0)

    @property
    def pos_count(self) -> int:
        return self.n - self.neg_count - (1 if self.has_zero else 0)

    def indices(self) -> tuple[int, ...]:
        neg = self.neg_count
        out = list(range(-neg, 0))
        if self.has_zero:
            out.append(0)
        out.extend(range(1, self.pos_count + 1))
        return tuple(out)

    def items(self) -> Iterator[tuple[int, float]]:
        return zip(self.indices(), self.values)

    def position_of(self, index: int) -> int:
        neg = self.neg_count
        if index == 0:
            if not self.has_zero:
                raise KeyError("index 0 absent: zero is not an eigenvalue")
            return neg
        pos = index + neg if index < 0 else neg + (1 if self.has_zero else 0) + index - 1
        if not 0 <= pos < self.n or (index < 0) != (pos < neg):
            raise KeyError(f"index {index} not in the enumeration range")
        return pos

    def value(self, index: int) -> float:
        return self.values[self.position_of(index)]

    def negatives(self) -> tuple[float, ...]:
        return self.values[: self.neg_count]

    def positives(self) -> tuple[float, ...]:
        return self.values[self.neg_count + (1 if self.has_zero else 0):]


def enumerate_spectrum(
    values: Sequence[float], zero_tolerance: float | None = None
) -> IndexedSpectrum:
    """Assign signed indices to a strictly increasing list of eigenvalues.

    Values with ``|v| <= zero_tolerance`` are classified as the zero
    eigenvalue (at most one allowed).  Reading the result back in index
    order reproduces the input exactly.

    Raises
    ------
    DuplicateValues : input not strictly increasing.
    MultipleZeros : two values fall inside the zero tolerance.
    """
    vals = _as_float_tuple(values, "spectrum")
    if not vals:
        raise ValueError("spectrum must contain at least one value")
    for a, b in zip(vals, vals[1:]):
        if not a < b:
            raise DuplicateValues(f"values must be strictly increasing: {a!r} !< {b!r}")
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(vals)
    zero_positions = [i for i, v in enumerate(vals) if abs(v) <= zero_tolerance]
    if len(zero_positions) > 1:
        raise MultipleZeros(
            f"{len(zero_positions)} values within zero tolerance {zero_tolerance:g}: "
            f"{[vals[i] for i in zero_positions]}"
        )
    zero_pos = zero_positions[0] if zero_positions else None
    return IndexedSpectrum(vals, zero_pos)


class ShiftDirection(Enum):
    """Which way the perturbed spectrum moves relative to the original.

    RIGHT_POS (theta > 1): mu right of lambda on the positive half-line,
    left of it on the negative half-line.  LEFT_POS (theta < 1) is the
    mirror image.
    """

    RIGHT_POS = "RIGHT_POS"
    LEFT_POS = "LEFT_POS"


def _half_line_direction(
    lams: Sequence[float], mus: Sequence[float], positive_axis: bool, tie_tolerance: float
) -> ShiftDirection | None:
    """Interlacing direction on one half-line, or None when undetermined.

    Both inputs ascending, same sign, equal length.  The direction comes
    from the largest |mu_k - lambda_k| gap (the most reliable signal in
    floating data); the full alternation pattern is then verified with
    ``tie_tolerance`` of slack, so sub-resolution inversions pass while
    genuine violations raise NotInterlacing with the offending values.
    Returns None when the half-line is empty or every gap is below the
    tolerance.
    """
    p = len(lams)
    if p != len(mus):
        raise NotInterlacing(
            f"unequal counts on the {'positive' if positive_axis else 'negative'} "
            f"half-line: {p} vs {len(mus)}"
        )
    if p == 0:
        return None
    gaps = [mu - lam for lam, mu in zip(lams, mus)]
    k_max = max(range(p), key=lambda k: abs(gaps[k]))
    if abs(gaps[k_max]) <= tie_tolerance:
        return None
    mu_right = gaps[k_max] > 0.0
    first, second = (lams, mus) if mu_right else (mus, lams)
    # required pattern: first_k < second_k < first_{k+1}, up to tie slack
    for k in range(p):
        if not first[k] <= second[k] + tie_tolerance:
            raise NotInterlacing(
                f"interlacing violated: {first[k]!r} !< {second[k]!r}",
                violation=(first[k], second[k]),
            )
        if k + 1 < p and not second[k] <= first[k + 1] + tie_tolerance:
            raise NotInterlacing(
                "interlacing violated: two values of one spectrum inside "
                f"({first[k]!r}, {first[k + 1]!r})",
                violation=(first[k], second[k], first[k + 1]),
            )
    if positive_axis:
        return ShiftDirection.RIGHT_POS if mu_right else ShiftDirection.LEFT_POS
    return ShiftDirection.LEFT_POS if mu_right else ShiftDirection.RIGHT_POS


def detect_shift(
    lams: IndexedSpectrum,
    mus: IndexedSpectrum,
    tie_tolerance: float | None = None,
) -> ShiftDirection:
    """Classify the mirrored interlacing pattern of two indexed spectra.

    Raises NotInterlacing / InconsistentShift / ZeroMismatch when the pair
    is not admissible.
    """
    if lams.has_zero != mus.has_zero:
        raise ZeroMismatch("zero is an eigenvalue of exactly one spectrum")
    if lams.n != mus.n:
        raise NotInterlacing(f"spectra have different sizes: {lams.n} vs {mus.n}")
    if tie_tolerance is None:
        tie_tolerance = default_tie_tolerance(lams.values + mus.values)
    dir_pos = _half_line_direction(
        lams.positives(), mus.positives(), positive_axis=True, tie_tolerance=tie_tolerance
    )
    dir_neg = _half_line_direction(
        lams.negatives(), mus.negatives(), positive_axis=False, tie_tolerance=tie_tolerance
    )
    if dir_pos is None and dir_neg is None:
        raise NotInterlacing(
            "every gap between the spectra is below the tie tolerance: "
            "shift direction undefined"
        )
    if dir_pos is not None and dir_neg is not None and dir_pos is not dir_neg:
        raise InconsistentShift(
            f"half-line patterns are not mirrored: {dir_pos.value} on the positive "
            f"axis vs {dir_neg.value} implied by the negative axis"
        )
    return dir_pos if dir_pos is not None else dir_neg  # type: ignore[return-value]


@dataclass(frozen=True)
class SpectrumPair:
    """Two interlacing indexed spectra with their shift classification.

    ``lambdas`` is the unperturbed spectrum, ``mus`` the perturbed one.
    Both are indexed over the same signed range; construction re-validates
    the interlacing pattern against ``shift``.  ``tie_tolerance`` is the
    resolution floor the validation used: per-index gaps no larger than
    it are allowed to come out with the wrong sign (computed eigenvalues
    cannot order gaps below their own rounding error).
    """

    lambdas: IndexedSpectrum
    mus: IndexedSpectrum
    shift: ShiftDirection
    tie_tolerance: float | None = None

    def __post_init__(self):
        if self.tie_tolerance is None:
            object.__setattr__(
                self,
                "tie_tolerance",
                default_tie_tolerance(self.lambdas.values + self.mus.values),
            )
        detected = detect_shift(self.lambdas, self.mus, self.tie_tolerance)
        if detected is not self.shift:
            raise InconsistentShift(
                f"declared shift {self.shift.value} but the data interlace as {detected.value}"
            )

    @property
    def n(self) -> int:
        return self.lambdas.n

    @property
    def has_zero(self) -> bool:
        return self.lambdas.has_zero

    def indices(self) -> tuple[int, ...]:
        return self.lambdas.indices()

    def gaps(self) -> tuple[float, ...]:
        """Per-index differences mu_k - lambda_k."""
        return tuple(m - l for l, m in zip(self.lambdas.values, self.mus.values))


def pair_spectra(
    lams: IndexedSpectrum,
    mus_raw: Sequence[float],
    zero_tolerance: float | None = None,
    tie_tolerance: float | None = None,
) -> SpectrumPair:
    """Index a second spectrum against ``lams`` and classify the shift.

    ``mus_raw`` must be strictly increasing and interlace with ``lams`` in
    one of the two mirrored patterns; zero must belong to both spectra or
    neither.
    """
    all_values = tuple(lams.values) + tuple(float(v) for v in mus_raw)
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(all_values)
    if tie_tolerance is None:
        tie_tolerance = default_tie_tolerance(all_values)
    mus = enumerate_spectrum(mus_raw, zero_tolerance)
    shift = detect_shift(lams, mus, tie_tolerance)
    return SpectrumPair(lams, mus, shift, tie_tolerance)


@dataclass(frozen=True)
class SpectralMeasure:
    """Discrete probability measure: atoms at strictly increasing points.

    Weights are strictly positive and sum to one (validated loosely here;
    reconstruction routines enforce the tight tolerance).
    """

    atoms: tuple[tuple[float, float], ...]

    _NORM_SLACK = 1e-6

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("measure must have at least one atom")
        for (x0, _), (x1, _) in zip(atoms, atoms[1:]):
            if not x0 < x1:
                raise ValueError(f"atom positions must be strictly increasing: {x0} !< {x1}")
        for x, w in atoms:
            if not (math.isfinite(x) and math.isfinite(w)):
                raise ValueError("atoms must be finite")
            if not w > 0.0:
                raise ValueError(f"weight at {x} must be strictly positive, got {w}")
        total = math.fsum(w for _, w in atoms)
        if abs(total - 1.0) > self._NORM_SLACK:
            raise ValueError(f"weights must sum to 1, got {total!r}")

    @property
    def n(self) -> int:
        return len(self.atoms)

    def positions(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.atoms)

    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.atoms)
