"""Inverse polynomial images ``K = T_N^{-1}([-1, 1])`` (T-sets).

A real polynomial ``T_N`` of degree ``N >= 2`` is admissible when it has ``N``
simple real zeros and ``|T_N(y)| >= 1`` at each of its ``N - 1`` critical
points. Its preimage of ``[-1, 1]`` is a union of at most ``N`` intervals with
known capacity ``(2|c|)^(-1/N)``, ``c`` the leading coefficient, and the
orthonormal polynomials of ``mu_K`` at degrees ``l N`` are
``sqrt(2) * cos(l * arccos(T_N(x)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    NotAdmissible,
    NotConverged,
    RationalityViolation,
    RootFindFailure,
    Theorem2cViolation,
    InputError,
)
from .intervals import IntervalUnion, normalize_union
from .jacobi import JacobiData
from .potential import PotentialData

CRIT_TOL = 1e-12
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class AdmissiblePolynomial:
    coeffs: tuple[float, ...]  # ascending
    zeros: tuple[float, ...]
    crit_points: tuple[float, ...]
    crit_values: tuple[float, ...]  # |T_N(y_i)|

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def __call__(self, x):
        return Polynomial(self.coeffs)(x)


@dataclass(frozen=True)
class TSetData:
    poly: AdmissiblePolynomial
    set: IntervalUnion
    exact_log_cap: float

    @property
    def N(self) -> int:
        return self.poly.degree


def _bisect_monotone(T: Polynomial, target: float, lo: float, hi: float) -> float:
    f_lo = T(lo) - target
    f_hi = T(hi) - target
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise RootFindFailure(f"T_N - {target} does not change sign on [{lo}, {hi}]")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = T(mid) - target
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    if hi - lo > 1e-12 * max(1.0, abs(lo)):
        raise RootFindFailure(f"bracket [{lo}, {hi}] did not shrink to 1e-12")
    return 0.5 * (lo + hi)


def preimage_bands(coeffs: Sequence[float]) -> TSetData:
    """Validate admissibility of ``T_N`` (ascending coefficients) and build its T-set."""
    coeffs = tuple(float(c) for c in coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs = coeffs[:-1]
    N = len(coeffs) - 1
    if N < 2:
        raise InputError("an admissible polynomial needs degree >= 2")
    T = Polynomial(coeffs)
    dT = T.deriv()
    crit = dT.roots()
    if np.any(np.abs(np.imag(crit)) > 1e-9 * max(1.0, np.max(np.abs(crit)))):
        raise NotAdmissible("T_N' has non-real roots, so T_N has non-real or multiple zeros")
    crit = np.sort(np.real(crit))
    # snap each critical point to the sign change of T_N' nearby
    scale = max(1.0, float(np.max(np.abs(crit))))
    polished = []
    for y in crit:
        h = 1e-7 * scale
        try:
            polished.append(_bisect_monotone(dT, 0.0, y - h, y + h))
        except RootFindFailure:
            polished.append(float(y))
    crit = np.array(polished)
    if np.any(np.diff(crit) <= 0):
        raise NotAdmissible("T_N' has a multiple root")
    values = T(crit)
    if np.any(np.abs(values) < 1.0 - CRIT_TOL):
        i = int(np.argmin(np.abs(values)))
        raise NotAdmissible(f"|T_N(y)| = {abs(values[i]):.6g} < 1 at critical point y = {crit[i]:.6g}")
    if np.any(values[:-1] * values[1:] >= 0):
        raise NotAdmissible("consecutive critical values do not alternate in sign: fewer than N real zeros")

    # |T_N(x)| > 1 outside |x| < bound (Cauchy bound for T_N -/+ 1)
    c = coeffs[-1]
    bound = 1.0 + max(abs(v) + (1.0 if k == 0 else 0.0) for k, v in enumerate(coeffs[:-1])) / abs(c)
    breaks = [-bound] + crit.tolist() + [bound]
    zeros, pieces = [], []
    for k in range(N):
        lo, hi = breaks[k], breaks[k + 1]
        try:
            zeros.append(_bisect_monotone(T, 0.0, lo, hi))
        except RootFindFailure:
            raise NotAdmissible(f"T_N has no real zero on [{lo:.6g}, {hi:.6g}]") from None
        ends = []
        for target in (-1.0, 1.0):
            # a critical value of exactly +-1 (up to CRIT_TOL) is its own crossing
            if k > 0 and abs(values[k - 1] - target) <= CRIT_TOL:
                ends.append(lo)
            elif k < N - 1 and abs(values[k] - target) <= CRIT_TOL:
                ends.append(hi)
            else:
                ends.append(_bisect_monotone(T, target, lo, hi))
        pieces.append((min(ends), max(ends)))
    U = normalize_union(pieces)
    for e in U.endpoints:
        if abs(abs(T(e)) - 1.0) > 1e-10:
            raise RootFindFailure(f"band endpoint {e} has |T_N| = {abs(T(e))!r}")
    poly = AdmissiblePolynomial(coeffs, tuple(zeros), tuple(crit.tolist()), tuple(np.abs(values).tolist()))
    return TSetData(poly, U, -math.log(2.0 * abs(c)) / N)


def band_mass_rationality_check(T: TSetData, P: PotentialData, tol: float = 1e-6) -> list[Fraction]:
    """Each band of a T-set carries mass ``l / N``; return those fractions."""
    N = T.N
    out = []
    for j, m in enumerate(P.band_mass):
        l = round(m * N)
        if abs(m - l / N) > tol or l < 1:
            raise RationalityViolation(f"band {j} mass {m!r} is not within {tol} of a multiple of 1/{N}")
        out.append(Fraction(l, N))
    return out


def exact_widom_at_multiples(l: int) -> float:
    """``W_{lN}(mu_K)`` on any T-set, for every ``l >= 1``."""
    return math.sqrt(2.0)


def exact_orthonormal_at_multiples(T: TSetData, l: int, x):
    """``p_{lN}(x; mu_K) = sqrt(2) S_l(T_N(x))`` with ``S_l`` the Chebyshev polynomial of the first kind."""
    if l < 1:
        raise InputError("l must be >= 1")
    y = np.asarray(T.poly(x), dtype=float)
    inside = np.abs(y) <= 1.0 + CLAMP_TOL
    with np.errstate(invalid="ignore"):
        cos_branch = np.cos(l * np.arccos(np.clip(y, -1.0, 1.0)))
        cosh_branch = np.cosh(l * np.arccosh(np.maximum(np.abs(y), 1.0))) * np.sign(y) ** l
    out = math.sqrt(2.0) * np.where(inside, cos_branch, cosh_branch)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PeriodicLimit:
    a_prime: np.ndarray
    deviation: float  # max |a_{kN+r} - a'_r| over the averaging window


def estimate_periodic_limit(J: JacobiData, N: int, window: int = 4, tol: float = 1e-3) -> PeriodicLimit:
    """Average ``a_{kN+r}`` over the last ``window`` full periods."""
    if window < 4:
        raise InputError("window must be >= 4")
    if J.n_max < 3 * window * N:
        raise InputError(f"n_max={J.n_max} < 3 * window * N = {3 * window * N}")
    periods = J.n_max // N
    block = J.a[(periods - window) * N : periods * N].reshape(window, N)
    a_prime = block.mean(axis=0)
    deviation = float(np.max(np.abs(block - a_prime)))
    if deviation > tol:
        raise NotConverged(f"recurrence tail deviates by {deviation:.3e} from period {N}")
    return PeriodicLimit(a_prime, deviation)


def periodic_partial_products(a_prime: Sequence[float], exact_log_cap: float, tol: float = 1e-3) -> np.ndarray:
    """``r_l = a'_1 ... a'_l / Cap^l`` for ``l = 1..N``; the minimum must be ``r_N = 1``."""
    a_prime = np.asarray(a_prime, dtype=float)
    l = np.arange(1, a_prime.size + 1)
    r = np.exp(np.cumsum(np.log(a_prime)) - l * exact_log_cap)
    if abs(r[-1] - 1.0) > tol:
        raise Theorem2cViolation(f"a'_1...a'_N / Cap^N = {r[-1]!r}, expected 1")
    if np.any(r < 1.0 - tol):
        raise Theorem2cViolation(f"partial product ratio {r.min()!r} below 1")
    if abs(r.min() - 1.0) > tol:
        raise Theorem2cViolation(f"minimum partial product ratio {r.min()!r} differs from 1")
    return r
