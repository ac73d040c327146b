"""Chebyshev (monic minimax) polynomials on interval unions by Remez exchange.

The monic ``T_{n,K}`` minimizing ``max_K |x^n + ...|`` equioscillates on at
least ``n + 1`` points of ``K``. The multiple-exchange Remez iteration here
solves the levelled alternation system on a reference of ``n + 1`` points,
replaces the whole reference by alternating extrema of the new error on
``K``, and stops when the levelled error matches the sup norm.

Internally everything lives in the hull variable ``u in [-1, 1]``
(``x = mid + half * u``), so ``T(x) = half^n * e(u)`` with ``e`` monic in
``u``. The levelled polynomial is evaluated in barycentric form on the
reference itself, which stays accurate to rounding for degrees where
monomial or hull-Chebyshev coefficients lose many digits on unions.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial import chebyshev as C

from .errors import InputError, InvariantViolation, OrderingViolation, ReferenceCollapse, StalledExchange
from .intervals import IntervalUnion
from .jacobi import WidomSeries

log = logging.getLogger(__name__)

MAX_DEGREE = 40


@dataclass(frozen=True)
class ChebyshevResult:
    n: int
    coeffs: np.ndarray  # monic, ascending powers of x
    sup_norm: float
    log_sup: float
    reference: np.ndarray  # n + 1 alternation points
    log_m: float  # log M_{n,K} = log sup_norm - n log Cap(K)
    cert_lower_bound: float  # de la Vallee Poussin lower bound on the minimax value
    iterations: int

    @property
    def m(self) -> float:
        return math.exp(self.log_m)

    @property
    def cert_gap(self) -> float:
        """Relative distance between achieved sup norm and certified lower bound."""
        return 1.0 - self.cert_lower_bound / self.sup_norm


class _Levelled:
    """Monic degree-``n`` polynomial with ``e(u_i) = (-1)^i h`` on ``n + 1`` nodes.

    Held in barycentric form: ``e`` is the degree-``n`` interpolant of the
    values ``h s_i`` and monicity fixes ``h = 1 / sum_i s_i w_i``. For sorted
    nodes the weights ``w_i`` alternate in sign like ``s_i``, so the sum has no
    cancellation. Values are reported divided by ``|h|``.
    """

    def __init__(self, ref: np.ndarray) -> None:
        n = ref.size - 1
        diff = ref[:, None] - ref[None, :]
        np.fill_diagonal(diff, 1.0)
        logw = -np.sum(np.log(np.abs(diff)), axis=1)
        sign_w = np.prod(np.sign(diff), axis=1)
        shift = logw.max()
        w = sign_w * np.exp(logw - shift)
        s = (-1.0) ** np.arange(n + 1)
        total = float(np.sum(s * w))
        self.ref = ref
        self.w = w
        self.sign_h = math.copysign(1.0, total)
        self.log_h = -shift - math.log(abs(total))
        self.a = s * w * self.sign_h  # numerator weights for e / |h|

    def _sums(self, u: np.ndarray):
        d = u[:, None] - self.ref[None, :]
        hit = d == 0.0
        d = np.where(hit, 1.0, d)
        inv = 1.0 / d
        num, den = inv @ self.a, inv @ self.w
        dnum, dden = -(inv**2) @ self.a, -(inv**2) @ self.w
        return num, den, dnum, dden, hit

    def value(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        num, den, _, _, hit = self._sums(u)
        out = num / den
        rows, cols = np.nonzero(hit)
        out[rows] = self.a[cols] / self.w[cols]
        return out

    def slope(self, u: np.ndarray) -> np.ndarray:
        num, den, dnum, dden, hit = self._sums(np.asarray(u, dtype=float))
        out = (dnum * den - num * dden) / den**2
        rows, cols = np.nonzero(hit)
        if rows.size:
            # e'(u_i) = sum_{j != i} (w_j / w_i) (v_j - v_i) / (u_i - u_j)
            v = self.a / self.w
            for r, i in zip(rows, cols):
                d = self.ref[i] - self.ref
                d[i] = 1.0
                terms = self.w / self.w[i] * (v - v[i]) / d
                terms[i] = 0.0
                out[r] = terms.sum()
        return out

    def chebyshev_coeffs(self) -> np.ndarray:
        """Chebyshev coefficients of ``e / |h|`` on ``[-1, 1]`` (exact up to rounding)."""
        n = self.ref.size - 1
        nodes = np.cos(math.pi * np.arange(n + 1) / max(n, 1))
        return C.chebfit(nodes, self.value(nodes), n)


def _extrema(f, df, ubands: Sequence[tuple[float, float]], scan: int) -> tuple[np.ndarray, np.ndarray]:
    """Local maxima of ``|f|`` on each band, band endpoints included."""
    shape = 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, scan)))
    grids = np.array([lo + (hi - lo) * shape for lo, hi in ubands])
    raw = f(grids.ravel()).reshape(grids.shape)
    vals = np.abs(raw)
    band, inner = np.nonzero((vals[:, 1:-1] >= vals[:, :-2]) & (vals[:, 1:-1] >= vals[:, 2:]))
    inner += 1
    left, right = grids[band, inner - 1], grids[band, inner + 1]
    sgn = np.sign(raw[band, inner])
    ok = (sgn * df(left) > 0) & (sgn * df(right) < 0)
    # derivative bisection where the bracket is valid; otherwise keep the grid point
    lo_b, hi_b, s_b = left[ok], right[ok], sgn[ok]
    for _ in range(52):
        mid = 0.5 * (lo_b + hi_b)
        go_right = s_b * df(mid) > 0
        lo_b = np.where(go_right, mid, lo_b)
        hi_b = np.where(go_right, hi_b, mid)
    pts = grids[band, inner]
    pts[ok] = 0.5 * (lo_b + hi_b)
    ends = np.array(ubands, dtype=float)
    x = np.unique(np.concatenate([ends.ravel(), pts]))
    return x, f(x)


def _select_alternating(x: np.ndarray, v: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Sign-alternating subset of ``count`` extrema, greedily maximizing ``min |v|``."""
    xs, vs = [x[0]], [v[0]]
    for xi, vi in zip(x[1:], v[1:]):
        if np.sign(vi) == np.sign(vs[-1]):
            if abs(vi) > abs(vs[-1]):
                xs[-1], vs[-1] = xi, vi
        else:
            xs.append(xi)
            vs.append(vi)
    while len(xs) > count:
        mags = np.abs(vs)
        i = int(np.argmin(mags))
        if i == 0 or i == len(xs) - 1:
            del xs[i], vs[i]
        elif len(xs) - count == 1:
            k = 0 if mags[0] <= mags[-1] else len(xs) - 1
            del xs[k], vs[k]
        else:
            # dropping an interior point leaves two same-sign neighbours; keep the larger
            del xs[i], vs[i]
            k = i - 1 if abs(vs[i - 1]) < abs(vs[i]) else i
            del xs[k], vs[k]
    return np.array(xs), np.array(vs)


def _initial_reference(ubands, count: int, masses: Sequence[float]) -> np.ndarray:
    p = len(ubands)
    masses = np.asarray(masses, dtype=float)
    share = count * masses / masses.sum()
    counts = np.floor(share).astype(int)
    if count >= p:
        counts = np.maximum(counts, 1)
    while counts.sum() > count:
        over = np.where(counts > 1, counts - share, -np.inf)
        counts[int(np.argmax(over))] -= 1
    while counts.sum() < count:
        counts[int(np.argmax(share - counts))] += 1
    pts = []
    for (lo, hi), k in zip(ubands, counts):
        if k == 1:
            pts.append([0.5 * (lo + hi)])
        elif k > 1:
            pts.append(lo + (hi - lo) * 0.5 * (1.0 - np.cos(math.pi * np.arange(k) / (k - 1))))
    return np.concatenate(pts)


def _hull_frame(U: IntervalUnion):
    lo, hi = U.hull
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    ubands = [((a - mid) / half, (b - mid) / half) for a, b in U.bands]
    return mid, half, ubands


def remez_chebyshev(
    U: IntervalUnion,
    n: int,
    log_cap: float,
    band_mass: Sequence[float] | None = None,
    *,
    rtol: float = 1e-12,
    cert_tol: float = 1e-10,
    max_iter: int = 200,
    scan: int = 2048,
) -> ChebyshevResult:
    """Monic Chebyshev polynomial of degree ``n`` on ``U`` and its factor ``M_{n,K}``.

    ``band_mass`` (equilibrium masses of the bands) seeds the reference; band
    lengths are used if it is omitted. The exchange stops once the levelled
    error is within ``rtol`` of the sup norm, or, if rounding prevents that,
    once progress stalls with the de la Vallee Poussin gap below ``cert_tol``.
    """
    if not 1 <= n <= MAX_DEGREE:
        raise InputError(f"degree must be in 1..{MAX_DEGREE}")
    mid, half, ubands = _hull_frame(U)
    masses = band_mass if band_mass is not None else [b - a for a, b in U.bands]
    ref = _initial_reference(ubands, n + 1, masses)
    best_gap, stale = math.inf, 0
    for it in range(1, max_iter + 1):
        if np.min(np.diff(ref)) < 1e-13:
            raise ReferenceCollapse("two reference points merged")
        e = _Levelled(ref)
        xs, vs = _extrema(e.value, e.slope, ubands, scan)
        # values are scaled by |h|: the reference sits at +-1
        sup = float(np.max(np.abs(vs)))
        sel_x, sel_v = _select_alternating(xs, vs, n + 1)
        if sel_x.size < n + 1:
            raise ReferenceCollapse(f"only {sel_x.size} alternating extrema for degree {n}")
        lower = float(np.min(np.abs(sel_v)))
        gap = (sup - lower) / sup
        if (sup - 1.0) / sup <= rtol:
            break
        if gap < 0.5 * best_gap:
            best_gap, stale = gap, 0
        else:
            stale += 1
        if stale >= 5 and gap <= cert_tol:
            break
        ref = sel_x
    else:
        raise StalledExchange(f"degree {n}: {max_iter} exchanges, gap {gap:.3e}")
    log_scale = n * math.log(half) + e.log_h
    log_sup = log_scale + math.log(sup)
    cheb = Chebyshev(e.chebyshev_coeffs() * math.exp(log_scale) * e.sign_h, domain=[mid - half, mid + half])
    mono = cheb.convert(kind=Polynomial).coef
    mono = mono / mono[-1]
    return ChebyshevResult(
        n=n,
        coeffs=mono,
        sup_norm=math.exp(log_sup),
        log_sup=log_sup,
        reference=mid + half * sel_x,
        log_m=log_sup - n * log_cap,
        cert_lower_bound=math.exp(log_scale + math.log(lower)),
        iterations=it,
    )


def sup_norm_on_union(coeffs: Sequence[float], U: IntervalUnion, scan: int = 2048) -> float:
    """``max_U |sum_k coeffs[k] x^k|`` by dense scan plus derivative polish."""
    mid, half, ubands = _hull_frame(U)
    poly = Polynomial(np.asarray(coeffs, dtype=float))
    coef = np.atleast_1d(poly.convert(kind=Chebyshev, domain=[mid - half, mid + half]).coef)
    dcoef = C.chebder(coef) if coef.size > 1 else np.zeros(1)
    _, vs = _extrema(lambda u: C.chebval(u, coef), lambda u: C.chebval(u, dcoef), ubands, scan)
    return float(np.max(np.abs(vs)))


def chebyshev_series(
    U: IntervalUnion, n_max: int, log_cap: float, band_mass: Sequence[float] | None = None
) -> list[ChebyshevResult]:
    return [remez_chebyshev(U, n, log_cap, band_mass) for n in range(1, min(n_max, MAX_DEGREE) + 1)]


def check_lower_bound(results: Sequence[ChebyshevResult], tol: float = 1e-6) -> None:
    """``M_{n,K} >= 2`` for every computed degree."""
    for r in results:
        if r.m < 2.0 - tol:
            raise InvariantViolation(f"M_{r.n} = {r.m!r} < 2")


def widom_vs_chebyshev(W: WidomSeries, results: Sequence[ChebyshevResult], tol: float = 1e-6) -> list[dict]:
    """Check ``W_n <= M_{n,K}`` degree by degree and return the paired table."""
    rows = []
    for r in results:
        if r.n > W.n_max:
            raise InputError(f"no Widom factor for degree {r.n}")
        lw = float(W.log_w[r.n - 1])
        if lw > r.log_m + tol:
            raise OrderingViolation(f"W_{r.n} = {math.exp(lw)!r} exceeds M_{r.n} = {r.m!r}")
        rows.append({"n": r.n, "w_n": math.exp(lw), "m_n": r.m, "log_w_n": lw, "log_m": r.log_m})
    return rows


def write_chebyshev_csv(path: str | os.PathLike, results: Sequence[ChebyshevResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "sup_norm", "log_m", "m_n", "cert_lower_bound"])
        for r in results:
            out.writerow([r.n, f"{r.sup_norm:.15g}", f"{r.log_m:.15g}", f"{r.m:.15g}", f"{r.cert_lower_bound:.15g}"])
