r"""Quadrature for integrands carrying an arcsine endpoint singularity.

Every equilibrium-measure integral on an interval union has the shape

.. math::

    \int_a^b \frac{f(t)}{\sqrt{(t-a)(b-t)}}\,dt
    = \int_0^\pi f(m + r\cos\theta)\,d\theta ,

with ``m`` the midpoint and ``r`` the half-width. After the substitution the
integrand is smooth, even and :math:`2\pi`-periodic in :math:`\theta`, so the
trapezoid rule converges spectrally. All rules here refine by node doubling
and stop once two successive estimates agree.

Integrand handles must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.fft import dct

from .errors import InputError, NoConvergence, NonFiniteIntegrand

ArrayFunc = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureConfig:
    """Refinement settings shared by every rule in this module.

    ``abs_tol`` is measured against the integral of ``|f|`` over the same
    kernel, so it acts as an absolute tolerance for O(1) integrands and stays
    meaningful for integrands that are tiny or huge in absolute terms.
    """

    band_nodes: int = 64
    gap_nodes: int = 64
    refinement_limit: int = 12
    abs_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.band_nodes < 16 or self.gap_nodes < 16:
            raise InputError("band_nodes and gap_nodes must be >= 16")
        if self.refinement_limit < 1:
            raise InputError("refinement_limit must be positive")
        if not self.abs_tol > 0:
            raise InputError("abs_tol must be positive")


DEFAULT_CONFIG = QuadratureConfig()


def _evaluate(f: ArrayFunc, t: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(t), dtype=float)
    if vals.shape[:1] != t.shape:
        vals = np.broadcast_to(vals, t.shape).astype(float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand returned a non-finite value")
    return vals


def _cosine_trapezoid(f: ArrayFunc, lo: float, hi: float, n0: int, cfg: QuadratureConfig) -> float:
    if not lo < hi:
        raise InputError(f"integration interval ({lo}, {hi}) is empty")
    m, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    n = n0
    theta = np.linspace(0.0, math.pi, n + 1)
    vals = _evaluate(f, m + r * np.cos(theta))
    # trapezoid sums with half-weight endpoints, kept separately so doubling reuses them
    total = vals[1:-1].sum(axis=0) + 0.5 * (vals[0] + vals[-1])
    total_abs = np.abs(vals[1:-1]).sum(axis=0) + 0.5 * (np.abs(vals[0]) + np.abs(vals[-1]))
    estimate = math.pi / n * total
    for _ in range(cfg.refinement_limit):
        theta_new = (np.arange(n) + 0.5) * (math.pi / n)
        new = _evaluate(f, m + r * np.cos(theta_new))
        total = total + new.sum(axis=0)
        total_abs = total_abs + np.abs(new).sum(axis=0)
        n *= 2
        previous, estimate = estimate, math.pi / n * total
        scale = math.pi / n * total_abs
        if np.all(np.abs(estimate - previous) <= cfg.abs_tol * scale):
            return float(estimate) if np.ndim(estimate) == 0 else estimate
    raise NoConvergence(
        f"cosine rule on ({lo}, {hi}) not converged after {n} nodes: "
        f"last change {np.max(np.abs(estimate - previous)):.3e}"
    )


def band_integral(f: ArrayFunc, band: tuple[float, float], cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``int_alpha^beta f(t) / sqrt((t - alpha)(beta - t)) dt``.

    ``f`` may also return an array of shape ``(len(t), m)``; the ``m``
    integrals are then refined together and returned as an array.
    """
    return _cosine_trapezoid(f, band[0], band[1], cfg.band_nodes, cfg)


def gap_integral(f: ArrayFunc, gap: tuple[float, float], cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Same kernel as :func:`band_integral`, over a gap ``(beta_j, alpha_{j+1})``."""
    return _cosine_trapezoid(f, gap[0], gap[1], cfg.gap_nodes, cfg)


def _log_series(h: np.ndarray, phi: float) -> float:
    # int_0^pi h(th) log|cos(phi) - cos(th)| dth from the cosine coefficients of h,
    # using log|cos phi - cos th| = -log 2 - 2 sum_k cos(k phi) cos(k th) / k
    m = h.size - 1
    coef = dct(h, type=1) * (0.5 * math.pi / m)
    k = np.arange(1, m)
    return float(-math.log(2.0) * coef[0] - 2.0 * np.sum(np.cos(k * phi) * coef[1:m] / k))


def band_log_integral(
    f: ArrayFunc,
    band: tuple[float, float],
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """``int f(t) log|x - t| / sqrt((t - alpha)(beta - t)) dt`` over a band.

    For ``x`` inside the closed band the logarithm is singular on the
    integration range; it is integrated exactly against the cosine series of
    ``f`` (spectrally accurate for smooth ``f``). For ``x`` outside the band the
    integrand is smooth and :func:`band_integral` is used.
    """
    lo, hi = band
    if x < lo or x > hi:
        return band_integral(lambda t: f(t) * np.log(np.abs(x - t)), band, cfg)
    m, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    phi = math.acos(min(1.0, max(-1.0, (x - m) / r)))
    n = cfg.band_nodes
    estimate = None
    for _ in range(cfg.refinement_limit + 1):
        h = _evaluate(f, m + r * np.cos(np.linspace(0.0, math.pi, n + 1)))
        value = math.log(r) * math.pi * (h[1:-1].sum() + 0.5 * (h[0] + h[-1])) / n
        value += _log_series(h, phi)
        scale = math.pi * np.abs(h).mean() * (1.0 + abs(math.log(r)))
        if estimate is not None and (abs(value - estimate) <= cfg.abs_tol * scale or scale == 0.0):
            return value
        estimate = value
        n *= 2
    raise NoConvergence(f"log-kernel rule on {band} at x={x} not converged after {n // 2} nodes")


def smooth_integral(
    h: ArrayFunc,
    lo: float,
    hi: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    n0: int = 32,
) -> float:
    """Gauss-Legendre integral of a smooth ``h`` on ``[lo, hi]`` with node doubling."""
    if lo == hi:
        return 0.0
    m, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    n = n0
    estimate = None
    for _ in range(cfg.refinement_limit + 1):
        x, w = leggauss(n)
        vals = _evaluate(h, m + r * x)
        value = float(r * np.dot(w, vals))
        scale = abs(r) * float(np.dot(w, np.abs(vals)))
        if estimate is not None and (abs(value - estimate) <= cfg.abs_tol * scale or scale == 0.0):
            return value
        estimate = value
        n *= 2
        if n > 4096:
            break
    raise NoConvergence(f"Gauss-Legendre rule on ({lo}, {hi}) not converged")
