"""Recurrence coefficients and Widom factors of the equilibrium measure.

Monic orthogonal polynomials obey

    P_{n+1}(x) = (x - b_{n+1}) P_n(x) - a_n^2 P_{n-1}(x),   P_{-1} = 0, P_0 = 1,

so ``b_{n+1}`` pairs with ``P_n`` and ``||P_n|| = a_1 ... a_n``. The Widom
factor is ``W_n = ||P_n|| / Cap(K)^n``; it is always handled through its
logarithm.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BreakDown,
    DegreeOutOfRange,
    IndexBudget,
    InputError,
    RenormalizationTooLarge,
)
from .potential import PotentialData


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure ``sum_k w_k delta_{t_k}``."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise InputError("nodes and weights must be equal-length 1-d arrays")
        if np.any(np.diff(nodes) <= 0):
            raise InputError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise InputError("weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InputError(f"weights sum to {weights.sum()!r}, not 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


@dataclass(frozen=True)
class JacobiData:
    """``a[n-1] = a_n`` and ``b[n-1] = b_n`` for ``n = 1..n_max``."""

    a: np.ndarray
    b: np.ndarray

    @property
    def n_max(self) -> int:
        return self.a.size


@dataclass(frozen=True)
class WidomSeries:
    """``log_w[n-1] = log W_n`` for ``n = 1..n_max``."""

    log_w: np.ndarray

    @property
    def n_max(self) -> int:
        return self.log_w.size

    @property
    def w(self) -> np.ndarray:
        return np.exp(self.log_w)


def default_nodes_per_band(n_max: int) -> int:
    return max(256, 16 * n_max)


def discretize_measure(P: PotentialData, nodes_per_band: int, n_max: int | None = None) -> DiscreteMeasure:
    """Gauss-Chebyshev image of ``mu_K``: ``M`` nodes per band.

    With ``t = m + r cos(theta)`` the arcsine factor cancels against ``dt``,
    so on band ``j`` the midpoint rule in ``theta`` gives weights
    ``s_j(t_k) / M`` where ``s_j`` is the smooth remainder of the density.
    """
    if n_max is not None and nodes_per_band < 8 * n_max:
        raise IndexBudget(f"nodes_per_band={nodes_per_band} < 8 * n_max={8 * n_max}")
    M = nodes_per_band
    theta = (2.0 * np.arange(M, 0, -1) - 1.0) * math.pi / (2.0 * M)  # ascending t
    nodes, weights = [], []
    for j, (lo, hi) in enumerate(P.set.bands):
        t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(theta)
        nodes.append(t)
        weights.append(P.band_remainder(j)(t) / M)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    total = weights.sum()
    if abs(total - 1.0) > 1e-10:
        raise RenormalizationTooLarge(f"discrete mass {total!r} before renormalization")
    return DiscreteMeasure(nodes, weights / total)


def recurrence_coefficients(D: DiscreteMeasure, n_max: int) -> JacobiData:
    """Lanczos tridiagonalization of ``diag(nodes)`` started from ``sqrt(weights)``.

    Full reorthogonalization (two Gram-Schmidt passes) against all previous
    Lanczos vectors keeps the coefficients accurate well past the point where
    moment-based methods fail.
    """
    if n_max < 1 or n_max >= D.size / 4:
        raise IndexBudget(f"n_max={n_max} needs fewer than {D.size / 4} (nodes/4)")
    x = D.nodes
    Q = np.zeros((n_max + 1, D.size))
    Q[0] = np.sqrt(D.weights)
    a = np.empty(n_max)
    b = np.empty(n_max)
    floor = 1e-14 * max(1.0, float(np.max(np.abs(x))))
    for k in range(n_max):
        q = Q[k]
        b[k] = q @ (x * q)
        r = x * q - b[k] * q
        if k > 0:
            r -= a[k - 1] * Q[k - 1]
        for _ in range(2):
            r -= Q[: k + 1].T @ (Q[: k + 1] @ r)
        a[k] = np.linalg.norm(r)
        if a[k] <= floor:
            raise BreakDown(f"a_{k + 1} = {a[k]:.3e}: discrete measure exhausted")
        Q[k + 1] = r / a[k]
    return JacobiData(a, b)


def brute_force_recurrence(D: DiscreteMeasure, n_max: int) -> JacobiData:
    """Gram-Schmidt on ``1, x, x^2, ...`` in exact rational arithmetic.

    Every float node and weight converts exactly to a :class:`Fraction`, so the
    only rounding is the final conversion of ``a_n^2`` and ``b_n`` to floats.
    Meant as an independent check of :func:`recurrence_coefficients`.
    """
    if not 1 <= n_max <= 10:
        raise IndexBudget("brute-force recurrence supports 1 <= n_max <= 10")
    t = [Fraction(v) for v in D.nodes.tolist()]
    w = [Fraction(v) for v in D.weights.tolist()]

    def inner(u, v):
        return sum(wk * uk * vk for wk, uk, vk in zip(w, u, v))

    basis = [[Fraction(1)] * len(t)]
    norms = [inner(basis[0], basis[0])]
    a, b = [], []
    for n in range(1, n_max + 1):
        v = [tk**n for tk in t]
        for p, nrm in zip(basis, norms):
            c = inner(v, p) / nrm
            v = [vk - c * pk for vk, pk in zip(v, p)]
        nrm = inner(v, v)
        if nrm == 0:
            raise BreakDown(f"||P_{n}|| = 0: discrete measure exhausted")
        b.append(float(inner([tk * pk for tk, pk in zip(t, basis[-1])], basis[-1]) / norms[-1]))
        a.append(math.sqrt(nrm / norms[-1]))
        basis.append(v)
        norms.append(nrm)
    return JacobiData(np.array(a), np.array(b))


def widom_factors(J: JacobiData, log_cap: float) -> WidomSeries:
    n = np.arange(1, J.n_max + 1)
    return WidomSeries(np.cumsum(np.log(J.a)) - n * log_cap)


def evaluate_monic(J: JacobiData, n: int, x):
    """``P_n(x)`` by forward recurrence; ``x`` may be an array."""
    if not 0 <= n <= J.n_max:
        raise DegreeOutOfRange(f"degree {n} outside 0..{J.n_max}")
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        a_prev = J.a[k - 1] if k > 0 else 0.0
        prev, cur = cur, (x - J.b[k]) * cur - a_prev**2 * prev
    return cur


def monic_table(J: JacobiData, x, n: int | None = None) -> np.ndarray:
    """Rows ``P_0(x) .. P_n(x)`` stacked into an ``(n+1, len(x))`` array."""
    n = J.n_max if n is None else n
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1, x.size))
    out[0] = 1.0
    if n >= 1:
        out[1] = x - J.b[0]
    for k in range(1, n):
        out[k + 1] = (x - J.b[k]) * out[k] - J.a[k - 1] ** 2 * out[k - 1]
    return out


def equilibrium_jacobi(P: PotentialData, n_max: int, nodes_per_band: int | None = None) -> JacobiData:
    """Discretize ``mu_K`` and run Lanczos; the usual entry point."""
    M = nodes_per_band or default_nodes_per_band(n_max)
    return recurrence_coefficients(discretize_measure(P, M, n_max), n_max)


def write_jacobi_csv(path: str | os.PathLike, J: JacobiData, W: WidomSeries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "a_n", "b_n", "log_w_n", "w_n"])
        for n in range(1, J.n_max + 1):
            lw = W.log_w[n - 1]
            out.writerow([n, f"{J.a[n - 1]:.15g}", f"{J.b[n - 1]:.15g}", f"{lw:.15g}", f"{math.exp(lw):.15g}"])


def write_widom_csv(path: str | os.PathLike, W: WidomSeries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "log_w_n", "w_n"])
        for n, lw in enumerate(W.log_w, start=1):
            out.writerow([n, f"{lw:.15g}", f"{math.exp(lw):.15g}"])
