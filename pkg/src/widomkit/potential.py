r"""Equilibrium measure, Green function, capacity and Parreau-Widom sum.

For ``K = [alpha_1, beta_1] u ... u [alpha_p, beta_p]`` the equilibrium density is

.. math::

    \mu_K'(t) = \frac{1}{\pi}\frac{|q(t)|}{\sqrt{|R(t)|}},\qquad
    R(t) = \prod_{j=1}^p (t-\alpha_j)(t-\beta_j),

where ``q`` is monic of degree ``p - 1`` with one zero ``c_j`` in each gap.
Those zeros are the critical points of the Green function ``g_K``; ``q`` is
fixed by requiring ``int_gap q / sqrt|R| = 0`` on every gap, which is what
makes ``g_K`` vanish at both ends of each gap. These conditions are linear in
the coefficients of ``q``.

On the real axis off ``K`` we have ``|g_K'(x)| = |q(x)| / sqrt|R(x)|``, which
gives the line-integral route to ``g_K``. The potential route uses
``g_K(x) = int log|x - t| dmu_K(t) - log Cap(K)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

from .errors import (
    DegenerateGeometry,
    IdentityViolation,
    IllConditioned,
    NormalizationFailure,
    OnSupport,
    OutsideSupport,
    ProbeInconsistency,
    RootEscape,
)
from .intervals import IntervalUnion
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    band_integral,
    band_log_integral,
    gap_integral,
    smooth_integral,
)

MIN_WIDTH = 1e-8
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class QPolynomial:
    """Monic ``q(t) = prod_j (t - c_j)``, one root per gap."""

    roots: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def coeffs(self) -> np.ndarray:
        """Ascending monomial coefficients (leading coefficient 1)."""
        if not self.roots:
            return np.array([1.0])
        return P.polyfromroots(self.roots)

    def log_abs(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        with np.errstate(divide="ignore"):
            for c in self.roots:
                out = out + np.log(np.abs(t - c))
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.ones_like(t)
        for c in self.roots:
            out = out * (t - c)
        return out


class _Kernel:
    """Evaluates the pieces of ``|q| / sqrt|R|`` with chosen endpoint factors removed.

    Endpoints are indexed 0..2p-1 in increasing order, so band j owns
    ``(2j, 2j+1)`` and gap j owns ``(2j+1, 2j+2)``.
    """

    def __init__(self, U: IntervalUnion, q: QPolynomial | None = None):
        self.U = U
        self.q = q
        self.ends = U.endpoints

    def log_weight(self, t: np.ndarray, skip: tuple[int, ...]) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for i, e in enumerate(self.ends):
            if i not in skip:
                out = out - 0.5 * np.log(np.abs(t - e))
        return out

    def weight(self, t: np.ndarray, skip: tuple[int, ...], shift: float = 0.0) -> np.ndarray:
        """``exp(log_weight - shift)``; ``shift`` keeps wide products in range."""
        return np.exp(self.log_weight(t, skip) - shift)

    def gap_shift(self, j: int, with_q: bool = False) -> float:
        """Largest log-size of the gap-j integrand over a coarse grid."""
        b0, a1 = self.U.gaps[j]
        t = 0.5 * (b0 + a1) + 0.5 * (a1 - b0) * np.cos((np.arange(33) + 0.5) * math.pi / 33)
        value = self.log_weight(t, (2 * j + 1, 2 * j + 2))
        if with_q:
            value = value + self.q.log_abs(t)
        return float(value.max())

    def smooth(self, t: np.ndarray, skip: tuple[int, ...]) -> np.ndarray:
        """``|q(t)| * weight(t, skip)``, computed in log space."""
        return np.exp(self.q.log_abs(t) + self.log_weight(t, skip))

    def band_remainder(self, j: int):
        return lambda t: self.smooth(t, (2 * j, 2 * j + 1))


def _check_geometry(U: IntervalUnion) -> None:
    for a, b in U.bands:
        if b - a <= MIN_WIDTH:
            raise DegenerateGeometry(f"band ({a}, {b}) narrower than {MIN_WIDTH}")
    for a, b in U.gaps:
        if b - a <= MIN_WIDTH:
            raise DegenerateGeometry(f"gap ({a}, {b}) narrower than {MIN_WIDTH}")


def _bisect(func, lo: float, hi: float) -> float:
    flo = func(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_gap_conditions(U: IntervalUnion, cfg: QuadratureConfig = DEFAULT_CONFIG) -> QPolynomial:
    """Find the monic ``q`` whose gap integrals against ``1/sqrt|R|`` all vanish.

    The unknown lower-order part of ``q`` is expanded in Chebyshev polynomials
    of the hull variable ``u in [-1, 1]``; each gap row is normalized by the
    integral of its positive weight. Roots are then isolated by bisection, one
    per gap.
    """
    _check_geometry(U)
    p = U.p
    if p == 1:
        return QPolynomial(())
    lo, hi = U.hull
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    kern = _Kernel(U)
    lead = np.zeros(p)
    lead[p - 1] = 2.0 ** (2 - p)  # monic in u
    A = np.empty((p - 1, p - 1))
    rhs = np.empty(p - 1)
    for j, gap in enumerate(U.gaps):
        skip = (2 * j + 1, 2 * j + 2)
        shift = kern.gap_shift(j)

        def integrand(t, skip=skip, shift=shift):
            w = kern.weight(t, skip, shift)
            # columns: T_0..T_{p-1} of the hull variable, then the bare weight
            cheb = C.chebvander((t - mid) / half, p - 1)
            return np.column_stack([cheb * w[:, None], w])

        row = gap_integral(integrand, gap, cfg)
        A[j] = row[: p - 1] / row[p]
        rhs[j] = -lead[p - 1] * row[p - 1] / row[p]
    d = np.linalg.solve(A, rhs)
    res = np.linalg.norm(A @ d - rhs) / max(np.linalg.norm(rhs), np.linalg.norm(A) * np.linalg.norm(d))
    if not res <= 1e-8:
        raise IllConditioned(f"moment system relative residual {res:.3e}")
    cheb = lead.copy()
    cheb[: p - 1] += d

    def q_tilde(t: float) -> float:
        return float(C.chebval((t - mid) / half, cheb))

    roots = []
    for b0, a1 in U.gaps:
        if q_tilde(b0) * q_tilde(a1) < 0:
            roots.append(_bisect(q_tilde, b0, a1))
        else:
            # series lost the sign change to rounding; let the polish find it
            roots.append(0.5 * (b0 + a1))
    roots = _polish_roots(U, kern, np.array(roots), cfg)
    q = QPolynomial(tuple(float(c) for c in roots))
    worst = float(np.max(_gap_residuals(U, kern, q, cfg)))
    if worst > RESIDUAL_TOL:
        raise IllConditioned(f"gap condition residual {worst:.3e}")
    return q


def _gap_residuals(U: IntervalUnion, kern: _Kernel, q: QPolynomial, cfg: QuadratureConfig) -> np.ndarray:
    out = np.empty(U.p - 1)
    kq = _Kernel(U, q)
    for j, gap in enumerate(U.gaps):
        skip = (2 * j + 1, 2 * j + 2)
        shift_w = kq.gap_shift(j)
        shift_qw = kq.gap_shift(j, with_q=True)

        def pieces(t):
            # everything in log space, rescaled; the ratio below is scale-free
            w = kern.weight(t, skip, shift_w)
            with np.errstate(divide="ignore"):
                qw = np.sign(q(t)) * np.exp(q.log_abs(t) + kern.log_weight(t, skip) - shift_qw)
            return np.column_stack([qw, qw * qw / np.maximum(w, 1e-300), w])

        signed, square, bare = gap_integral(pieces, gap, cfg)
        # Cauchy-Schwarz bound on int |q| w; |q| itself has a kink at c_j
        size = math.sqrt(square * bare)
        out[j] = abs(signed) / size
    return out


def _polish_roots(
    U: IntervalUnion, kern: _Kernel, roots: np.ndarray, cfg: QuadratureConfig, iters: int = 30
) -> np.ndarray:
    """Newton steps on the gap conditions written in product form ``prod (t - c_i)``.

    Recovers the digits lost when ``q`` is evaluated from a high-degree
    Chebyshev series inside narrow gaps.
    """
    gaps = np.array(U.gaps)
    n = 4 * cfg.gap_nodes
    theta = np.linspace(0.0, math.pi, n + 1)
    tw = np.full(n + 1, math.pi / n)
    tw[[0, -1]] *= 0.5
    nodes, log_w = [], []
    for j, (b0, a1) in enumerate(U.gaps):
        t = 0.5 * (b0 + a1) + 0.5 * (a1 - b0) * np.cos(theta)
        nodes.append(t)
        log_w.append(kern.log_weight(t, (2 * j + 1, 2 * j + 2)))
    for _ in range(iters):
        F = np.empty(roots.size)
        J = np.empty((roots.size, roots.size))
        for j in range(roots.size):
            diff = nodes[j][:, None] - roots[None, :]
            # column i holds prod_{k != i} (t - c_k) times the weight, rescaled;
            # only c_j can vanish on gap j
            rest = np.delete(diff, j, axis=1)
            log_own = np.log(np.abs(rest)).sum(axis=1) + log_w[j]
            own = np.prod(np.sign(rest), axis=1) * np.exp(log_own - log_own.max())
            q_t = own * diff[:, j]
            with np.errstate(divide="ignore", invalid="ignore"):
                others = q_t[:, None] / diff
            others[:, j] = own
            w_rel = np.exp(log_w[j] - log_own.max())
            row = math.sqrt((tw @ (q_t**2 / w_rel)) * (tw @ w_rel))
            F[j] = (tw @ q_t) / row
            J[j] = -(tw @ others) / row
        if np.max(np.abs(F)) <= 1e-3 * RESIDUAL_TOL:
            break
        step = np.linalg.solve(J, -F)
        # damp so that every root moves at most halfway to its gap boundary
        room = np.where(step > 0, gaps[:, 1] - roots, roots - gaps[:, 0])
        factor = min(1.0, float(np.min(0.5 * room / np.maximum(np.abs(step), 1e-300))))
        new = roots + factor * step
        if np.any(new <= gaps[:, 0]) or np.any(new >= gaps[:, 1]):
            raise RootEscape("Newton polish moved a critical point out of its gap")
        if np.array_equal(new, roots):
            break
        roots = new
    return roots


def band_masses(U: IntervalUnion, q: QPolynomial, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``mu_K(E_j)`` for every band."""
    kern = _Kernel(U, q)
    masses = np.array([band_integral(kern.band_remainder(j), band, cfg) for j, band in enumerate(U.bands)])
    masses /= math.pi
    if abs(masses.sum() - 1.0) > 1e-6:
        raise NormalizationFailure(f"band masses sum to {masses.sum()!r}")
    return masses


def _log_potential(kern: _Kernel, x: float, cfg: QuadratureConfig) -> float:
    # int log|x - t| dmu_K(t)
    total = 0.0
    for j, band in enumerate(kern.U.bands):
        total += band_log_integral(kern.band_remainder(j), band, x, cfg)
    return total / math.pi


def _green_line(kern: _Kernel, x: float, cfg: QuadratureConfig) -> float:
    U, q = kern.U, kern.q
    ends = kern.ends
    last = 2 * U.p - 1
    if x > ends[-1]:
        b = ends[-1]
        # s = b + w^2 removes the (s - b)^(-1/2) factor
        return smooth_integral(lambda w: 2.0 * kern.smooth(b + w * w, (last,)), 0.0, math.sqrt(x - b), cfg)
    if x < ends[0]:
        a = ends[0]
        return smooth_integral(lambda w: 2.0 * kern.smooth(a - w * w, (0,)), 0.0, math.sqrt(a - x), cfg)
    for j, (b0, a1) in enumerate(U.gaps):
        if b0 < x < a1:
            break
    else:
        raise OnSupport(f"x={x} lies in K")
    skip = (2 * j + 1, 2 * j + 2)
    width = a1 - b0
    c = q.roots[j]
    # s = b0 + width (1 - cos th) / 2 turns ds / sqrt((s - b0)(a1 - s)) into dth;
    # integrate from the gap end on the same side of the critical point
    if x <= c:
        th = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * (x - b0) / width)))
        return smooth_integral(
            lambda s: kern.smooth(b0 + 0.5 * width * (1.0 - np.cos(s)), skip), 0.0, th, cfg
        )
    th = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * (a1 - x) / width)))
    return smooth_integral(lambda s: kern.smooth(a1 - 0.5 * width * (1.0 - np.cos(s)), skip), 0.0, th, cfg)


def log_capacity(
    U: IntervalUnion,
    q: QPolynomial,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    probe: float | None = None,
) -> float:
    """``log Cap(K) = int log|z - t| dmu_K(t) - g_K(z)`` at a far probe ``z``.

    The value is recomputed at a second probe on the opposite side of the
    hull; disagreement beyond 1e-7 raises :class:`ProbeInconsistency`.
    """
    lo, hi = U.hull
    width = hi - lo
    if probe is None:
        probe = hi + 2.0 * width
    second = lo - 3.0 * width
    kern = _Kernel(U, q)
    values = [_log_potential(kern, z, cfg) - _green_line(kern, z, cfg) for z in (probe, second)]
    if abs(values[0] - values[1]) > 1e-7:
        raise ProbeInconsistency(f"log capacity {values[0]!r} vs {values[1]!r} at two probes")
    return values[0]


@dataclass(frozen=True)
class PotentialData:
    """Everything potential-theoretic about one interval union."""

    set: IntervalUnion
    q: QPolynomial
    log_cap: float
    band_mass: tuple[float, ...]
    pw: float
    cfg: QuadratureConfig = DEFAULT_CONFIG
    _kern: _Kernel = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_kern", _Kernel(self.set, self.q))

    @property
    def cap(self) -> float:
        return math.exp(self.log_cap)

    @property
    def c_points(self) -> tuple[float, ...]:
        return self.q.roots

    def band_remainder(self, j: int):
        """Smooth factor ``s_j`` with ``dmu_K = s_j(t) dt / (pi sqrt((t-alpha_j)(beta_j-t)))`` on band j."""
        return self._kern.band_remainder(j)


def build_potential(U: IntervalUnion, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PotentialData:
    q = solve_gap_conditions(U, cfg)
    masses = band_masses(U, q, cfg)
    log_cap = log_capacity(U, q, cfg)
    kern = _Kernel(U, q)
    pw = float(sum(_green_line(kern, c, cfg) for c in q.roots))
    return PotentialData(U, q, float(log_cap), tuple(float(m) for m in masses), pw, cfg)


def normal_derivative(P: PotentialData, t):
    """``|q(t)| / sqrt|R(t)|``; on a band interior this is the normal derivative of ``g_K``."""
    t = np.asarray(t, dtype=float)
    return P._kern.smooth(t, ())


def equilibrium_density(P: PotentialData, t: float) -> float:
    if P.set.band_index(t) is None:
        raise OutsideSupport(f"t={t} is not interior to any band")
    return float(normal_derivative(P, t)) / math.pi


def green_function(P: PotentialData, x: float, route: str = "line") -> float:
    """``g_K(x)`` for real ``x`` off ``K``.

    ``route="line"`` integrates ``|g'|`` from the gap end (or outer endpoint)
    on the same side of the local maximum; ``route="potential"`` uses the
    logarithmic potential of ``mu_K``. Points within 1e-12 of ``K`` return 0.
    """
    U = P.set
    if min(abs(x - e) for e in U.endpoints) <= 1e-12:
        return 0.0
    if U.band_index(x) is not None:
        raise OnSupport(f"x={x} is interior to K where g_K = 0")
    if route == "line":
        return _green_line(P._kern, x, P.cfg)
    if route == "potential":
        return _log_potential(P._kern, x, P.cfg) - P.log_cap
    raise ValueError(f"unknown route {route!r}")


def log_potential(P: PotentialData, x: float) -> float:
    """``int log|x - t| dmu_K(t)`` (the negative of the logarithmic potential)."""
    return _log_potential(P._kern, x, P.cfg)


def pw_sum(P: PotentialData) -> float:
    return float(sum(_green_line(P._kern, c, P.cfg) for c in P.c_points))


def szego_integral(P: PotentialData) -> tuple[float, float]:
    """Return ``(S, residual)`` with ``S = int log mu_K' dmu_K`` by direct quadrature.

    ``residual = |S - (-log pi + PW(K) - log Cap(K))|``. The two endpoint
    logarithms of each band are integrated with the exact log-kernel rule; the
    rest of ``log mu_K'`` is smooth on the band.
    """
    kern = P._kern
    total = 0.0
    for j, band in enumerate(P.set.bands):
        s_j = kern.band_remainder(j)
        skip = (2 * j, 2 * j + 1)

        def smooth_part(t, s_j=s_j, skip=skip):
            return s_j(t) * (-math.log(math.pi) + P.q.log_abs(t) + kern.log_weight(t, skip))

        total += band_integral(smooth_part, band, P.cfg)
        total -= 0.5 * band_log_integral(s_j, band, band[0], P.cfg)
        total -= 0.5 * band_log_integral(s_j, band, band[1], P.cfg)
    value = total / math.pi
    residual = abs(value - (-math.log(math.pi) + P.pw - P.log_cap))
    if residual > 1e-5:
        raise IdentityViolation(f"Szego identity residual {residual:.3e}")
    return value, residual


def potential_summary(P: PotentialData) -> dict:
    """JSON-ready record with the fixed field names used by the CLI and studies."""
    szego, residual = szego_integral(P)
    return {
        "bands": [list(b) for b in P.set.bands],
        "c_points": list(P.c_points),
        "log_cap": P.log_cap,
        "band_mass": list(P.band_mass),
        "pw": P.pw,
        "szego": szego,
        "szego_identity_residual": residual,
    }
