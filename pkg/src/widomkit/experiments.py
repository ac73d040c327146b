"""Studies on families of interval unions.

The main object is a nested family ``F_0 ⊃ F_1 ⊃ ...`` (self-similar
two-piece Cantor prefixes by default). For each level the full pipeline
runs, and three mechanisms are checked along the nesting: ``W_n >= 1``,
monotonicity of the capacity, and the extremal property of monic orthogonal
polynomials measured against a deeper level's discretized equilibrium
measure.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .chebyshev import (
    MAX_DEGREE,
    ChebyshevResult,
    check_lower_bound,
    chebyshev_series,
    widom_vs_chebyshev,
    write_chebyshev_csv,
)
from .errors import DepthTooLarge, InputError, MechanismViolation, RatioOutOfRange
from .intervals import IntervalUnion
from .jacobi import (
    DiscreteMeasure,
    JacobiData,
    WidomSeries,
    default_nodes_per_band,
    discretize_measure,
    monic_table,
    recurrence_coefficients,
    widom_factors,
    write_jacobi_csv,
    write_widom_csv,
)
from .potential import PotentialData, build_potential, potential_summary
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

MAX_DEPTH = 8
W_FLOOR_TOL = 1e-6
CAP_TOL = 1e-9
CROSS_RTOL = 1e-8


@dataclass(frozen=True)
class NestedFamily:
    levels: tuple[IntervalUnion, ...]
    label: str

    def __post_init__(self) -> None:
        if not self.levels:
            raise InputError("a family needs at least one level")
        for s, (outer, inner) in enumerate(zip(self.levels, self.levels[1:]), start=1):
            if not inner.issubset(outer):
                raise InputError(f"level {s} is not contained in level {s - 1}")
            if inner.p < outer.p:
                raise InputError(f"level {s} has fewer bands than level {s - 1}")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def cantor_prefix_family(ratio: float, depth: int, label: str | None = None) -> NestedFamily:
    """Levels ``0..depth`` of the two-piece Cantor construction on ``[0, 1]``.

    Each band keeps its two outer sub-intervals of relative length ``ratio``.
    """
    if not 0 <= depth <= MAX_DEPTH:
        raise DepthTooLarge(f"depth must be in 0..{MAX_DEPTH}")
    if not (0.0 < ratio <= 0.5 - 1e-3 or ratio == 1.0 / 3.0):
        raise RatioOutOfRange(f"ratio {ratio!r} must lie in (0, 0.499]")
    bands = [(0.0, 1.0)]
    levels = [IntervalUnion(tuple(bands))]
    for _ in range(depth):
        nxt = []
        for a, b in bands:
            step = ratio * (b - a)
            nxt += [(a, a + step), (b - step, b)]
        bands = nxt
        levels.append(IntervalUnion(tuple(bands)))
    return NestedFamily(tuple(levels), label or f"cantor_r{ratio:.6g}_d{depth}")


def random_union(rng: np.random.Generator, p_max: int = 4, min_width: float = 0.05, min_gap: float = 0.05) -> IntervalUnion:
    """Random union of at most ``p_max`` bands, widths and gaps in ``[min, 0.5]``, centred at 0."""
    p = int(rng.integers(1, p_max + 1))
    widths = rng.uniform(min_width, 0.5, p)
    gaps = rng.uniform(min_gap, 0.5, p - 1)
    edges = [0.0]
    for j in range(p):
        edges.append(edges[-1] + widths[j])
        if j < p - 1:
            edges.append(edges[-1] + gaps[j])
    edges = np.array(edges) - 0.5 * edges[-1]
    return IntervalUnion(tuple(zip(edges[::2], edges[1::2])))


def random_unions(seed: int, count: int, p_max: int = 4) -> list[IntervalUnion]:
    rng = np.random.default_rng(seed)
    return [random_union(rng, p_max) for _ in range(count)]


@dataclass(frozen=True)
class LevelData:
    level: int
    potential: PotentialData
    measure: DiscreteMeasure
    jacobi: JacobiData
    widom: WidomSeries
    chebyshev: tuple[ChebyshevResult, ...] = ()

    @property
    def set(self) -> IntervalUnion:
        return self.potential.set


def run_level(
    U: IntervalUnion,
    n_max: int,
    level: int = 0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    nodes_per_band: int | None = None,
    cheb_n_max: int = 0,
) -> LevelData:
    P = build_potential(U, cfg)
    D = discretize_measure(P, nodes_per_band or default_nodes_per_band(n_max), n_max)
    J = recurrence_coefficients(D, n_max)
    W = widom_factors(J, P.log_cap)
    cheb = tuple(chebyshev_series(U, cheb_n_max, P.log_cap, P.band_mass)) if cheb_n_max else ()
    return LevelData(level, P, D, J, W, cheb)


@dataclass(frozen=True)
class MechanismReport:
    levels: tuple[LevelData, ...]
    # cross[(s, s_prev)][n-1] = log(norm of own P_n) - log(norm of P_n from level s_prev), on level s
    cross: dict = field(default_factory=dict)

    def min_w(self) -> list[float]:
        return [float(np.exp(L.widom.log_w.min())) for L in self.levels]


def theorem3_mechanism_check(
    F: NestedFamily,
    n_max: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    nodes_per_band: int | None = None,
    levels: Sequence[LevelData] | None = None,
) -> MechanismReport:
    """Run every level and assert the three nesting inequalities.

    The cross-norm test compares, in ``L^2`` of the discretized level-``s``
    equilibrium measure, the level's own monic ``P_n`` against the monic
    ``P_n`` of each coarser level. Norms scale like ``Cap^n``, so the
    comparison uses a relative tolerance.
    """
    if levels is None:
        levels = [run_level(U, n_max, s, cfg, nodes_per_band) for s, U in enumerate(F.levels)]
    for L in levels:
        w = L.widom.log_w
        bad = np.nonzero(w < math.log(1.0 - W_FLOOR_TOL))[0]
        if bad.size:
            n = int(bad[0]) + 1
            raise MechanismViolation(f"W_n >= 1 fails at level {L.level}, n={n}: W_n={math.exp(w[n - 1])!r}")
    for prev, cur in zip(levels, levels[1:]):
        if cur.potential.log_cap > prev.potential.log_cap + CAP_TOL:
            raise MechanismViolation(
                f"capacity increases from level {prev.level} to {cur.level}: "
                f"{prev.potential.log_cap!r} -> {cur.potential.log_cap!r}"
            )
    cross = {}
    for cur in levels:
        D = cur.measure
        own = monic_table(cur.jacobi, D.nodes, n_max)[1:] ** 2 @ D.weights
        for prev in levels:
            if prev.level >= cur.level:
                continue
            other = monic_table(prev.jacobi, D.nodes, n_max)[1:] ** 2 @ D.weights
            ratio = np.log(own) - np.log(other)
            bad = np.nonzero(ratio > math.log1p(CROSS_RTOL))[0]
            if bad.size:
                n = int(bad[0]) + 1
                raise MechanismViolation(
                    f"norm minimality fails at level {cur.level} against level {prev.level}, n={n}: "
                    f"relative excess {math.expm1(ratio[n - 1]):.3e}"
                )
            cross[(cur.level, prev.level)] = ratio
    return MechanismReport(tuple(levels), cross)


@dataclass(frozen=True)
class UnboundednessReport:
    flagged: tuple[tuple[int, float, float], ...]  # (n, a_n, implied lower bound Cap / a_n on W_{n-1})
    min_a: float
    running_min: np.ndarray
    consistent: bool  # every implied bound is met by the computed W_{n-1}


def unboundedness_scan(J: JacobiData, log_cap: float, threshold: float) -> UnboundednessReport:
    """Flag ``a_n < threshold * Cap``; each gives ``W_{n-1} >= Cap / a_n`` when ``W_n >= 1``."""
    cap = math.exp(log_cap)
    W = widom_factors(J, log_cap)
    flagged, consistent = [], True
    for n in range(1, J.n_max + 1):
        a = float(J.a[n - 1])
        if a < threshold * cap:
            bound = cap / a
            flagged.append((n, a, bound))
            if n > 1 and math.exp(W.log_w[n - 2]) < bound * (1.0 - 1e-6):
                consistent = False
    return UnboundednessReport(tuple(flagged), float(J.a.min()), np.minimum.accumulate(J.a), consistent)


@dataclass(frozen=True)
class WeakStarProxy:
    values: np.ndarray  # sum_k w_k f(t_k) per level
    increments: np.ndarray  # |values[s] - values[s-1]|

    @property
    def tail_non_increasing(self) -> bool:
        tail = self.increments[-3:]
        return bool(np.all(np.diff(tail) <= 0))


def weak_star_proxy(levels: Sequence[LevelData], f: Callable[[np.ndarray], np.ndarray]) -> WeakStarProxy:
    values = np.array([L.measure.integrate(f(L.measure.nodes)) for L in levels])
    return WeakStarProxy(values, np.abs(np.diff(values)))


def round15(obj):
    """Recursively round floats to 15 significant digits for text output."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {k: round15(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round15(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return round15(obj.tolist())
    if isinstance(obj, np.floating):
        return round15(float(obj))
    return obj


def write_json(path: str | os.PathLike, record: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(round15(record), fh, indent=2, sort_keys=True)
        fh.write("\n")


SUMMARY_COLUMNS = ["level", "p", "log_cap", "pw", "min_W", "min_a", "max_n"]


@dataclass(frozen=True)
class StudyResult:
    root: Path
    report: MechanismReport
    summary: list[dict]


def run_study(
    F: NestedFamily,
    out: str | os.PathLike,
    n_max: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    nodes_per_band: int | None = None,
    cheb_n_max: int | None = None,
) -> StudyResult:
    """Run every level, check the mechanisms, and write the study tree under ``out/label``.

    Levels run sequentially so reruns are bit-identical.
    """
    cheb_n_max = min(n_max, MAX_DEGREE) if cheb_n_max is None else cheb_n_max
    levels = [run_level(U, n_max, s, cfg, nodes_per_band, cheb_n_max) for s, U in enumerate(F.levels)]
    report = theorem3_mechanism_check(F, n_max, cfg, nodes_per_band, levels=levels)
    for L in levels:
        check_lower_bound(L.chebyshev)
        widom_vs_chebyshev(L.widom, L.chebyshev)
    root = Path(out) / F.label
    summary = _write_tree(root, levels)
    return StudyResult(root, report, summary)


def _write_tree(root: Path, levels: Sequence[LevelData]) -> list[dict]:
    summary = []
    for L in levels:
        d = root / f"level_{L.level}"
        d.mkdir(parents=True, exist_ok=True)
        write_json(d / "potential.json", potential_summary(L.potential))
        write_jacobi_csv(d / "jacobi.csv", L.jacobi, L.widom)
        write_widom_csv(d / "widom.csv", L.widom)
        write_chebyshev_csv(d / "chebyshev.csv", L.chebyshev)
        summary.append(
            {
                "level": L.level,
                "p": L.set.p,
                "log_cap": L.potential.log_cap,
                "pw": L.potential.pw,
                "min_W": float(np.exp(L.widom.log_w.min())),
                "min_a": float(L.jacobi.a.min()),
                "max_n": L.jacobi.n_max,
            }
        )
    with open(root / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in summary:
            w.writerow([f"{row[c]:.15g}" if isinstance(row[c], float) else row[c] for c in SUMMARY_COLUMNS])
    return summary


def run_suite(
    sets: Sequence[IntervalUnion],
    label: str,
    out: str | os.PathLike,
    n_max: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    nodes_per_band: int | None = None,
    cheb_n_max: int | None = None,
) -> StudyResult:
    """Unnested version of :func:`run_study`: each set is checked on its own.

    ``level_<i>`` then just indexes the input list; there is no capacity or
    cross-norm comparison between entries.
    """
    cheb_n_max = min(n_max, MAX_DEGREE) if cheb_n_max is None else cheb_n_max
    levels = [run_level(U, n_max, i, cfg, nodes_per_band, cheb_n_max) for i, U in enumerate(sets)]
    for L in levels:
        if L.widom.log_w.min() < math.log(1.0 - W_FLOOR_TOL):
            n = int(np.argmin(L.widom.log_w)) + 1
            raise MechanismViolation(f"W_n >= 1 fails for set {L.level}, n={n}")
        check_lower_bound(L.chebyshev)
        widom_vs_chebyshev(L.widom, L.chebyshev)
    root = Path(out) / label
    return StudyResult(root, MechanismReport(tuple(levels)), _write_tree(root, levels))
