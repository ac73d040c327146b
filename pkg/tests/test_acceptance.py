"""Acceptance criteria, one test per criterion.

Each test prints ``ACCEPTANCE <k> PASS|FAIL: ...`` and the lines are repeated
in the pytest terminal summary.
"""

import filecmp
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, B06, T2_B06
from widomkit.chebyshev import remez_chebyshev
from widomkit.cli import run_command
from widomkit.experiments import cantor_prefix_family, random_unions, run_level, theorem3_mechanism_check
from widomkit.intervals import IntervalUnion
from widomkit.jacobi import (
    DiscreteMeasure,
    brute_force_recurrence,
    equilibrium_jacobi,
    recurrence_coefficients,
    widom_factors,
)
from widomkit.potential import build_potential, equilibrium_density, green_function
from widomkit.tset import estimate_periodic_limit, periodic_partial_products, preimage_bands

SQRT2 = math.sqrt(2.0)


class Checks:
    def __init__(self, k: int, title: str):
        self.k, self.title, self.failures, self.count = k, title, [], 0

    def __call__(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)

    def finish(self) -> None:
        status = "PASS" if not self.failures else "FAIL"
        detail = f"{self.count} checks" if not self.failures else "; ".join(self.failures[:5])
        line = f"ACCEPTANCE {self.k} {status}: {self.title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failures, line


@pytest.fixture(scope="module")
def property_levels():
    """20 seeded random unions plus ternary levels 0..4, each with n <= 40 and Chebyshev data."""
    sets = random_unions(2026, 20) + list(cantor_prefix_family(1 / 3, 4).levels)
    return [run_level(U, 40, i, cheb_n_max=40) for i, U in enumerate(sets)]


def green_probe_points(U: IntervalUnion, count: int) -> list[float]:
    """``count`` distinct points off the set: half in the gaps, the rest outside the hull."""
    lo, hi = U.hull
    in_gaps = count // 2 if U.gaps else 0
    pts = []
    for j in range(in_gaps):
        g0, g1 = U.gaps[j % len(U.gaps)]
        k = j // len(U.gaps)
        per_gap = -(-in_gaps // len(U.gaps))
        pts.append(g0 + (g1 - g0) * (k + 0.5) / per_gap)
    outside = count - in_gaps
    dist = np.geomspace(1e-3, 3.0, -(-outside // 2))
    pts += [hi + d for d in dist] + [lo - d for d in dist]
    return pts[:count]


def test_criterion_1_single_interval():
    c = Checks(1, "single-interval closed forms")
    P = build_potential(IntervalUnion(((-1.0, 1.0),)))
    c(abs(P.cap - 0.5) <= 1e-10, f"Cap={P.cap!r}")
    c(abs(equilibrium_density(P, 0.0) - 1 / math.pi) <= 1e-10, "density at 0")
    J = equilibrium_jacobi(P, 50)
    expected = np.full(50, 0.5)
    expected[0] = 1 / SQRT2
    c(np.max(np.abs(J.a - expected)) <= 1e-8, "a_n")
    W = widom_factors(J, P.log_cap)
    c(np.max(np.abs(W.w - SQRT2)) <= 1e-8, "W_n")
    for n in range(1, 21):
        r = remez_chebyshev(P.set, n, P.log_cap, P.band_mass)
        c(abs(r.m - 2.0) <= 1e-8, f"M_{n}={r.m!r}")
    c.finish()


def test_criterion_2_two_band_tset():
    c = Checks(2, "two-band T-set b=0.6 potential quantities")
    T = preimage_bands(T2_B06)
    P = build_potential(B06)
    exact = (2 * 3.125) ** -0.5
    c(abs(math.exp(T.exact_log_cap) - exact) <= 1e-15, "exact cap")
    c(abs(P.cap - exact) <= 1e-8, f"Cap={P.cap!r}")
    c(abs(P.cap - 0.4) <= 1e-8, "Cap vs 0.4")
    c(abs(P.c_points[0]) <= 1e-10, f"c_1={P.c_points[0]!r}")
    c(np.max(np.abs(np.array(P.band_mass) - 0.5)) <= 1e-8, "band masses")
    c(abs(P.pw - math.log(2)) <= 1e-6, "PW")
    from widomkit.potential import szego_integral

    _, residual = szego_integral(P)
    c(residual < 1e-6, f"Szego residual {residual:.2e}")
    c.finish()


def test_criterion_3_tset_widom_limits():
    c = Checks(3, "Widom factors and periodic limit on the b=0.6 set")
    P = build_potential(B06)
    J = equilibrium_jacobi(P, 60)
    W = widom_factors(J, P.log_cap)
    for l in range(1, 16):
        c(abs(W.w[2 * l - 1] - SQRT2) <= 1e-4, f"W_{2 * l}")
    c(abs(W.w.min() - SQRT2) <= 5e-3, f"min W = {W.w.min()!r}")
    c(W.w.min() >= 1 - 1e-6, "W >= 1")
    T = preimage_bands(T2_B06)
    lim = estimate_periodic_limit(J, T.N)
    c(np.max(np.abs(lim.a_prime - [0.8, 0.2])) <= 1e-3, f"a' = {lim.a_prime}")
    r = periodic_partial_products(lim.a_prime, T.exact_log_cap)
    c(abs(r.min() - 1) <= 1e-3 and abs(r[-1] - 1) <= 1e-3, f"partial products {r}")
    c.finish()


def test_criterion_4_widom_lower_bound(property_levels):
    c = Checks(4, "W_n >= 1 on 20 random unions and ternary levels; capacity monotone")
    for L in property_levels:
        c(L.widom.w.min() >= 1 - 1e-6, f"set {L.level}: min W = {L.widom.w.min()!r}")
    for L in property_levels[:20]:
        U = L.set
        widths = [b - a for a, b in U.bands] + [hi - lo for lo, hi in U.gaps]
        c(U.p <= 4 and min(widths) >= 0.05, f"random set {L.level} outside the declared family")
    ternary = property_levels[20:]
    caps = [L.potential.log_cap for L in ternary]
    c(all(b <= a + 1e-9 for a, b in zip(caps, caps[1:])), f"ternary log caps {caps}")
    rep = theorem3_mechanism_check(cantor_prefix_family(1 / 3, 4), 40, levels=ternary)
    c(len(rep.levels) == 5, "mechanism report")
    c.finish()


def test_criterion_5_chebyshev(property_levels):
    c = Checks(5, "Chebyshev suite: M >= 2, certificate, W <= M, T-set exactness")
    for L in property_levels:
        for r in L.chebyshev:
            c(r.m >= 2 - 1e-6, f"set {L.level} M_{r.n}={r.m!r}")
            c(r.cert_gap <= 1e-10, f"set {L.level} n={r.n} certificate gap {r.cert_gap:.2e}")
            c(L.widom.w[r.n - 1] <= r.m + 1e-6, f"set {L.level} W_{r.n} > M_{r.n}")
    for coeffs in (T2_B06, (-3, 0, 1), (-0.5, -4.5, 0, 6), (0.3, -4.5, 0.1, 6)):
        T = preimage_bands(coeffs)
        P = build_potential(T.set)
        for l in range(1, 40 // T.N + 1):
            r = remez_chebyshev(T.set, l * T.N, P.log_cap, P.band_mass)
            c(abs(r.m - 2) <= 1e-6, f"T-set {coeffs} n={l * T.N}: M={r.m!r}")
    c.finish()


def test_criterion_6_oracle_equivalence():
    c = Checks(6, "Lanczos vs exact Gram-Schmidt; node-doubling stability")
    rng = np.random.default_rng(6)
    for _ in range(10):
        nodes = np.sort(rng.uniform(-1, 1, 44))
        weights = rng.uniform(0.05, 1, 44)
        D = DiscreteMeasure(nodes, weights / weights.sum())
        J, ref = recurrence_coefficients(D, 10), brute_force_recurrence(D, 10)
        c(np.max(np.abs(J.a - ref.a)) <= 1e-8 and np.max(np.abs(J.b - ref.b)) <= 1e-8, "random measure")
    for U in [B06, cantor_prefix_family(1 / 3, 3).levels[3], *random_unions(11, 3)]:
        P = build_potential(U)
        a1 = equilibrium_jacobi(P, 20, 256).a
        a2 = equilibrium_jacobi(P, 20, 512).a
        c(np.max(np.abs(a1 - a2)) < 1e-8, f"doubling on {U.bands[:2]}")
    c.finish()


def test_criterion_7_pipeline_algebra():
    c = Checks(7, "log-space Widom identity; Green routes agree")
    sets = [B06, IntervalUnion(((-1.0, 1.0),)), cantor_prefix_family(0.3, 2).levels[2], *random_unions(77, 4)]
    for U in sets:
        P = build_potential(U)
        J = equilibrium_jacobi(P, 40)
        W = widom_factors(J, P.log_cap)
        lhs = W.log_w[:-1]
        rhs = W.log_w[1:] + P.log_cap - np.log(J.a[1:])
        c(np.max(np.abs(lhs - rhs)) <= 1e-12, f"identity on {U.bands[:1]}")
        for x in green_probe_points(U, 20):
            d = abs(green_function(P, x, "line") - green_function(P, x, "potential"))
            c(d <= 1e-7, f"Green routes differ by {d:.2e} at {x}")
    c.finish()


def test_criterion_8_study(tmp_path):
    c = Checks(8, "ternary study depth 4: summary, checks, bit-identical rerun")
    argv = ["study", "--ratio", str(1 / 3), "--depth", "4", "--n-max", "20", "--seed", "1"]
    c(run_command([*argv, "--out", str(tmp_path / "a")]) == 0, "first run exit status")
    c(run_command([*argv, "--out", str(tmp_path / "b")]) == 0, "second run exit status")
    root_a = tmp_path / "a" / "cantor_r0.333333_d4"
    root_b = tmp_path / "b" / "cantor_r0.333333_d4"
    lines = (root_a / "summary.csv").read_text().splitlines()
    c(lines[0] == "level,p,log_cap,pw,min_W,min_a,max_n", "summary header")
    c(len(lines) == 6, "one row per level")
    files = ["summary.csv"] + [f"level_{s}/{n}" for s in range(5) for n in ("potential.json", "jacobi.csv", "widom.csv", "chebyshev.csv")]
    match, mismatch, errors = filecmp.cmpfiles(root_a, root_b, files, shallow=False)
    c(not mismatch and not errors, f"rerun differs: {mismatch + errors}")
    c.finish()
