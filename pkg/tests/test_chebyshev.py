import math

import numpy as np
import pytest

from conftest import B06, T2_B06
from widomkit.chebyshev import (
    check_lower_bound,
    remez_chebyshev,
    sup_norm_on_union,
    widom_vs_chebyshev,
    write_chebyshev_csv,
)
from widomkit.errors import InputError, InvariantViolation, OrderingViolation, StalledExchange
from widomkit.intervals import IntervalUnion
from widomkit.jacobi import WidomSeries, equilibrium_jacobi, widom_factors
from widomkit.potential import build_potential
from widomkit.tset import preimage_bands

UNIT = IntervalUnion(((-1.0, 1.0),))


@pytest.mark.parametrize("n", [1, 3, 8, 20])
def test_interval_is_classical(n):
    r = remez_chebyshev(UNIT, n, math.log(0.5))
    assert r.sup_norm == pytest.approx(2.0 ** (1 - n), rel=1e-12)
    assert r.m == pytest.approx(2.0, abs=1e-10)
    # extrema of the classical polynomial: cos(k pi / n)
    assert np.allclose(np.sort(r.reference), np.sort(np.cos(np.arange(n + 1) * math.pi / n)), atol=1e-8)


def test_unit_interval_degree_one():
    r = remez_chebyshev(IntervalUnion(((0.0, 1.0),)), 1, math.log(0.25))
    assert np.allclose(r.coeffs, [-0.5, 1.0], atol=1e-14)
    assert r.sup_norm == pytest.approx(0.5, rel=1e-14)
    assert r.m == pytest.approx(2.0, rel=1e-14)


def test_two_band_degree_two(two_band):
    r = remez_chebyshev(B06, 2, two_band.log_cap, two_band.band_mass)
    # monic T_2 / c: x^2 - 0.68
    assert np.allclose(r.coeffs, [-0.68, 0.0, 1.0], atol=1e-13)
    assert r.sup_norm == pytest.approx(0.32, rel=1e-12)
    assert r.m == pytest.approx(2.0, abs=1e-9)


def test_alternation_and_certificate(two_band):
    r = remez_chebyshev(B06, 9, two_band.log_cap, two_band.band_mass)
    vals = np.polynomial.Polynomial(r.coeffs)(r.reference)
    assert np.all(np.abs(np.abs(vals) - r.sup_norm) <= 1e-9 * r.sup_norm)
    assert np.all(vals[:-1] * vals[1:] < 0)
    assert r.reference.size == 10
    assert r.cert_gap < 1e-10
    assert r.cert_lower_bound <= r.sup_norm


@pytest.mark.parametrize("coeffs", [T2_B06, (-3, 0, 1), (0.3, -4.5, 0.1, 6)])
def test_tset_exactness(coeffs):
    T = preimage_bands(coeffs)
    P = build_potential(T.set)
    for l in (1, 2, 4):
        r = remez_chebyshev(T.set, l * T.N, P.log_cap, P.band_mass)
        assert r.sup_norm == pytest.approx(2 * (2 * abs(coeffs[-1])) ** (-l), rel=1e-8)


def test_capacity_asymptotics():
    U = IntervalUnion(((0, 1), (1.3, 1.5), (2, 2.2)))
    P = build_potential(U)
    r = remez_chebyshev(U, 30, P.log_cap, P.band_mass)
    assert abs(r.log_sup / 30 - P.log_cap) < 0.05
    assert r.m >= 2 - 1e-6


def test_sup_norm_examples():
    assert sup_norm_on_union([0, 1], UNIT) == pytest.approx(1.0)
    assert sup_norm_on_union([-0.5, 0, 1], UNIT) == pytest.approx(0.5)
    assert sup_norm_on_union([0, 1], IntervalUnion(((-2, -1.2), (1.2, 2)))) == pytest.approx(2.0)
    assert sup_norm_on_union([3.0], UNIT) == pytest.approx(3.0)
    # interior maximum found by polishing: x (1 - x) on [0, 1] peaks at 1/4
    assert sup_norm_on_union([0, 1, -1], IntervalUnion(((0.0, 1.0),)), scan=17) == pytest.approx(0.25, abs=1e-15)


def test_widom_vs_chebyshev(two_band):
    J = equilibrium_jacobi(two_band, 6)
    W = widom_factors(J, two_band.log_cap)
    results = [remez_chebyshev(B06, n, two_band.log_cap, two_band.band_mass) for n in range(1, 7)]
    rows = widom_vs_chebyshev(W, results)
    for row in rows[1::2]:
        assert row["w_n"] == pytest.approx(math.sqrt(2), abs=1e-9)
        assert row["m_n"] == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(OrderingViolation):
        widom_vs_chebyshev(WidomSeries(np.full(6, 5.0)), results)
    with pytest.raises(InputError):
        widom_vs_chebyshev(WidomSeries(np.zeros(2)), results)


def test_lower_bound_check():
    r = remez_chebyshev(UNIT, 2, math.log(0.5))
    check_lower_bound([r])
    with pytest.raises(InvariantViolation):
        check_lower_bound([remez_chebyshev(UNIT, 2, math.log(0.6))])


def test_errors():
    with pytest.raises(InputError):
        remez_chebyshev(UNIT, 0, 0.0)
    with pytest.raises(InputError):
        remez_chebyshev(UNIT, 41, 0.0)
    U = IntervalUnion(((0, 1), (1.3, 1.5), (2, 2.2)))
    with pytest.raises(StalledExchange):
        remez_chebyshev(U, 25, 0.0, max_iter=1)


def test_csv(tmp_path):
    rs = [remez_chebyshev(UNIT, n, math.log(0.5)) for n in (1, 2)]
    write_chebyshev_csv(tmp_path / "c.csv", rs)
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines == ["n,sup_norm,log_m,m_n,cert_lower_bound", "1,1,0.693147180559945,2,1", "2,0.5,0.693147180559945,2,0.5"]
