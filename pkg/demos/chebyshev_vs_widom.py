# Minimax (Chebyshev) polynomials versus orthogonal polynomials on a
# three-band set. Both normalized by Cap^n: W_n <= M_n and M_n >= 2.
from widomkit import IntervalUnion, build_potential, equilibrium_jacobi, remez_chebyshev, widom_factors

K = IntervalUnion(((-1.0, -0.4), (0.1, 0.5), (0.8, 1.3)))
P = build_potential(K)
W = widom_factors(equilibrium_jacobi(P, 30), P.log_cap)

print(" n     W_n        M_n      certificate gap")
for n in range(1, 31):
    r = remez_chebyshev(K, n, P.log_cap, P.band_mass)
    print(f"{n:2d}  {W.w[n - 1]:.6f}  {r.m:.6f}  {r.cert_gap:.1e}")
