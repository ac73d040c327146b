# Two symmetric bands [-1,-0.6] u [0.6,1] are the preimage of [-1,1]
# under T(x) = 3.125 x^2 - 2.125, so several quantities are known exactly.
import math

from widomkit import build_potential, equilibrium_jacobi, preimage_bands, widom_factors
from widomkit.tset import estimate_periodic_limit, periodic_partial_products

T = preimage_bands((-2.125, 0.0, 3.125))
print("bands:", T.set.bands)
print("exact capacity:", math.exp(T.exact_log_cap))

P = build_potential(T.set)
print("numeric capacity:", P.cap)
print("critical point of the Green function:", P.c_points)
print("band masses:", P.band_mass)

J = equilibrium_jacobi(P, 40)
W = widom_factors(J, P.log_cap)

# even-index Widom factors sit at sqrt(2), odd ones oscillate above it
print("\n  n      a_n          W_n")
for n in range(1, 13):
    print(f"{n:3d}  {J.a[n - 1]:.10f}  {W.w[n - 1]:.10f}")
print("sqrt(2) =", math.sqrt(2))

lim = estimate_periodic_limit(J, T.N)
print("\nperiod-2 limit of a_n:", lim.a_prime)
print("partial products / Cap^l:", periodic_partial_products(lim.a_prime, T.exact_log_cap))
