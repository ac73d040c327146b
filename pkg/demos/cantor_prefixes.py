# Widom factors along the first levels of the middle-thirds construction.
# Each level is a finite union of intervals, so W_n >= 1 must hold; what
# happens to min W_n and to the recurrence coefficients as the depth grows
# is only observed here, not predicted.
import numpy as np

from widomkit.experiments import cantor_prefix_family, theorem3_mechanism_check, unboundedness_scan

family = cantor_prefix_family(1 / 3, 4)
report = theorem3_mechanism_check(family, 40)

print("level  bands  capacity       min W_n     min a_n")
for L in report.levels:
    print(
        f"{L.level:5d}  {L.set.p:5d}  {L.potential.cap:.10f}  {L.widom.w.min():.8f}  {L.jacobi.a.min():.8f}"
    )

deepest = report.levels[-1]
scan = unboundedness_scan(deepest.jacobi, deepest.potential.log_cap, 0.9)
print("\nsmall a_n at the deepest level (n, a_n, implied lower bound on W_{n-1}):")
for n, a, bound in scan.flagged[:8]:
    print(f"  {n:3d}  {a:.6f}  {bound:.4f}")

# the norm-minimality comparison against coarser levels, worst case per pair
worst = {pair: float(np.max(r)) for pair, r in report.cross.items()}
print("\nlargest log-norm excess of the own P_n over a coarser level's P_n:", max(worst.values()))
