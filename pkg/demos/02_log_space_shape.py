"""
The law of z = log x
====================

In log space the density has two exponential tails, with rate 1/b on the
left and 1/a on the right.  The peak splits the probability as sqrt(b) : sqrt(a).
"""
import math

import numpy as np

from brf import BrfParams, charfn_z, density_z, numeric_cdf, tail_density_z, taylor_coeffs, z_stats

p = BrfParams(A=math.e, a=2.0, b=0.5)
s = z_stats(p)
print(f"mean {s.mean:.6f}  (log A + a - b = {1 + 2 - 0.5})")
print(f"variance {s.variance:.6f}  median {s.median:.6f}  mode {s.mode:.6f}")
print(f"mass left of the mode: numeric {numeric_cdf(p, math.exp(s.mode)):.12f}, "
      f"sqrt(b)/(sqrt(a)+sqrt(b)) {s.partition_left:.12f}")

# how quickly the density approaches its exponential asymptotes
z = np.array([-6.0, -4.0, -2.0, 4.0, 8.0, 12.0])
for zi in z:
    side = "left" if zi < s.mode else "right"
    ratio = density_z(p, zi) / tail_density_z(p, zi, side)
    print(f"z = {zi:5.1f}  f / {side} asymptote = {ratio:.4f}")

# local shape near the peak; c3 measures the skew
for a in (1.0, 2.0, 4.0, 8.0):
    tc = taylor_coeffs(BrfParams(1.0, a, 1.0))
    print(f"a={a}: c1={tc.c1:.4f} c2={tc.c2:.4f} c3={tc.c3:.4f} c3/c2={tc.c3 / tc.c2:.4f}")

# the characteristic function is a Beta function on a complex argument
t = np.array([0.0, 0.5, 1.0, 2.0])
print("psi(t) =", np.round(charfn_z(p, t), 6))
