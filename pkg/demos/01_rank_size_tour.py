"""
A first look at the rank-size function
======================================

x(u) = A (1-u)^b / u^a maps a normalized rank u to a size.  Its inverse,
u(x), is the survival function.  Run with ``python3 demos/01_rank_size_tour.py``.
"""
import numpy as np

from brf import BrfParams, closed_survival, rank_size, special_case_of, survival

# Zipf-like head (a), bounded-looking tail of small values (b)
p = BrfParams(A=1.0, a=0.99, b=0.3)
u = np.array([1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999])
x = rank_size(p, u)
print("u           x(u)")
for ui, xi in zip(u, x):
    print(f"{ui:<10.3g}  {xi:.6g}")

# survival() inverts x(u) by bisection on u
print("\nround trip max |u(x(u)) - u| =", np.max(np.abs(survival(p, x) - u)))

# Seven exponent ratios admit an explicit inverse.  The others need bisection.
for a, b in [(0.8, 0.0), (0.0, 0.8), (0.6, 0.6), (0.8, 0.4), (0.4, 0.8), (0.9, 0.3), (0.3, 0.9), (0.7, 0.2)]:
    q = BrfParams(1.0, a, b)
    tag = special_case_of(q)
    line = f"a={a:<4} b={b:<4} {tag.value:<15}"
    if tag.analytic:
        xs = rank_size(q, np.array([0.05, 0.5, 0.95]))
        line += f" closed u(x) at x(0.05, 0.5, 0.95): {np.round(closed_survival(q, xs), 12)}"
    print(line)
