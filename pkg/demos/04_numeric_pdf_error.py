"""
How accurate is a density built from a bisected cdf?
====================================================

The five-point stencil has truncation error of order h^4, while the
root-finding tolerance t adds noise of order t/h.  The a = b case has a
closed density, 1/(1+x)^2 at A = 1, to compare against.
"""
import numpy as np

from brf import BrfParams, NumericConfig, error_bound, pdf_grid

p = BrfParams(1.0, 1.0, 1.0)
x = np.logspace(np.log10(0.05), np.log10(20.0), 101)
exact = 1.0 / (1.0 + x) ** 2


def max_error(t, h):
    g = pdf_grid(p, x, NumericConfig(t=t, h=h), space="x")
    return np.max(np.abs(g.densities - exact))


print("truncation regime, t = 1e-14")
prev = None
for h in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
    e = max_error(1e-14, h)
    order = "" if prev is None else f"  order {np.log2(prev / e):.2f}"
    print(f"  h={h:<8g} error {e:.3e}  bound {error_bound(h, 1e-14):.3e}{order}")
    prev = e

print("noise regime, h = 1e-3")
for t in (1e-6, 1e-8, 1e-10):
    print(f"  t={t:<8g} error {max_error(t, 1e-3):.3e}  bound {error_bound(1e-3, t):.3e}")

# the default step balances both terms
for t in (1e-6, 1e-9, 1e-12):
    cfg = NumericConfig(t=t)
    print(f"default h for t={t:g}: {cfg.h:.4g}, error {max_error(t, cfg.h):.3e}")
