"""A tour of the extended (p, q) Mittag-Leffler function.

Run with ``python demos/01_evaluating_the_function.py``.
"""
import math

import numpy as np

from pqmittag import (MLParams, beta_classical, beta_pq, ml_extended_pq, ml_integral_halfline,
                      ml_integral_trig, ml_integral_unit, ml_prabhakar)

# The coefficients are ratios of extended beta functions. With p = q = 0 the
# kernel exp(-p/t - q/(1-t)) is 1 and we get back the classical beta.
print("B(2, 3)             =", beta_classical(2, 3))
print("B(2, 3; 0, 0)       =", beta_pq(2, 3, 0, 0).value)
print("B(2, 3; 0.5, 0.25)  =", beta_pq(2, 3, 0.5, 0.25).value)

# Every evaluation returns an EvalResult: value, error estimate, effort, status
params = MLParams(alpha=0.8, beta_=1.1, gamma_=1.2, c=2.5, p=0.3, q=0.6)
res = ml_extended_pq(params, 0.9)
print("\nE(0.9; p, q)  ->", res)

# p = q = 0 collapses to the three-parameter (Prabhakar) function
zero = params.with_(p=0.0, q=0.0)
print("\np = q = 0:", ml_extended_pq(zero, 0.9).value, "vs Prabhakar",
      ml_prabhakar(0.8, 1.1, 1.2, 0.9).value)

# and with gamma = 1, c = 2, alpha = beta = 1 it is simply exp(z)
print("exp check:", ml_extended_pq(MLParams(1, 1, 1, 2), 1.0).value, math.e)

# Four independent routes to the same number: the power series and three
# integral representations (unit interval, half line, trigonometric)
print("\n   z      series              unit                half-line           trig")
for z in np.linspace(-2, 2, 5):
    vals = [f(params, float(z)).value
            for f in (ml_extended_pq, ml_integral_unit, ml_integral_halfline, ml_integral_trig)]
    print(f"{z:5.1f}  " + "  ".join(f"{v:.15f}" for v in vals))

# Increasing p or q damps the coefficients, so the function shrinks
print("\nE(1; p, p) for growing p:")
for p in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0):
    print(f"  p = {p:4.1f}   {ml_extended_pq(params.with_(p=p, q=p), 1.0).value:.12f}")
