"""Fractional integrals and derivatives with exponential kernels.

Run with ``python demos/03_fractional_operators.py``.
"""
import math

import numpy as np

from pqmittag import ExtKernelParams, FracOrder, frac_ml_pair, rl_ext_pq, rl_frac, rl_frac_pos

square = lambda t: np.asarray(t, dtype=float) ** 2

# Half-integral of t^2: Gamma(3)/Gamma(3.5) x^2.5
for x in (0.5, 1.0, 2.0):
    got = rl_frac(square, FracOrder.of(-0.5), x).value
    print(f"I^0.5 t^2 at x={x}: {got:.15f}  exact {math.gamma(3) / math.gamma(3.5) * x ** 2.5:.15f}")

# Half-derivative: an outer finite difference on the order -0.5 integral
d = rl_frac_pos(square, FracOrder.of(0.5), 1.0)
print(f"\nD^0.5 t^2 at 1: {d.value:.12f} +/- {d.abs_err_est:.1e}  exact {2 / math.gamma(2.5):.12f}")

# The exponential kernel damps the integral; p = q = 0 recovers the classical one
for p, q in [(0, 0), (0.1, 0.1), (0.3, 0.6), (1, 1)]:
    v = rl_ext_pq(square, FracOrder.of(-0.5), 1.0, ExtKernelParams(p, q)).value
    print(f"kernel p={p}, q={q}: {v:.12f}")

# Applied to t^(delta-1) E^lam(t), the (p, q) operator lands on the extended function
lhs, rhs = frac_ml_pair(1.2, 2.5, 1.0, 1.5, ExtKernelParams(0.3, 0.7), 0.8)
print(f"\nquadrature side {lhs.value:.15f}\nclosed-form side {rhs.value:.15f}")
