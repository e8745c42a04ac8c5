"""Checking identities numerically, including formula variants that do not hold.

Run with ``python demos/02_identities_and_discrepancies.py``.
"""
from pqmittag import MLParams, MellinPoint, mellin_closed_form, mellin_numeric, ml_extended_pq
from pqmittag import ml_recurrence_residual, ml_term_derivative

params = MLParams(alpha=1.0, beta_=1.0, gamma_=1.2, c=2.5, p=0.3, q=0.6)
z = 0.7

# Differentiating term by term shifts gamma, c and beta. The prefactor that
# makes the shift exact is (gamma)_1 = gamma, not (c)_1 = c.
d = ml_term_derivative(params, z, 1).value
shifted = ml_extended_pq(MLParams(1.0, 2.0, 2.2, 3.5, 0.3, 0.6), z).value
print("term-wise derivative      ", d)
print("gamma * shifted function  ", 1.2 * shifted)
print("c * shifted function      ", 2.5 * shifted, " ratio", 2.5 * shifted / d, "= c/gamma", 2.5 / 1.2)

# The three-term recurrence holds to rounding
print("\nrecurrence residual:", ml_recurrence_residual(params, z))

# Mellin transform in (p, q): direct quadrature against the Wright-series
# closed form. The lower Wright pair must carry slope alpha.
pt = MellinPoint(1.5, 2.0)
base = MLParams(0.7, 1.0, 1.2, 2.5)
num = mellin_numeric(base, pt, 0.5)
print("\nMellin, numeric           ", num.value, "+/-", num.abs_err_est)
print("closed form, slope alpha  ", mellin_closed_form(base, pt.s, pt.r, 0.5).value)
print("closed form, slope gamma  ", mellin_closed_form(base, pt.s, pt.r, 0.5, lower_slope="gamma").value)
