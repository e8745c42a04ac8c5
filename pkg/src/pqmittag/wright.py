"""Wright generalized hypergeometric series and the closed-form (p, q) Mellin transform."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import special

from .mlcore import DEFAULT_SERIES, MLParams, SeriesConfig, _first_regular_index, _power_terms
from .numcore import DomainError, EvalResult, log_abs_rgamma, sum_series

__all__ = ["WrightSpec", "wright_psi", "mellin_closed_form", "mellin_wright_spec"]

Pair = Tuple[float, float]


@dataclass(frozen=True)
class WrightSpec:
    """Upper pairs ``(a_i, mu_i)`` and lower pairs ``(b_j, lambda_j)``."""

    upper: Tuple[Pair, ...]
    lower: Tuple[Pair, ...]

    def __init__(self, upper: Sequence[Pair], lower: Sequence[Pair]):
        object.__setattr__(self, "upper", tuple((float(a), float(m)) for a, m in upper))
        object.__setattr__(self, "lower", tuple((float(b), float(l)) for b, l in lower))
        if any(m <= 0 for _, m in self.upper) or any(l <= 0 for _, l in self.lower):
            raise DomainError("all Wright slopes must be positive")
        if self.excess < 0:
            raise DomainError("Wright series diverges: 1 + sum(lambda) - sum(mu) < 0")

    @property
    def excess(self) -> float:
        """``1 + sum(lambda_j) - sum(mu_i)``; positive means an entire function."""
        return 1.0 + sum(l for _, l in self.lower) - sum(m for _, m in self.upper)

    @property
    def radius(self) -> float:
        if self.excess > 0:
            return math.inf
        num = math.prod(l ** l for _, l in self.lower)
        den = math.prod(m ** m for _, m in self.upper)
        return num / den


def wright_psi(spec: WrightSpec, z: float, cfg: SeriesConfig = DEFAULT_SERIES) -> EvalResult:
    """``sum_n prod Gamma(a_i + mu_i n) / prod Gamma(b_j + lambda_j n) * z^n / n!``.

    Lower-gamma poles contribute zero terms; an upper-gamma pole makes the
    series undefined and raises :class:`DomainError`.
    """
    if spec.excess == 0 and not abs(z) < spec.radius:
        raise DomainError(f"|z| = {abs(z)} outside the radius of convergence {spec.radius}")

    def terms(lo, hi):
        n = np.arange(lo, hi, dtype=float)
        log_mag = np.zeros_like(n)
        sign = np.ones_like(n)
        for a, m in spec.upper:
            arg = a + m * n
            if np.any((arg <= 0) & (arg == np.floor(arg))):
                raise DomainError(f"upper gamma argument hits a pole for pair ({a}, {m})")
            log_mag += special.gammaln(arg)
            sign *= special.gammasgn(arg)
        for b, l in spec.lower:
            lr, sr = log_abs_rgamma(b + l * n)
            log_mag += lr
            sign *= sr
        return _power_terms(log_mag, sign, n, z)

    n_min = max([_first_regular_index(l, b) for b, l in spec.lower] + [0])
    return sum_series(terms, cfg.rel_tol, cfg.max_terms, cfg.tail_guard, n_min)


def mellin_wright_spec(params: MLParams, s: float, r: float,
                       lower_slope: str = "alpha") -> WrightSpec:
    """The 2-Psi-2 appearing in the (p, q) Mellin transform.

    ``lower_slope="alpha"`` gives the lower pair ``(beta, alpha)`` that the
    term-by-term computation produces; ``"gamma"`` gives the variant with
    slope ``gamma``, kept for comparison.
    """
    if lower_slope not in ("alpha", "gamma"):
        raise ValueError("lower_slope must be 'alpha' or 'gamma'")
    slope = params.alpha if lower_slope == "alpha" else params.gamma_
    g, c = params.gamma_, params.c
    return WrightSpec([(c, 1.0), (g + s, 1.0)], [(params.beta_, slope), (c + s + r, 1.0)])


def mellin_closed_form(params: MLParams, s: float, r: float, z: float,
                       cfg: SeriesConfig = DEFAULT_SERIES,
                       lower_slope: str = "alpha") -> EvalResult:
    """Mellin transform in (p -> s, q -> r) as a Gamma prefactor times a 2-Psi-2 at ``z``."""
    if not (s > 0 and r > 0):
        raise DomainError("Mellin variables must satisfy s > 0 and r > 0")
    g, c = params.gamma_, params.c
    log_pref = (math.lgamma(s) + math.lgamma(r) + math.lgamma(c + r - g)
                - math.lgamma(g) - math.lgamma(c - g))
    pref = math.exp(log_pref)
    psi = wright_psi(mellin_wright_spec(params, s, r, lower_slope), z, cfg)
    return EvalResult(pref * psi.value, pref * psi.abs_err_est, psi.effort, psi.status)
