"""Riemann-Liouville fractional operators with optional exponential kernels.

For a negative order ``lam`` the operator is the fractional integral

    1/Gamma(-lam) * int_0^x f(tau) (x - tau)**(-lam - 1) K(tau, x) dtau

with ``K = 1`` (classical), ``exp(-p x^2 / (tau (x - tau)))`` or
``exp(-p x / tau - q x / (x - tau))``. For ``m - 1 < lam < m`` the operator is
the m-th x-derivative of the integral of order ``lam - m``; that outer
derivative is taken by a central finite-difference stencil.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from .mlcore import DEFAULT_SERIES, MLParams, SeriesConfig, ml_extended_pq, prabhakar_array
from .numcore import (KERNEL_QUAD, DomainError, EvalResult, QuadConfig, Scheme, Status,
                      _as_vectorised, de_finite, rgamma)

__all__ = [
    "FracOrder",
    "ExtKernelParams",
    "rl_frac",
    "rl_frac_pos",
    "rl_ext_p",
    "rl_ext_pq",
    "frac_ml_pair",
    "make_integrand",
    "INTEGRANDS",
]


@dataclass(frozen=True)
class FracOrder:
    lambda_: float
    m: int = 0

    def __post_init__(self):
        lam, m = self.lambda_, int(self.m)
        if lam < 0 and m != 0:
            raise DomainError("a negative order must have m = 0")
        if lam >= 0 and not (m >= 1 and m - 1 < lam < m):
            raise DomainError(f"order {lam} needs m with m - 1 < lambda < m (got m={m})")

    @classmethod
    def of(cls, lam: float) -> "FracOrder":
        lam = float(lam)
        if lam < 0:
            return cls(lam, 0)
        return cls(lam, int(math.ceil(lam)) if lam != math.ceil(lam) else int(lam) + 1)


@dataclass(frozen=True)
class ExtKernelParams:
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if not (self.p >= 0 and self.q >= 0):
            raise DomainError("kernel parameters must be non-negative")


# log K(tau, x) given tau, x - tau and x
LogKernel = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


def _classical(da, db, x):
    return 0.0


def _kernel_p(p: float) -> LogKernel:
    return lambda da, db, x: -p * x * x / (da * db)


def _kernel_pq(p: float, q: float) -> LogKernel:
    return lambda da, db, x: -p * x / da - q * x / db


def _frac_integral(f: Callable, nu: float, x: float, log_kernel: LogKernel,
                   qcfg: QuadConfig) -> EvalResult:
    """``1/Gamma(nu) int_0^x f(tau) (x-tau)^(nu-1) K dtau`` for ``nu > 0``."""
    if not x > 0:
        raise DomainError("fractional operators need x > 0")
    fv = _as_vectorised(f)
    scale = rgamma(nu)

    if qcfg.scheme is Scheme.ADAPTIVE:
        def h(tau):
            with np.errstate(all="ignore"):
                k = math.exp(float(np.asarray(log_kernel(np.array([tau]), np.array([x - tau]), x)
                                              ).ravel()[0])) if log_kernel is not _classical else 1.0
            return float(fv(np.array([tau]))[0]) * k if k > 0 else 0.0
        with np.errstate(all="ignore"):
            val, err, info, *rest = integrate.quad(
                h, 0.0, x, weight="alg", wvar=(0.0, nu - 1.0), epsabs=qcfg.abs_tol,
                epsrel=qcfg.rel_tol, limit=max(50, 10 * qcfg.max_refinements), full_output=1)
        ok = not rest and err <= qcfg.target(val)
        return EvalResult(val * scale, err * scale, info["neval"],
                          Status.CONVERGED if ok else Status.TOLERANCE_NOT_MET)

    def g(tau, da, db):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            w = np.exp((nu - 1.0) * np.log(db) + log_kernel(da, db, x))
        out = np.zeros_like(tau)
        live = w > 0
        out[live] = w[live] * fv(tau[live])
        return out

    vals, est, effort, ok, finite = de_finite(g, 0.0, x, qcfg.rel_tol, qcfg.abs_tol,
                                              qcfg.max_refinements)
    status = Status.CONVERGED if ok[0] else (
        Status.TOLERANCE_NOT_MET if finite[0] else Status.DOMAIN_ERROR)
    return EvalResult(float(vals[0]) * scale, float(est[0]) * scale, effort, status)


def _stencil(m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Central offsets and weights for the m-th derivative, fourth order accurate."""
    k = (m + 1) // 2 + 1
    offsets = np.arange(-k, k + 1, dtype=float)
    n = offsets.size
    vander = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[m] = math.factorial(m)
    return offsets, np.linalg.solve(vander, rhs)


def _outer_derivative(inner: Callable[[float], EvalResult], m: int, x: float,
                      rel_tol: float) -> EvalResult:
    offsets, weights = _stencil(m)
    span = float(np.max(offsets))
    # optimal step for a 4th-order stencil on data with relative noise ~rel_tol
    h = x * max(rel_tol, 1e-15) ** (1.0 / (m + 4))
    h = min(h, 0.5 * x / (2 * span))

    def diff(step):
        vals = [inner(x + o * step) for o in offsets]
        noise = sum(abs(w) * v.abs_err_est for w, v in zip(weights, vals)) / step ** m
        bad = any(not v.converged for v in vals)
        d = math.fsum(w * v.value for w, v in zip(weights, vals)) / step ** m
        return d, noise, bad, sum(v.effort for v in vals)

    d1, n1, bad1, e1 = diff(h)
    d2, n2, bad2, e2 = diff(2 * h)
    err = abs(d1 - d2) / 15.0 + n1  # 4th order: error(2h) ~ 16 error(h)
    # a 4th-order difference of data with relative noise eps resolves ~eps**(4/(m+4))
    target = 10.0 * max(rel_tol, 1e-15) ** (4.0 / (m + 4)) * abs(d1)
    ok = not (bad1 or bad2) and err <= max(target, 1e-300)
    return EvalResult(d1, err, e1 + e2, Status.CONVERGED if ok else Status.TOLERANCE_NOT_MET)


def _apply(f, order: FracOrder, x: float, log_kernel: LogKernel,
           qcfg: Optional[QuadConfig]) -> EvalResult:
    qcfg = qcfg or KERNEL_QUAD
    if order.lambda_ < 0:
        return _frac_integral(f, -order.lambda_, x, log_kernel, qcfg)
    nu = order.m - order.lambda_
    return _outer_derivative(lambda y: _frac_integral(f, nu, y, log_kernel, qcfg),
                             order.m, x, qcfg.rel_tol)


def _need_negative(order: FracOrder):
    if not order.lambda_ < 0:
        raise DomainError("this operator takes a negative order; use the positive-order form")


def rl_frac(f: Callable, order: FracOrder, x: float,
            qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Classical Riemann-Liouville fractional integral (order < 0)."""
    _need_negative(order)
    return _apply(f, order, x, _classical, qcfg)


def rl_frac_pos(f: Callable, order: FracOrder, x: float,
                qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Classical Riemann-Liouville fractional derivative for ``m - 1 < order < m``."""
    if order.lambda_ < 0:
        raise DomainError("rl_frac_pos takes a non-negative order")
    return _apply(f, order, x, _classical, qcfg)


def rl_ext_p(f: Callable, order: FracOrder, x: float, p: float,
             qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Operator with kernel ``exp(-p x^2 / (tau (x - tau)))``; any admissible order."""
    if not p >= 0:
        raise DomainError("p must be non-negative")
    return _apply(f, order, x, _kernel_p(p) if p else _classical, qcfg)


def rl_ext_pq(f: Callable, order: FracOrder, x: float, kp: ExtKernelParams,
              qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Operator with kernel ``exp(-p x / tau - q x / (x - tau))``; any admissible order."""
    kernel = _kernel_pq(kp.p, kp.q) if (kp.p or kp.q) else _classical
    return _apply(f, order, x, kernel, qcfg)


def frac_ml_pair(delta: float, lam: float, alpha: float, beta_: float, kp: ExtKernelParams,
                 z: float, qcfg: Optional[QuadConfig] = None,
                 cfg: SeriesConfig = DEFAULT_SERIES,
                 c: Optional[float] = None) -> Tuple[EvalResult, EvalResult]:
    """Both sides of the fractional-integral identity for ``tau^(delta-1) E^c_{alpha,beta}(tau)``.

    Left: the (p, q)-kernel operator of order ``delta - lam`` applied to
    ``tau^(delta-1) E^c_{alpha,beta}(tau)`` at ``x = z``.
    Right: ``z^(lam-1) B(delta, c-delta) / Gamma(lam-delta) * E^{delta,lam}_{alpha,beta}(z; p, q)``.
    The sides agree when ``c == lam`` (the default), where the right side is
    ``z^(lam-1) Gamma(delta)/Gamma(lam) E^{delta,lam}``. Passing another ``c``
    evaluates the identity with an unmatched upper index, which does not hold.
    """
    if not (lam > delta > 0):
        raise DomainError("need lam > delta > 0")
    if not (alpha > 0 and beta_ > 0 and z > 0):
        raise DomainError("need alpha, beta > 0 and z > 0")
    c = lam if c is None else float(c)
    if not c > delta:
        raise DomainError("need c > delta")

    def f(tau):
        with np.errstate(divide="ignore"):
            return tau ** (delta - 1.0) * prabhakar_array(alpha, beta_, c, tau)

    lhs = rl_ext_pq(f, FracOrder.of(delta - lam), z, kp, qcfg)
    ext = ml_extended_pq(MLParams(alpha, beta_, delta, lam, kp.p, kp.q), z, cfg)
    log_fac = ((lam - 1.0) * math.log(z) + math.lgamma(delta) + math.lgamma(c - delta)
               - math.lgamma(c) - math.lgamma(lam - delta))
    fac = math.exp(log_fac)
    rhs = EvalResult(fac * ext.value, fac * ext.abs_err_est, ext.effort, ext.status)
    return lhs, rhs


# ---------------------------------------------------------------------------
# named integrands for command-line use

def _monomial(a: float = 1.0):
    return lambda t: np.asarray(t, dtype=float) ** a


def _exponential(k: float = 1.0):
    return lambda t: np.exp(k * np.asarray(t, dtype=float))


def _prabhakar(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0):
    return lambda t: prabhakar_array(alpha, beta, gamma, np.asarray(t, dtype=float))


def _extended(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0, c: float = 2.0,
              p: float = 0.0, q: float = 0.0):
    params = MLParams(alpha, beta, gamma, c, p, q)

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.array([ml_extended_pq(params, float(v)).value for v in t.ravel()]).reshape(t.shape)
    return f


INTEGRANDS = {
    "monomial": _monomial,
    "exponential": _exponential,
    "prabhakar-ml": _prabhakar,
    "extended-ml": _extended,
}


def make_integrand(name: str, **params) -> Callable:
    """Build a vectorised integrand from :data:`INTEGRANDS` by name."""
    try:
        factory = INTEGRANDS[name]
    except KeyError:
        raise DomainError(f"unknown integrand {name!r}; choose from {sorted(INTEGRANDS)}") from None
    return factory(**params)
