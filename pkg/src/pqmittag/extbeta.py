"""Classical and extended Euler beta functions.

``beta_pq`` is the integral over (0, 1) of
``t**(x-1) * (1-t)**(y-1) * exp(-p/t - q/(1-t))``; ``beta_p`` uses the
single-parameter kernel ``exp(-p / (t (1-t)))``. Both reduce to the
classical beta function when the regularising parameters vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from .numcore import (KERNEL_QUAD, DomainError, EvalResult, QuadConfig, Scheme, Status,
                      _scipy_quad, de_finite)

__all__ = ["BetaArgs", "beta_classical", "beta_p", "beta_pq", "beta_pq_many"]


@dataclass(frozen=True)
class BetaArgs:
    x: float
    y: float
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        _check(self.x, self.y, self.p, self.q)


def _check(x, y, p, q):
    if not (x > 0 and y > 0):
        raise DomainError(f"beta requires x > 0 and y > 0, got x={x}, y={y}")
    if not (p >= 0 and q >= 0):
        raise DomainError(f"beta requires p, q >= 0, got p={p}, q={q}")


def beta_classical(x: float, y: float) -> float:
    """Gamma(x) Gamma(y) / Gamma(x + y), formed in log space."""
    _check(x, y, 0.0, 0.0)
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def _log_kernel_pq(x, y, p, q):
    xm1 = np.asarray(x, dtype=float).reshape(-1, 1) - 1.0

    def g(t, da, db):
        with np.errstate(divide="ignore", invalid="ignore"):
            lk = (y - 1.0) * np.log(db)
            if p:
                lk = lk - p / da
            if q:
                lk = lk - q / db
            out = np.exp(xm1 * np.log(da) + lk)
        return out if out.shape[0] > 1 else out[0]
    return g


def _log_kernel_p(x, y, p):
    xm1 = np.asarray(x, dtype=float).reshape(-1, 1) - 1.0

    def g(t, da, db):
        with np.errstate(divide="ignore", invalid="ignore"):
            lk = (y - 1.0) * np.log(db)
            if p:
                lk = lk - p / (da * db)
            out = np.exp(xm1 * np.log(da) + lk)
        return out if out.shape[0] > 1 else out[0]
    return g


def _integrate_unit(g, cfg: QuadConfig) -> EvalResult:
    if cfg.scheme is Scheme.ADAPTIVE:
        return _scipy_quad(lambda t: float(g(np.array([t]), np.array([t]), np.array([1.0 - t]))[0]),
                           0.0, 1.0, cfg)
    vals, est, effort, ok, finite = de_finite(g, 0.0, 1.0, cfg.rel_tol, cfg.abs_tol,
                                              cfg.max_refinements)
    status = Status.CONVERGED if ok[0] else (
        Status.TOLERANCE_NOT_MET if finite[0] else Status.DOMAIN_ERROR)
    return EvalResult(float(vals[0]), float(est[0]), effort, status)


def beta_p(x: float, y: float, p: float, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Extended beta function with the kernel ``exp(-p / (t (1-t)))``."""
    _check(x, y, p, 0.0)
    return _integrate_unit(_log_kernel_p([x], y, p), cfg or KERNEL_QUAD)


def beta_pq(x: float, y: float, p: float, q: float,
            cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Two-parameter extended beta function over (0, 1)."""
    _check(x, y, p, q)
    return _integrate_unit(_log_kernel_pq([x], y, p, q), cfg or KERNEL_QUAD)


def beta_pq_many(xs, y: float, p: float, q: float, cfg: Optional[QuadConfig] = None,
                 single: bool = False):
    """``beta_pq(x, y, p, q)`` for every ``x`` in ``xs``.

    With the double-exponential scheme all rows share one node set, each row
    keeping its own convergence test. Returns ``(values, abs_err_est, effort,
    converged_mask)``. ``single=True`` switches to the one-parameter kernel of
    :func:`beta_p` (``q`` is then ignored).
    """
    cfg = cfg or KERNEL_QUAD
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        return np.empty(0), np.empty(0), 0, np.empty(0, dtype=bool)
    _check(float(xs.min()), y, p, q)
    if cfg.scheme is Scheme.ADAPTIVE:
        res = [beta_p(x, y, p, cfg) if single else beta_pq(x, y, p, q, cfg) for x in xs]
        return (np.array([r.value for r in res]), np.array([r.abs_err_est for r in res]),
                sum(r.effort for r in res), np.array([r.converged for r in res]))
    kernel = _log_kernel_p(xs, y, p) if single else _log_kernel_pq(xs, y, p, q)
    vals, est, effort, ok, _ = de_finite(kernel, 0.0, 1.0, cfg.rel_tol, cfg.abs_tol,
                                         cfg.max_refinements, rows=xs.size)
    return vals, est, effort, ok
