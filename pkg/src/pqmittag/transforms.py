"""Numerical Mellin transform of the extended function in its (p, q) parameters.

Exchanging the order of integration turns the (p, q) integrals into
``t**s Gamma(s)`` and ``(1-t)**r Gamma(r)``, which leaves one quadrature over
t. That reduced route is the default; ``mode="double"`` integrates over the
quarter plane by brute force instead and is meant for spot checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .extbeta import beta_classical
from .mlcore import DEFAULT_SERIES, MLParams, SeriesConfig, _quad_unit, ml_extended_p, \
    prabhakar_array
from .numcore import (KERNEL_QUAD, DomainError, EvalResult, QuadConfig, Status,
                      _exp_sinh_level, _tanh_sinh_level, quad_semi_infinite)

__all__ = ["MellinPoint", "mellin_numeric", "mellin_diag_numeric"]


@dataclass(frozen=True)
class MellinPoint:
    s: float
    r: float

    def __post_init__(self):
        if not (self.s > 0 and self.r > 0):
            raise DomainError("Mellin point needs s > 0 and r > 0")


def mellin_numeric(params_base: MLParams, pt: MellinPoint, z: float,
                   qcfg: Optional[QuadConfig] = None, mode: str = "reduced") -> EvalResult:
    """Integral of ``p**(s-1) q**(r-1) E(z; p, q)`` over the quarter plane.

    ``params_base.p`` and ``params_base.q`` are ignored; they are the
    integration variables.
    """
    if mode == "double":
        return _mellin_double(params_base, pt, z, qcfg)
    if mode != "reduced":
        raise ValueError("mode must be 'reduced' or 'double'")
    qcfg = qcfg or KERNEL_QUAD
    a, b, g, c = params_base.alpha, params_base.beta_, params_base.gamma_, params_base.c
    s, r = pt.s, pt.r

    def integrand(t, da, db):
        with np.errstate(divide="ignore", under="ignore"):
            w = np.exp((g + s - 1.0) * np.log(da) + (c + r - g - 1.0) * np.log(db))
        return w * prabhakar_array(a, b, c, da * z)

    scale = math.exp(math.lgamma(s) + math.lgamma(r)) / beta_classical(g, c - g)
    return _quad_unit(integrand, qcfg, scale)


def _mellin_double(params: MLParams, pt: MellinPoint, z: float,
                   qcfg: Optional[QuadConfig], t_level: int = 6,
                   max_level: int = 5) -> EvalResult:
    """Tensor-product exp-sinh rule in (p, q) around the t-integral for E(z; p, q).

    E(z; p, q) at every (p, q) node comes from the unit-interval integral
    representation on a fixed tanh-sinh t-grid; nothing is integrated
    analytically. Refinement halves the (p, q) step until two levels agree.
    """
    tol = (qcfg or QuadConfig(rel_tol=1e-6)).rel_tol
    a, b, g, c = params.alpha, params.beta_, params.gamma_, params.c
    s, r = pt.s, pt.r

    # fixed t rule (all levels up to t_level merged)
    ts, ws = [], []
    for lev in range(t_level + 1):
        left, right, w = _tanh_sinh_level(lev)
        ts.append((left, right))
        ws.append(w)
    left = np.concatenate([x[0] for x in ts])
    right = np.concatenate([x[1] for x in ts])
    wt = np.concatenate(ws) * 2.0 ** -t_level
    with np.errstate(divide="ignore", under="ignore"):
        base = wt * np.exp((g - 1.0) * np.log(left) + (c - g - 1.0) * np.log(right))
    base = base * prabhakar_array(a, b, c, left * z) / beta_classical(g, c - g)
    keep = base != 0
    base, inv_l, inv_r = base[keep], 1.0 / left[keep], 1.0 / right[keep]

    def e_grid(pv, qv):
        # E(z; p_i, q_j) for all node pairs, shape (len(pv), len(qv))
        with np.errstate(under="ignore"):
            ep = np.exp(-np.outer(pv, inv_l))            # (P, T)
            eq = np.exp(-np.outer(qv, inv_r))            # (Q, T)
        return (ep * base) @ eq.T

    us, wus = [], []
    prev = None
    effort = 0
    est = math.inf
    for level in range(max_level + 1):
        u, w = _exp_sinh_level(level)
        us.append(u)
        wus.append(w)
        uu = np.concatenate(us)
        ww = np.concatenate(wus) * 2.0 ** -level
        # drop nodes where the kernel has already vanished
        sel = uu < 1e4
        uu, ww = uu[sel], ww[sel]
        with np.errstate(under="ignore", divide="ignore"):
            wp = ww * uu ** (s - 1.0)
            wq = ww * uu ** (r - 1.0)
        val = float(wp @ e_grid(uu, uu) @ wq)
        effort = uu.size ** 2
        if prev is not None:
            est = abs(val - prev)
            if level >= 3 and est <= tol * abs(val):
                return EvalResult(val, est, effort, Status.CONVERGED)
        prev = val
    return EvalResult(prev, est, effort, Status.TOLERANCE_NOT_MET)


def mellin_diag_numeric(params_base: MLParams, z: float, qcfg: Optional[QuadConfig] = None,
                        cfg: SeriesConfig = DEFAULT_SERIES) -> EvalResult:
    """Integral over p in (0, inf) of the one-parameter extended function E(z; p, p)."""
    qcfg = qcfg or QuadConfig(rel_tol=1e-10, abs_tol=1e-300, scheme="double-exponential")
    failures = []

    def f(pv):
        out = np.empty(np.shape(pv))
        for i, p in enumerate(np.ravel(pv)):
            res = ml_extended_p(params_base.with_(p=float(p), q=float(p)), z, cfg)
            if not res.converged:
                failures.append(p)
            out.flat[i] = res.value
        return out

    res = quad_semi_infinite(f, qcfg)
    if failures and res.converged:
        return EvalResult(res.value, res.abs_err_est, res.effort, Status.TOLERANCE_NOT_MET)
    return res
