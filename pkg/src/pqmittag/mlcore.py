"""Mittag-Leffler functions: Prabhakar, Shukla-Prajapati and the extended families.

The extended (p, q) function is

    E(z; p, q) = sum_n  B(g+n, c-g; p, q) / B(g, c-g) * (c)_n z^n / (Gamma(a n + b) n!)

with ``B(.,.; p, q)`` the two-parameter extended beta function. Its
coefficients are quadratures; they are computed once per parameter set in a
:class:`BetaRatioTable` and reused for every ``z``. The three integral
representations (unit interval, half line, trigonometric) are evaluated by
quadrature with the inner Prabhakar function summed directly, so they share
no coefficients with the series route.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy import special

from .extbeta import beta_classical, beta_pq_many
from .numcore import (KERNEL_QUAD, DomainError, EvalResult, QuadConfig, Scheme, Status,
                      _scipy_quad, de_finite, de_half_line, log_abs_rgamma, sum_series)

__all__ = [
    "MLParams",
    "SeriesConfig",
    "BetaRatioTable",
    "ml_prabhakar",
    "prabhakar_array",
    "ml_shukla",
    "ml_extended_p",
    "ml_extended_pq",
    "ml_integral_unit",
    "ml_integral_halfline",
    "ml_integral_trig",
    "ml_term_derivative",
    "ml_recurrence_residual",
    "extended_series",
]


@dataclass(frozen=True)
class MLParams:
    """Parameters ``(alpha, beta, gamma, c, p, q)`` of the extended function."""

    alpha: float
    beta_: float
    gamma_: float
    c: float
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta_ > 0):
            raise DomainError("alpha and beta must be positive")
        if not (self.c > self.gamma_ > 0):
            raise DomainError(f"need c > gamma > 0, got gamma={self.gamma_}, c={self.c}")
        if not (self.p >= 0 and self.q >= 0):
            raise DomainError("p and q must be non-negative")

    def with_(self, **changes) -> "MLParams":
        fields = dict(alpha=self.alpha, beta_=self.beta_, gamma_=self.gamma_, c=self.c,
                      p=self.p, q=self.q)
        fields.update(changes)
        return MLParams(**fields)


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-12
    max_terms: int = 2000
    tail_guard: int = 3

    def __post_init__(self):
        if self.max_terms < 1 or self.tail_guard < 1:
            raise ValueError("max_terms and tail_guard must be >= 1")


DEFAULT_SERIES = SeriesConfig()


# ---------------------------------------------------------------------------
# log-space coefficient helpers

def _log_poch(a: float, n: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(log|(a)_n|, sign) for integer arrays ``n``; exact zeros when a is a non-positive integer."""
    n = np.asarray(n, dtype=float)
    if a > 0:
        return special.gammaln(a + n) - special.gammaln(a), np.ones_like(n)
    if a == math.floor(a):
        # terminating: (a)_n = 0 once n > -a
        out = np.empty_like(n)
        sgn = np.empty_like(n)
        for i, m in enumerate(n.astype(int)):
            if m > -a:
                out[i], sgn[i] = -np.inf, 0.0
            else:
                vals = a + np.arange(m)
                out[i] = float(np.sum(np.log(np.abs(vals)))) if m else 0.0
                sgn[i] = float(np.prod(np.sign(vals))) if m else 1.0
        return out, sgn
    with np.errstate(all="ignore"):
        lg = special.gammaln(a + n) - special.gammaln(a)
        sgn = special.gammasgn(a + n) * special.gammasgn(a)
    return lg, sgn


def _power_terms(log_coef, sign, k, z):
    """``coef * z**k / k!`` from a log-magnitude and sign, with 0**0 = 1."""
    k = np.asarray(k, dtype=float)
    lf = special.gammaln(k + 1.0)
    if z == 0.0:
        zero = k == 0
        with np.errstate(over="ignore", under="ignore"):
            vals = np.where(zero, sign * np.exp(np.where(zero, log_coef, 0.0)), 0.0)
        return vals
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        mag = np.exp(log_coef + k * math.log(abs(z)) - lf)
    zs = np.where(k % 2 == 1, math.copysign(1.0, z), 1.0)
    return np.where(sign == 0, 0.0, sign * zs * mag)


def _first_regular_index(alpha: float, beta: float) -> int:
    """Smallest n with alpha*n + beta > 0; reciprocal-gamma zeros can only occur before it."""
    if beta > 0:
        return 0
    return int(math.floor(-beta / alpha)) + 1


# ---------------------------------------------------------------------------
# Prabhakar and Shukla-Prajapati series

def _prabhakar_terms(rho, sigma, g, z):
    def terms(lo, hi):
        n = np.arange(lo, hi)
        lp, sp = _log_poch(g, n)
        lr, sr = log_abs_rgamma(rho * n + sigma)
        return _power_terms(lp + lr, sp * sr, n, z)
    return terms


def ml_prabhakar(rho: float, sigma: float, gamma_: float, z: float,
                 cfg: SeriesConfig = DEFAULT_SERIES) -> EvalResult:
    """Three-parameter Mittag-Leffler function ``sum (gamma)_n z^n / (Gamma(rho n + sigma) n!)``."""
    if not (rho > 0 and sigma > 0):
        raise DomainError("ml_prabhakar requires rho > 0 and sigma > 0")
    return sum_series(_prabhakar_terms(rho, sigma, gamma_, z), cfg.rel_tol, cfg.max_terms,
                      cfg.tail_guard)


@lru_cache(maxsize=512)
def _prabhakar_coefficients(rho: float, sigma: float, g: float, radius: float,
                            rel_tol: float) -> np.ndarray:
    """Coefficients ``(g)_n / (Gamma(rho n + sigma) n!)`` sufficient for |x| <= radius."""
    n_min = _first_regular_index(rho, sigma)
    res = sum_series(_prabhakar_terms(rho, sigma, g, radius), rel_tol, 4000, 3, n_min)
    if res.status is not Status.CONVERGED and not math.isfinite(res.value):
        raise DomainError(f"Prabhakar series does not converge at |x| = {radius}")
    n = np.arange(res.effort + 2)
    lp, sp = _log_poch(g, n)
    lr, sr = log_abs_rgamma(rho * n + sigma)
    with np.errstate(under="ignore"):
        coef = sp * sr * np.exp(lp + lr - special.gammaln(n + 1.0))
    coef.setflags(write=False)
    return coef


def prabhakar_array(rho: float, sigma: float, gamma_: float, x,
                    rel_tol: float = 1e-15) -> np.ndarray:
    """Vectorised Prabhakar function by Horner evaluation of a truncated series."""
    x = np.asarray(x, dtype=float)
    radius = float(np.max(np.abs(x))) if x.size else 0.0
    # round the radius up so nearby calls share cached coefficients
    if radius > 0:
        radius = float(2.0 ** (math.ceil(8 * math.log2(radius)) / 8))
    coef = _prabhakar_coefficients(float(rho), float(sigma), float(gamma_), radius, rel_tol)
    out = np.zeros_like(x)
    for a in coef[::-1]:
        out = out * x + a
    return out


def ml_shukla(rho: float, sigma: float, delta: float, k: int, z: float,
              cfg: SeriesConfig = DEFAULT_SERIES) -> EvalResult:
    """``sum (delta)_{k n} z^n / (Gamma(rho n + sigma) n!)``.

    Entire when ``k < rho + 1``; for ``k == rho + 1`` the radius of
    convergence is ``rho**rho / k**k`` and outside it the result carries
    status tolerance-not-met.
    """
    if not (rho > 0 and sigma > 0):
        raise DomainError("ml_shukla requires rho > 0 and sigma > 0")
    k = int(k)
    if k < 1:
        raise DomainError("ml_shukla requires a positive integer k")

    def terms(lo, hi):
        n = np.arange(lo, hi)
        lp, sp = _log_poch(delta, k * n)
        lr, sr = log_abs_rgamma(rho * n + sigma)
        return _power_terms(lp + lr, sp * sr, n, z)
    return sum_series(terms, cfg.rel_tol, cfg.max_terms, cfg.tail_guard)


# ---------------------------------------------------------------------------
# extended coefficients

class BetaRatioTable:
    """Ratios ``B(g + n, c - g; p, q) / B(g, c - g)`` for n = 0, 1, ..., grown on demand.

    Entries are never modified once computed; growth is serialised by a lock
    so a shared table is safe to read from several threads.
    """

    def __init__(self, gamma_: float, c: float, p: float, q: float,
                 qcfg: QuadConfig = KERNEL_QUAD, single: bool = False):
        self.gamma_, self.c, self.p, self.q = gamma_, c, p, q
        self.qcfg = qcfg
        self.single = single
        self.norm = beta_classical(gamma_, c - gamma_)
        self._vals = np.empty(0)
        self._errs = np.empty(0)
        self._ok = np.empty(0, dtype=bool)
        self.effort = 0
        self._lock = threading.Lock()

    def __len__(self):
        return self._vals.size

    def upto(self, n: int):
        """(ratios, absolute errors, converged flags) for indices ``0 <= i < n``."""
        if n > self._vals.size:
            with self._lock:
                have = self._vals.size
                if n > have:
                    want = max(n, 2 * have, 16)
                    xs = self.gamma_ + np.arange(have, want)
                    v, e, effort, ok = beta_pq_many(xs, self.c - self.gamma_, self.p, self.q,
                                                    self.qcfg, single=self.single)
                    self._vals = np.concatenate([self._vals, v / self.norm])
                    self._errs = np.concatenate([self._errs, e / self.norm])
                    self._ok = np.concatenate([self._ok, ok])
                    self.effort += effort
        return self._vals[:n], self._errs[:n], self._ok[:n]


@lru_cache(maxsize=256)
def _ratio_table(gamma_, c, p, q, qcfg, single=False) -> BetaRatioTable:
    return BetaRatioTable(gamma_, c, p, q, qcfg, single)


def _majorant_horizon(alpha, beta, gamma_, z, cfg) -> int:
    """Terms needed by the Prabhakar majorant ``E^gamma_{alpha,beta}(|z|)``."""
    if z == 0:
        return 1
    n_min = _first_regular_index(alpha, beta)
    res = sum_series(_prabhakar_terms(alpha, beta, gamma_, abs(z)), cfg.rel_tol,
                     cfg.max_terms, cfg.tail_guard, n_min)
    return res.effort


def extended_series(alpha: float, beta: float, gamma_: float, c: float, p: float, q: float,
                    z: float, cfg: SeriesConfig = DEFAULT_SERIES,
                    qcfg: Optional[QuadConfig] = None, shift: int = 0,
                    single: bool = False) -> EvalResult:
    """Extended series with unrestricted ``beta`` and an index shift.

    Returns ``sum_k R_{k+s} (c)_{k+s} z^k / (Gamma(alpha (k+s) + beta) k!)`` with
    ``R_n`` the beta ratio, which is the ``s``-th derivative of the series.
    ``beta`` may be zero or negative; reciprocal-gamma zeros then drop terms.
    No parameter validation beyond what the quadrature needs.
    """
    qcfg = qcfg or KERNEL_QUAD
    table = _ratio_table(float(gamma_), float(c), float(p), float(q), qcfg, single)
    table.upto(_majorant_horizon(alpha, beta, gamma_, z, cfg) + shift + cfg.tail_guard + 1)
    failed = []

    def terms(lo, hi):
        k = np.arange(lo, hi)
        m = k + shift
        ratio, _, ok = table.upto(hi + shift)
        if not np.all(ok[lo + shift:]):
            failed.append(lo)
        lp, sp = _log_poch(c, m)
        lr, sr = log_abs_rgamma(alpha * m + beta)
        return ratio[lo + shift:] * _power_terms(lp + lr, sp * sr, k, z)

    def coef_err(used):
        ratio, err, _ = table.upto(used.size + shift)
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(ratio[shift:] > 0, err[shift:] / ratio[shift:], 0.0)
        return float(np.sum(np.abs(used) * rel))

    n_min = max(0, _first_regular_index(alpha, beta) - shift)
    res = sum_series(terms, cfg.rel_tol, cfg.max_terms, cfg.tail_guard, n_min, coef_err)
    if failed and res.converged:
        res = EvalResult(res.value, res.abs_err_est, res.effort, Status.TOLERANCE_NOT_MET)
    return res


def ml_extended_pq(params: MLParams, z: float, cfg: SeriesConfig = DEFAULT_SERIES,
                   qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Extended (p, q) Mittag-Leffler function by its power series."""
    return extended_series(params.alpha, params.beta_, params.gamma_, params.c, params.p,
                           params.q, z, cfg, qcfg)


def ml_extended_p(params: MLParams, z: float, cfg: SeriesConfig = DEFAULT_SERIES,
                  qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """One-parameter extended function; coefficients use the ``exp(-p/(t(1-t)))`` kernel."""
    if params.p != params.q:
        raise DomainError("ml_extended_p needs params with p == q")
    return extended_series(params.alpha, params.beta_, params.gamma_, params.c, params.p,
                           params.p, z, cfg, qcfg, single=True)


def ml_term_derivative(params: MLParams, z: float, n: int, cfg: SeriesConfig = DEFAULT_SERIES,
                       qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Exact ``n``-th derivative in ``z`` by differentiating the series term by term."""
    n = int(n)
    if n < 0:
        raise DomainError("derivative order must be non-negative")
    return extended_series(params.alpha, params.beta_, params.gamma_, params.c, params.p,
                           params.q, z, cfg, qcfg, shift=n)


def ml_recurrence_residual(params: MLParams, z: float, cfg: SeriesConfig = DEFAULT_SERIES,
                           qcfg: Optional[QuadConfig] = None) -> float:
    """``E_b(z) - [b E_{b+1}(z) + a z E'_{b+1}(z)]``; zero up to rounding."""
    up = params.with_(beta_=params.beta_ + 1.0)
    lhs = ml_extended_pq(params, z, cfg, qcfg)
    e1 = ml_extended_pq(up, z, cfg, qcfg)
    d1 = ml_term_derivative(up, z, 1, cfg, qcfg)
    return lhs.value - (params.beta_ * e1.value + params.alpha * z * d1.value)


# ---------------------------------------------------------------------------
# integral representations

def _kernel_result(vals, est, effort, ok, finite, scale) -> EvalResult:
    status = Status.CONVERGED if ok[0] else (
        Status.TOLERANCE_NOT_MET if finite[0] else Status.DOMAIN_ERROR)
    return EvalResult(float(vals[0]) * scale, float(est[0]) * abs(scale), effort, status)


def _quad_unit(g, qcfg: QuadConfig, scale: float, a: float = 0.0, b: float = 1.0):
    if qcfg.scheme is Scheme.ADAPTIVE:
        res = _scipy_quad(lambda t: float(g(np.array([t]), np.array([t - a]),
                                            np.array([b - t]))[0]), a, b, qcfg)
        return EvalResult(res.value * scale, res.abs_err_est * abs(scale), res.effort, res.status)
    return _kernel_result(*de_finite(g, a, b, qcfg.rel_tol, qcfg.abs_tol, qcfg.max_refinements),
                          scale)


def _inner(params: MLParams, x):
    return prabhakar_array(params.alpha, params.beta_, params.c, x)


def ml_integral_unit(params: MLParams, z: float, qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Extended function as a weighted integral of ``E^c_{alpha,beta}(t z)`` over (0, 1)."""
    qcfg = qcfg or KERNEL_QUAD
    g_, c, p, q = params.gamma_, params.c, params.p, params.q

    def g(t, da, db):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lk = (g_ - 1.0) * np.log(da) + (c - g_ - 1.0) * np.log(db) - p / da - q / db
            w = np.exp(lk)
        return np.where(w > 0, w * _inner(params, da * z), 0.0)
    return _quad_unit(g, qcfg, 1.0 / beta_classical(g_, c - g_))


def ml_integral_halfline(params: MLParams, z: float,
                         qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Half-line form obtained from ``t = u / (1 + u)``."""
    qcfg = qcfg or KERNEL_QUAD
    g_, c, p, q = params.gamma_, params.c, params.p, params.q
    scale = 1.0 / beta_classical(g_, c - g_)

    def f(u):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lk = (g_ - 1.0) * np.log(u) - c * np.log1p(u) - p * (1.0 + u) / u - q * (1.0 + u)
            w = np.exp(lk)
        return np.where(w > 0, w * _inner(params, u / (1.0 + u) * z), 0.0)

    if qcfg.scheme is Scheme.ADAPTIVE:
        def mapped(t):
            s = 1.0 - t
            return float(f(np.array([t / s]))[0]) / (s * s)
        res = _scipy_quad(mapped, 0.0, 1.0, qcfg)
        return EvalResult(res.value * scale, res.abs_err_est * scale, res.effort, res.status)
    return _kernel_result(*de_half_line(f, qcfg.rel_tol, qcfg.abs_tol, qcfg.max_refinements),
                          scale)


def ml_integral_trig(params: MLParams, z: float, qcfg: Optional[QuadConfig] = None) -> EvalResult:
    """Trigonometric form obtained from ``t = sin(theta)**2`` on (0, pi/2)."""
    qcfg = qcfg or KERNEL_QUAD
    g_, c, p, q = params.gamma_, params.c, params.p, params.q

    def g(theta, da, db):
        s = np.sin(da)
        co = np.sin(db)  # cos(theta) = sin(pi/2 - theta), accurate near pi/2
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lk = ((2.0 * g_ - 1.0) * np.log(s) + (2.0 * (c - g_) - 1.0) * np.log(co)
                  - p / (s * s) - q / (co * co))
            w = np.exp(lk)
        return np.where(w > 0, w * _inner(params, z * s * s), 0.0)
    return _quad_unit(g, qcfg, 2.0 / beta_classical(g_, c - g_), 0.0, 0.5 * math.pi)
