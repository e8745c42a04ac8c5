"""Scalar special functions, quadrature and series summation shared by every module.

Two quadrature schemes are available through :class:`QuadConfig`:

``adaptive``
    Adaptive subdivision with an embedded Gauss-Kronrod error estimate
    (QUADPACK through :func:`scipy.integrate.quad`).
``double-exponential``
    Tanh-sinh on finite intervals and exp-sinh on the half line. Nodes are
    generated together with their exact distances to both endpoints, so
    integrands with algebraic end-point singularities (or essential zeros such
    as ``exp(-p/t)``) are evaluated without cancellation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate, special

__all__ = [
    "DomainError",
    "Status",
    "QuadConfig",
    "EvalResult",
    "gamma",
    "rgamma",
    "log_gamma",
    "pochhammer",
    "quad_finite",
    "quad_semi_infinite",
    "de_finite",
    "de_half_line",
    "sum_series",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class Status(str, enum.Enum):
    CONVERGED = "converged"
    TOLERANCE_NOT_MET = "tolerance-not-met"
    DOMAIN_ERROR = "domain-error"


class Scheme(str, enum.Enum):
    ADAPTIVE = "adaptive-subdivision-with-embedded-error"
    DOUBLE_EXPONENTIAL = "double-exponential"


_SCHEME_ALIASES = {
    "adaptive": Scheme.ADAPTIVE,
    "de": Scheme.DOUBLE_EXPONENTIAL,
    "tanh-sinh": Scheme.DOUBLE_EXPONENTIAL,
}


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_refinements: int = 20
    scheme: Scheme = Scheme.ADAPTIVE

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if int(self.max_refinements) < 1:
            raise ValueError("max_refinements must be >= 1")
        scheme = self.scheme
        if not isinstance(scheme, Scheme):
            scheme = _SCHEME_ALIASES.get(scheme) or Scheme(scheme)
            object.__setattr__(self, "scheme", scheme)

    def with_(self, **changes) -> "QuadConfig":
        return replace(self, **changes)

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


#: configuration used by the kernels ``exp(-p/t - q/(1-t))`` unless the caller passes one
KERNEL_QUAD = QuadConfig(rel_tol=1e-13, abs_tol=1e-300, scheme=Scheme.DOUBLE_EXPONENTIAL)


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_err_est: float
    effort: int
    status: Status = Status.CONVERGED

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# gamma family

def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function on the real line; reflection is used for negative ``x``."""
    x = float(x)
    if _is_pole(x):
        raise DomainError(f"gamma has a pole at {x}")
    return math.gamma(x)  # raises OverflowError past ~171.6


def rgamma(x: float) -> float:
    """1/Gamma(x), an entire function: exactly zero at 0, -1, -2, ..."""
    x = float(x)
    if _is_pole(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def log_gamma(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise DomainError("log_gamma requires x > 0")
    return math.lgamma(x)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``a (a+1) ... (a+n-1)``; equals 1 when n == 0."""
    n = int(n)
    if n < 0:
        raise DomainError("pochhammer requires n >= 0")
    if n <= 32:
        out = 1.0
        for k in range(n):
            out *= a + k
        return out
    return float(special.poch(a, n))


def log_pochhammer(a, n):
    """log|(a)_n| for a > 0, vectorised over ``n``."""
    n = np.asarray(n, dtype=float)
    return special.gammaln(a + n) - special.gammaln(a)


def log_abs_rgamma(x):
    """Vectorised ``(log|1/Gamma(x)|, sign)``; sign is 0 at the poles."""
    x = np.asarray(x, dtype=float)
    pole = (x <= 0) & (x == np.floor(x))
    with np.errstate(all="ignore"):
        lg = -special.gammaln(np.where(pole, 1.0, x))
        sgn = special.gammasgn(np.where(pole, 1.0, x))
    return np.where(pole, -np.inf, lg), np.where(pole, 0.0, sgn)


# ---------------------------------------------------------------------------
# double-exponential rules

_DE_TMAX = 6.2          # exp(-pi/2 * e^6.2 / 2) sits right above the double underflow threshold
_DE_HALF_TMIN = -6.6    # exp-sinh left end, u ~ 1e-265
_DE_HALF_TMAX = 6.4     # exp-sinh right end, u ~ 1e+205
_DE_MAX_LEVEL = 12
_EPS = np.finfo(float).eps


@lru_cache(maxsize=64)
def _tanh_sinh_level(level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes new at ``level`` as (fraction from left, fraction from right, weight).

    Weights are for the unit interval and still need the factor ``h``.
    """
    h = 2.0 ** -level
    kmax = int(_DE_TMAX / h)
    if level == 0:
        k = np.arange(-kmax, kmax + 1)
    else:
        k = np.arange(-kmax + (1 - kmax % 2), kmax + 1, 2)  # odd multiples only
    t = k * h
    x = 0.5 * np.pi * np.sinh(t)
    with np.errstate(over="ignore", under="ignore"):
        left = 1.0 / (1.0 + np.exp(-2.0 * x))
        right = 1.0 / (1.0 + np.exp(2.0 * x))
        w = 0.5 * np.pi * np.cosh(t) / (2.0 * np.cosh(x) ** 2)
    keep = (left > 0) & (right > 0) & (w > 0)
    return left[keep], right[keep], w[keep]


@lru_cache(maxsize=64)
def _exp_sinh_level(level: int) -> Tuple[np.ndarray, np.ndarray]:
    h = 2.0 ** -level
    kmin = int(math.ceil(_DE_HALF_TMIN / h))
    kmax = int(math.floor(_DE_HALF_TMAX / h))
    k = np.arange(kmin, kmax + 1)
    if level > 0:
        k = k[k % 2 != 0]
    t = k * h
    u = np.exp(0.5 * np.pi * np.sinh(t))
    w = 0.5 * np.pi * np.cosh(t) * u
    return u, w


def _de_loop(evaluate, nrows, rel_tol, abs_tol, max_level):
    """Drive level refinement for a family of ``nrows`` integrals sharing nodes.

    ``evaluate(level)`` returns (row sums of weight*f over the new nodes, node count).
    Returns (values, error estimates, effort, converged mask, finite mask).
    """
    sums = np.zeros(nrows)
    mags = np.zeros(nrows)
    prev = None
    effort = 0
    est = np.full(nrows, np.inf)
    done = np.zeros(nrows, dtype=bool)
    for level in range(max_level + 1):
        part, mag, count = evaluate(level)
        effort += count
        sums = sums + part
        mags = mags + mag
        cur = sums * 2.0 ** -level
        if prev is not None:
            with np.errstate(invalid="ignore"):
                est = np.abs(cur - prev) + 4.0 * _EPS * mags * 2.0 ** -level
            done = est <= np.maximum(abs_tol, rel_tol * np.abs(cur))
            if level >= 3 and np.all(done | ~np.isfinite(cur)):
                prev = cur
                break
        prev = cur
    finite = np.isfinite(prev)
    return prev, est, effort, done & finite, finite


def de_finite(g: Callable, a: float, b: float, rel_tol: float = 1e-13,
              abs_tol: float = 1e-300, max_level: int = 10, rows: int = 1):
    """Tanh-sinh integral of ``g(t, t - a, b - t)`` over (a, b).

    ``g`` receives 1-D node arrays and returns either an array of the same
    length or, for ``rows > 1``, a ``(rows, nodes)`` array; all rows share the
    nodes and each gets its own value and error estimate.
    """
    width = b - a
    max_level = min(int(max_level), _DE_MAX_LEVEL)

    def evaluate(level):
        left, right, w = _tanh_sinh_level(level)
        da = width * left
        db = width * right
        t = np.where(left <= 0.5, a + da, b - db)
        with np.errstate(all="ignore"):
            vals = np.asarray(g(t, da, db), dtype=float)
            contrib = vals * (w * width)
        contrib = np.atleast_2d(np.where(w == 0, 0.0, contrib))
        return contrib.sum(axis=-1), np.abs(contrib).sum(axis=-1), t.size

    vals, est, effort, ok, finite = _de_loop(evaluate, rows, rel_tol, abs_tol, max_level)
    return vals, est, effort, ok, finite


def de_half_line(g: Callable, rel_tol: float = 1e-13, abs_tol: float = 1e-300,
                 max_level: int = 10, rows: int = 1):
    """Exp-sinh integral of ``g(u)`` over (0, inf); same row convention as :func:`de_finite`."""
    max_level = min(int(max_level), _DE_MAX_LEVEL)

    def evaluate(level):
        u, w = _exp_sinh_level(level)
        with np.errstate(all="ignore"):
            contrib = np.atleast_2d(np.asarray(g(u), dtype=float) * w)
        return contrib.sum(axis=-1), np.abs(contrib).sum(axis=-1), u.size

    return _de_loop(evaluate, rows, rel_tol, abs_tol, max_level)


def _as_vectorised(f: Callable) -> Callable:
    """Wrap a scalar-or-array callable so it always maps arrays to arrays."""
    def g(x):
        try:
            out = np.asarray(f(x), dtype=float)
            if out.shape == np.shape(x):
                return out
            if out.ndim == 0:
                return np.full(np.shape(x), float(out))
        except (TypeError, ValueError):
            pass
        return np.array([float(f(float(xi))) for xi in np.ravel(x)]).reshape(np.shape(x))
    return g


def _status(ok: bool, finite: bool) -> Status:
    if not finite:
        return Status.DOMAIN_ERROR
    return Status.CONVERGED if ok else Status.TOLERANCE_NOT_MET


def _scipy_quad(f, a, b, cfg: QuadConfig) -> EvalResult:
    def scalar(t):
        return float(f(t))
    with np.errstate(all="ignore"):
        value, err, info, *rest = integrate.quad(
            scalar, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
            limit=max(50, 10 * int(cfg.max_refinements)), full_output=1)
    if not math.isfinite(value):
        return EvalResult(value, math.inf, info["neval"], Status.DOMAIN_ERROR)
    ok = not rest and err <= cfg.target(value)
    return EvalResult(value, err, info["neval"], Status.CONVERGED if ok else Status.TOLERANCE_NOT_MET)


def quad_finite(f: Callable, a: float, b: float, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Integral of ``f`` over the open interval (a, b); ``f`` is never called at the end points."""
    cfg = cfg or QuadConfig()
    if not a < b:
        raise DomainError("quad_finite requires a < b")
    if cfg.scheme is Scheme.ADAPTIVE:
        return _scipy_quad(f, a, b, cfg)
    fv = _as_vectorised(f)

    def interior(t, da, db):
        # nodes that round onto an end point are dropped; f never sees a or b
        inside = (t > a) & (t < b)
        out = np.zeros_like(t)
        out[inside] = fv(t[inside])
        return out
    vals, est, effort, ok, finite = de_finite(
        interior, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_refinements)
    return EvalResult(float(vals[0]), float(est[0]), effort, _status(ok[0], finite[0]))


def quad_semi_infinite(f: Callable, cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Integral of ``f`` over (0, inf).

    The adaptive scheme maps the half line onto (0, 1) with ``u = t/(1-t)``;
    the double-exponential scheme uses the exp-sinh transform directly.
    """
    cfg = cfg or QuadConfig()
    if cfg.scheme is Scheme.ADAPTIVE:
        def mapped(t):
            s = 1.0 - t
            return f(t / s) / (s * s)
        return _scipy_quad(mapped, 0.0, 1.0, cfg)
    fv = _as_vectorised(f)
    vals, est, effort, ok, finite = de_half_line(fv, cfg.rel_tol, cfg.abs_tol, cfg.max_refinements)
    return EvalResult(float(vals[0]), float(est[0]), effort, _status(ok[0], finite[0]))


# ---------------------------------------------------------------------------
# power series

_CANCELLATION_LIMIT = 1e15


def sum_series(terms: Callable[[int, int], np.ndarray], rel_tol: float = 1e-12,
               max_terms: int = 2000, tail_guard: int = 3, n_min: int = 0,
               extra_err: Optional[Callable[[np.ndarray], float]] = None) -> EvalResult:
    """Sum ``sum_n terms(n)`` with compensated addition.

    ``terms(lo, hi)`` returns the terms with indices ``lo <= n < hi``. Summation
    stops once ``tail_guard`` consecutive terms past index ``n_min`` are below
    ``rel_tol * |partial sum|`` and no longer growing. If the largest term
    exceeds the result by more than 1e15 the cancellation has eaten every
    digit and the status is tolerance-not-met. ``extra_err`` maps the accepted
    terms to an additional absolute error (e.g. from quadrature-computed
    coefficients).
    """
    chunk = 32
    acc = np.empty(0)
    stop = None
    while stop is None and acc.size < max_terms:
        hi = min(max_terms, acc.size + chunk)
        new = np.asarray(terms(acc.size, hi), dtype=float)
        if not np.all(np.isfinite(new)):
            bad = int(np.argmax(~np.isfinite(new)))
            acc = np.concatenate([acc, new[:bad]])
            total = math.fsum(acc)
            return EvalResult(total, math.inf, acc.size, Status.TOLERANCE_NOT_MET)
        acc = np.concatenate([acc, new])
        partial = np.cumsum(acc)  # only used for the stopping test
        small = np.abs(acc) <= rel_tol * np.abs(partial)
        run = 0
        for n in range(max(0, acc.size - new.size - tail_guard), acc.size):
            run = run + 1 if small[n] else 0
            if run >= tail_guard and n >= n_min + tail_guard - 1 and \
                    abs(acc[n]) <= abs(acc[n - tail_guard + 1]) + 1e-300 and \
                    _tail_estimate(acc[:n + 1], tail_guard) <= 0.5 * rel_tol * abs(partial[n]):
                stop = n + 1
                break
        chunk *= 2
    if stop is None:
        total = math.fsum(acc)
        return EvalResult(total, float(np.sum(np.abs(acc[-tail_guard:]))), acc.size,
                          Status.TOLERANCE_NOT_MET)
    used = acc[:stop]
    total = math.fsum(used)
    abs_sum = float(np.sum(np.abs(used)))
    biggest = float(np.max(np.abs(used))) if used.size else 0.0
    err = _tail_estimate(used, tail_guard) + 4.0 * np.finfo(float).eps * abs_sum
    if extra_err is not None:
        err += float(extra_err(used))
    ok = err <= max(rel_tol * abs(total), 1e-300) or abs_sum == 0.0
    if biggest > _CANCELLATION_LIMIT * abs(total) and abs_sum > 0:
        ok = False
        err = max(err, biggest * np.finfo(float).eps)
    return EvalResult(total, float(err), stop, Status.CONVERGED if ok else Status.TOLERANCE_NOT_MET)


def _tail_estimate(used: np.ndarray, tail_guard: int) -> float:
    """Geometric bound on the neglected tail from the last accepted terms."""
    last = abs(float(used[-1]))
    if last == 0.0:
        return 0.0
    prev = abs(float(used[-2])) if used.size > 1 else 0.0
    r = last / prev if prev > 0 else 1.0
    if r < 0.9:
        return last * r / (1.0 - r)
    return float(np.sum(np.abs(used[-tail_guard:])))
