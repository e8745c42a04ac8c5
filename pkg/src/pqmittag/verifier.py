"""Identity-verification harness.

Every identity is checked by evaluating both of its sides through independent
code paths over a parameter grid. Each sweep produces an
:class:`IdentityReport`; reports flagged ``gating`` decide the exit status,
the others document formula variants that are expected to fail (their errors
are recorded, not hidden).
"""
from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import numcore
from .extbeta import beta_classical, beta_p, beta_pq
from .fracderiv import ExtKernelParams, FracOrder, frac_ml_pair, rl_ext_p, rl_ext_pq, rl_frac
from .mlcore import (MLParams, SeriesConfig, _ratio_table, _power_terms, _log_poch,
                     extended_series, ml_extended_p, ml_extended_pq, ml_integral_halfline,
                     ml_integral_trig, ml_integral_unit, ml_prabhakar, ml_recurrence_residual,
                     ml_term_derivative)
from .numcore import KERNEL_QUAD, QuadConfig, log_abs_rgamma, sum_series
from .transforms import MellinPoint, mellin_diag_numeric, mellin_numeric
from .wright import WrightSpec, mellin_closed_form, wright_psi

__all__ = [
    "IdentityReport",
    "GridSpec",
    "STANDARD_GRID",
    "EXTENDED_GRID",
    "SuiteConfig",
    "ConfigError",
    "IDENTITIES",
    "verify_reduction_chain",
    "verify_integral_reps",
    "verify_recurrence",
    "verify_mellin",
    "verify_frac_theorem",
    "verify_derivative_theorems",
    "verify_beta_properties",
    "verify_wright_sanity",
    "verify_power_rule",
    "load_config",
    "run_full_suite",
    "write_reports",
    "summary_table",
]


@dataclass
class IdentityReport:
    identity_id: str
    grid_size: int
    max_rel_err: float
    median_rel_err: float
    tolerance: float
    passed: bool
    notes: str = ""
    gating: bool = field(default=True, repr=False)

    def to_record(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "grid_size": self.grid_size,
            "max_rel_err": self.max_rel_err,
            "median_rel_err": self.median_rel_err,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "notes": self.notes,
        }


def _report(identity_id: str, errors: Sequence[float], tol: float, notes: Iterable[str] = (),
            gating: bool = True) -> IdentityReport:
    errs = np.asarray(list(errors), dtype=float)
    errs = np.where(np.isnan(errs), np.inf, errs)
    if errs.size == 0:
        raise ValueError(f"{identity_id}: empty grid")
    mx = float(np.max(errs))
    med = float(np.median(errs))
    return IdentityReport(identity_id, int(errs.size), mx, min(med, mx), float(tol),
                          bool(mx <= tol), "; ".join(n for n in notes if n), gating)


def rel_err(a: float, b: float) -> float:
    """Symmetric relative difference ``|a - b| / max(|a|, |b|)``, 0 when both vanish."""
    scale = max(abs(a), abs(b))
    if scale == 0:
        return 0.0
    return abs(a - b) / scale


class _Sweep:
    """Collects per-tuple errors; an exception marks the tuple as failed instead of aborting."""

    def __init__(self):
        self.errors: Dict[str, List[float]] = {}
        self.notes: List[str] = []
        self.unconverged = 0

    def run(self, label, fn: Callable[[], Dict[str, float]], keys: Sequence[str]):
        try:
            out = fn()
        except Exception as exc:  # recorded and counted as an infinite error
            self.notes.append(f"{label}: {type(exc).__name__}: {exc}")
            out = {k: math.inf for k in keys}
        for k in keys:
            self.errors.setdefault(k, []).append(out.get(k, math.inf))

    def watch(self, *results):
        self.unconverged += sum(1 for r in results if not r.converged)
        return results

    def status_note(self) -> str:
        if self.unconverged:
            return f"{self.unconverged} evaluations below their own tolerance target"
        return ""


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------------------
# grids

PQPairs = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class GridSpec:
    alpha: Tuple[float, ...] = (0.5, 1.0, 2.0)
    beta: Tuple[float, ...] = (0.5, 1.0, 2.0)
    gamma: Tuple[float, ...] = (1.2,)
    c: Tuple[float, ...] = (2.5,)
    pq: PQPairs = ((0.0, 0.0), (0.25, 0.25), (1.0, 1.0), (0.0, 1.0), (0.25, 0.0), (1.0, 0.25))
    z: Tuple[float, ...] = (-2.0, -0.5, 0.0, 0.5, 2.0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "c", "pq", "z"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"grid field '{name}' is empty")
        # every tuple must satisfy the parameter invariants
        for g, c in itertools.product(self.gamma, self.c):
            if not c > g > 0:
                raise ConfigError(f"grid pair gamma={g}, c={c} violates c > gamma > 0")
        if min(self.alpha) <= 0 or min(self.beta) <= 0:
            raise ConfigError("grid alpha and beta values must be positive")
        if any(p < 0 or q < 0 for p, q in self.pq):
            raise ConfigError("grid p, q values must be non-negative")

    def params(self) -> List[Tuple[MLParams, float]]:
        out = []
        for a, b, g, c, (p, q), z in itertools.product(self.alpha, self.beta, self.gamma, self.c,
                                                       self.pq, self.z):
            out.append((MLParams(a, b, g, c, p, q), z))
        return out

    def __len__(self):
        return (len(self.alpha) * len(self.beta) * len(self.gamma) * len(self.c)
                * len(self.pq) * len(self.z))


#: Reduction-chain grid: 5 x 4 x 5 = 100 tuples, checked at several p.
REDUCTION_GRID = GridSpec(alpha=(0.5, 0.8, 1.0, 1.5, 2.0), beta=(0.5, 1.0, 1.5, 2.0),
                          pq=((0.0, 0.0),), z=(-2.0, -0.5, 0.0, 0.5, 2.0))
REDUCTION_P = (0.1, 0.25, 1.0)

STANDARD_GRID = GridSpec()

#: Larger sweep for the route-agreement and recurrence checks (``verify --extended``).
EXTENDED_GRID = GridSpec(alpha=(0.5, 0.8, 1.0, 1.5, 2.0, 3.0), beta=(0.5, 1.0, 1.5, 2.0, 3.0),
                         gamma=(0.7, 1.2), c=(2.5, 3.4),
                         z=(-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0))

#: Mellin grid: 12 parameter tuples x 3 values of z (p, q are integration variables).
MELLIN_GRID = GridSpec(alpha=(0.5, 1.0, 2.0), beta=(1.0, 1.5), gamma=(0.7, 1.2), c=(1.9, 2.5),
                       pq=((0.0, 0.0),), z=(0.0, 0.25, 0.5))
MELLIN_GAMMA_C = ((1.2, 2.5), (0.7, 1.9))
MELLIN_POINTS = ((1.0, 1.0), (1.5, 2.0), (0.8, 1.2))

#: Fractional-integral identity: 3 x 3 x 2 = 18 tuples.
FRAC_DELTA = (0.5, 1.0, 1.2)
FRAC_LAMBDA = (2.0, 2.5, 3.1)
FRAC_PQ = ((0.0, 0.0), (0.3, 0.7))
FRAC_FIXED = dict(alpha=1.0, beta=1.5, z=0.8)

#: Derivative formulas: 5 x 2 x 2 = 20 tuples.
DERIV_GRID = GridSpec(alpha=(0.5, 0.7, 1.0, 1.5, 2.0), beta=(1.0, 2.5), gamma=(1.2,), c=(2.5,),
                      pq=((0.0, 0.0), (0.3, 0.6)), z=(0.7,))
DERIV_N = (1, 2, 3)
DERIV_ARG_SCALE = 1.3


# ---------------------------------------------------------------------------
# sweeps

def verify_reduction_chain(grid: GridSpec = REDUCTION_GRID, tol: float = 1e-10,
                           p_values: Sequence[float] = REDUCTION_P,
                           cfg: SeriesConfig = SeriesConfig(),
                           qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    """(p, q) function at p = q against the one-parameter function, and at p = q = 0
    against the Prabhakar function."""
    sw = _Sweep()
    for params, z in grid.params():
        def one():
            out = {}
            errs = []
            for p in p_values:
                pp = params.with_(p=p, q=p)
                a, b = sw.watch(ml_extended_pq(pp, z, cfg, qcfg), ml_extended_p(pp, z, cfg, qcfg))
                errs.append(rel_err(a.value, b.value))
            out["p=q"] = max(errs)
            zero = params.with_(p=0.0, q=0.0)
            a, b = sw.watch(ml_extended_pq(zero, z, cfg, qcfg),
                            ml_prabhakar(zero.alpha, zero.beta_, zero.gamma_, z, cfg))
            out["prabhakar"] = rel_err(a.value, b.value)
            return out
        sw.run(f"{params},z={z}", one, ["p=q", "prabhakar"])
    worst = [max(a, b) for a, b in zip(sw.errors["p=q"], sw.errors["prabhakar"])]
    notes = [f"p=q slice max {_fmt(max(sw.errors['p=q']))}",
             f"p=q=0 vs Prabhakar max {_fmt(max(sw.errors['prabhakar']))}",
             sw.status_note()] + sw.notes
    return _report("reduction-chain", worst, tol, notes)


def integral_rep_errors(grid: GridSpec = STANDARD_GRID, cfg: SeriesConfig = SeriesConfig(),
                        qcfg: QuadConfig = KERNEL_QUAD):
    """Pairwise relative differences of the four evaluation routes per grid tuple."""
    sw = _Sweep()
    keys = ["series-unit", "halfline-unit", "trig-unit", "series-halfline", "series-trig",
            "halfline-trig"]
    for params, z in grid.params():
        def one():
            s, u, h, t = sw.watch(ml_extended_pq(params, z, cfg, qcfg),
                                  ml_integral_unit(params, z, qcfg),
                                  ml_integral_halfline(params, z, qcfg),
                                  ml_integral_trig(params, z, qcfg))
            v = dict(series=s.value, unit=u.value, halfline=h.value, trig=t.value)
            return {k: rel_err(v[k.split("-")[0]], v[k.split("-")[1]]) for k in keys}
        sw.run(f"{params},z={z}", one, keys)
    return sw


def verify_integral_reps(grid: GridSpec = STANDARD_GRID, tol: float = 1e-8,
                         cfg: SeriesConfig = SeriesConfig(),
                         qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    """Series against the unit-interval, half-line and trigonometric integrals."""
    sw = integral_rep_errors(grid, cfg, qcfg)
    worst = np.max(np.array(list(sw.errors.values())), axis=0)
    notes = [", ".join(f"{k} {_fmt(max(v))}" for k, v in sw.errors.items()), sw.status_note()]
    return _report("integral-representations", worst, tol, notes + sw.notes)


def verify_recurrence(grid: GridSpec = STANDARD_GRID, tol: float = 1e-9,
                      cfg: SeriesConfig = SeriesConfig(),
                      qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    """Residual of ``E_b = b E_{b+1} + a z E'_{b+1}`` relative to ``|E_b|``."""
    sw = _Sweep()
    for params, z in grid.params():
        def one():
            e = ml_extended_pq(params, z, cfg, qcfg).value
            res = ml_recurrence_residual(params, z, cfg, qcfg)
            return {"rel": 0.0 if res == 0 else abs(res) / abs(e)}
        sw.run(f"{params},z={z}", one, ["rel"])
    return _report("recurrence", sw.errors["rel"], tol, sw.notes)


def _mellin_grid(grid: GridSpec):
    # gamma and c are paired (not crossed) on the Mellin grid
    out = []
    pairs = list(zip(grid.gamma, grid.c)) if len(grid.gamma) == len(grid.c) else \
        list(itertools.product(grid.gamma, grid.c))
    for a, b, (g, c), z in itertools.product(grid.alpha, grid.beta, pairs, grid.z):
        out.append((MLParams(a, b, g, c), z))
    return out


def mellin_errors(grid: GridSpec = MELLIN_GRID, points=MELLIN_POINTS,
                  cfg: SeriesConfig = SeriesConfig(), qcfg: QuadConfig = KERNEL_QUAD):
    sw = _Sweep()
    for params, z in _mellin_grid(grid):
        for s, r in points:
            def one():
                num, closed, variant = sw.watch(
                    mellin_numeric(params, MellinPoint(s, r), z, qcfg),
                    mellin_closed_form(params, s, r, z, cfg),
                    mellin_closed_form(params, s, r, z, cfg, lower_slope="gamma"))
                return {"closed": rel_err(num.value, closed.value),
                        "variant": rel_err(num.value, variant.value),
                        "alpha_ne_gamma_z_ne_0": float(params.alpha != params.gamma_ and z != 0)}
            sw.run(f"{params},z={z},s={s},r={r}", one, ["closed", "variant",
                                                        "alpha_ne_gamma_z_ne_0"])
    return sw


def mellin_diagonal_errors(grid: GridSpec = MELLIN_GRID, cfg: SeriesConfig = SeriesConfig()):
    """Diagonal integral of E(z; p, p) over p against the s = r = 1 closed form."""
    sw = _Sweep()
    seen = set()
    for params, z in _mellin_grid(grid):
        key = (params.alpha, params.beta_, params.gamma_, params.c, z)
        if params.beta_ != grid.beta[0] or key in seen:
            continue  # the diagonal integral is costly; one beta value suffices
        seen.add(key)

        def one():
            diag, closed = sw.watch(mellin_diag_numeric(params, z, cfg=cfg),
                                    mellin_closed_form(params, 1.0, 1.0, z, cfg))
            return {"diag": rel_err(diag.value, closed.value)}
        sw.run(f"{params},z={z}", one, ["diag"])
    return sw


def verify_mellin(grid: GridSpec = MELLIN_GRID, points=MELLIN_POINTS, tol: float = 1e-5,
                  cfg: SeriesConfig = SeriesConfig(), qcfg: QuadConfig = KERNEL_QUAD,
                  diagonal: bool = True) -> IdentityReport:
    """Reduced numeric Mellin transform against the closed-form Wright expression.

    The variant with lower Wright pair ``(beta, gamma)`` and the diagonal
    integral over p = q are evaluated too; their outcomes go to the notes.
    """
    sw = mellin_errors(grid, points, cfg, qcfg)
    variant = np.array(sw.errors["variant"])
    mask = np.array(sw.errors["alpha_ne_gamma_z_ne_0"]) > 0
    notes = [f"lower pair (beta, alpha) max {_fmt(max(sw.errors['closed']))}",
             f"lower pair (beta, gamma): max {_fmt(float(variant.max()))}, "
             f"min over alpha != gamma, z != 0 {_fmt(float(variant[mask].min()) if mask.any() else math.nan)}, "
             f"exceeds tolerance on {int(np.sum(variant[mask] > tol))}/{int(mask.sum())} such tuples"]
    if diagonal:
        dg = mellin_diagonal_errors(grid, cfg)
        d = dg.errors.get("diag", [math.inf])
        notes.append(f"diagonal p = q integral vs s = r = 1 closed form: max {_fmt(max(d))} over "
                     f"{len(d)} tuples ({'agrees' if max(d) <= tol else 'disagrees'} within {tol:g})")
        notes += dg.notes
    notes += [sw.status_note()] + sw.notes
    return _report("mellin-transform", sw.errors["closed"], tol, notes)


def frac_identity_errors(deltas=FRAC_DELTA, lams=FRAC_LAMBDA, pqs=FRAC_PQ, fixed=FRAC_FIXED,
                        cfg: SeriesConfig = SeriesConfig(), qcfg: QuadConfig = KERNEL_QUAD,
                        unmatched_c_shift: float = 0.5):
    sw = _Sweep()
    excluded = []
    for d, lam, (p, q) in itertools.product(deltas, lams, pqs):
        if lam - d < 0.1:
            excluded.append((d, lam))  # Gamma(lam - delta) blows up near the boundary
            continue
        kp = ExtKernelParams(p, q)

        def one():
            lhs, rhs = sw.watch(*frac_ml_pair(d, lam, fixed["alpha"], fixed["beta"], kp,
                                              fixed["z"], qcfg, cfg))
            lhs2, rhs2 = frac_ml_pair(d, lam, fixed["alpha"], fixed["beta"], kp, fixed["z"], qcfg,
                                      cfg, c=lam + unmatched_c_shift)
            return {"matched": rel_err(lhs.value, rhs.value),
                    "unmatched": rel_err(lhs2.value, rhs2.value),
                    "classical": float(p == 0 and q == 0)}
        sw.run(f"delta={d},lambda={lam},p={p},q={q}", one, ["matched", "unmatched", "classical"])
    return sw, excluded


def verify_frac_theorem(tol: float = 1e-6, cfg: SeriesConfig = SeriesConfig(),
                        qcfg: QuadConfig = KERNEL_QUAD, **grid) -> IdentityReport:
    """Extended fractional integral of ``tau^(delta-1) E^lam(tau)`` against the closed form."""
    sw, excluded = frac_identity_errors(cfg=cfg, qcfg=qcfg, **grid)
    matched = np.array(sw.errors["matched"])
    classical = np.array(sw.errors["classical"]) > 0
    notes = [f"classical slice p = q = 0 max {_fmt(float(matched[classical].max()) if classical.any() else 0.0)}",
             f"upper index c = lambda + 0.5 (unmatched) max {_fmt(max(sw.errors['unmatched']))}"]
    if excluded:
        notes.append(f"excluded near-degenerate (delta, lambda): {excluded}")
    return _report("frac-integral-ml", matched, tol, notes + [sw.status_note()] + sw.notes)


def _power_scaled_termwise(params: MLParams, scale: float, z: float, n: int,
                           cfg: SeriesConfig, qcfg: QuadConfig):
    """n-th z-derivative of ``z^(b-1) E(scale z^a)`` by differentiating each power of z."""
    a, b, g, c = params.alpha, params.beta_, params.gamma_, params.c
    table = _ratio_table(g, c, params.p, params.q, qcfg)

    def terms(lo, hi):
        k = np.arange(lo, hi)
        ratio, _, _ = table.upto(hi)
        lp, sp = _log_poch(c, k)
        lr, sr = log_abs_rgamma(a * k + b)
        expo = a * k + b - 1.0
        falling = np.ones_like(expo)
        for j in range(n):
            falling = falling * (expo - j)
        coef = ratio[lo:] * _power_terms(lp + lr, sp * sr, k, scale) * falling
        return coef * z ** (expo - n)
    # the falling factor can zero the leading terms; don't let them end the sum
    return sum_series(terms, cfg.rel_tol, cfg.max_terms, cfg.tail_guard, n_min=n + 1)


def derivative_errors(grid: GridSpec = DERIV_GRID, n_values=DERIV_N,
                      arg_scale: float = DERIV_ARG_SCALE, cfg: SeriesConfig = SeriesConfig(),
                      qcfg: QuadConfig = KERNEL_QUAD):
    sw = _Sweep()
    keys = ["shift", "shift-c-weight", "power", "power-shifted-indices", "ratio-dev"]
    for params, z in grid.params():
        for n in n_values:
            def one():
                a, b, g, c, p, q = (params.alpha, params.beta_, params.gamma_, params.c,
                                    params.p, params.q)
                true_d, = sw.watch(ml_term_derivative(params, z, n, cfg, qcfg))
                shifted = ml_extended_pq(MLParams(a, b + n * a, g + n, c + n, p, q), z, cfg, qcfg)
                poch_g = math.prod(g + j for j in range(n))
                poch_c = math.prod(c + j for j in range(n))
                gamma_weighted = poch_g * shifted.value
                variant = poch_c * shifted.value
                ratio = variant / true_d.value
                lhs, = sw.watch(_power_scaled_termwise(params, arg_scale, z, n, cfg, qcfg))
                w = arg_scale * z ** a
                pref = z ** (b - n - 1.0)
                rhs = pref * extended_series(a, b - n, g, c, p, q, w, cfg, qcfg).value
                rhs_variant = pref * extended_series(a, b - n, g + n, c + n, p, q, w, cfg,
                                                     qcfg).value
                return {"shift": rel_err(true_d.value, gamma_weighted),
                        "shift-c-weight": rel_err(true_d.value, variant),
                        "power": rel_err(lhs.value, rhs),
                        "power-shifted-indices": rel_err(lhs.value, rhs_variant),
                        "ratio-dev": abs(ratio - poch_c / poch_g) if n == 1 else 0.0}
            sw.run(f"{params},z={z},n={n}", one, keys)
    return sw


def verify_derivative_theorems(grid: GridSpec = DERIV_GRID, n_values=DERIV_N, tol: float = 1e-8,
                               arg_scale: float = DERIV_ARG_SCALE,
                               cfg: SeriesConfig = SeriesConfig(),
                               qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    """Term-wise derivatives against the index-shift formulas.

    Gated forms: ``d^n E = (gamma)_n E^{gamma+n, c+n}_{alpha, beta+n alpha}`` and
    ``d^n [z^(b-1) E(mu z^a)] = z^(b-n-1) E^{gamma, c}_{alpha, beta-n}(mu z^a)``.
    The ``(c)_n`` weighting and the shifted-index variant are reported in the notes.
    """
    sw = derivative_errors(grid, n_values, arg_scale, cfg, qcfg)
    worst = np.maximum(sw.errors["shift"], sw.errors["power"])
    notes = [f"shift formula with (gamma)_n max {_fmt(max(sw.errors['shift']))}",
             f"power formula with unshifted indices max {_fmt(max(sw.errors['power']))}",
             f"shift formula with (c)_n weight max {_fmt(max(sw.errors['shift-c-weight']))}; "
             f"n = 1 ratio to true derivative deviates from c/gamma by at most "
             f"{_fmt(max(sw.errors['ratio-dev']))}",
             f"power formula with gamma+n, c+n max {_fmt(max(sw.errors['power-shifted-indices']))}",
             sw.status_note()]
    return _report("derivative-formulas", worst, tol, notes + sw.notes)


def beta_property_errors(n_tuples: int = 20, seed: int = 20240607,
                         qcfg: QuadConfig = KERNEL_QUAD):
    rng = np.random.default_rng(seed)
    sw = _Sweep()
    for _ in range(n_tuples):
        x, y = rng.uniform(0.3, 4.0, 2)
        p, q = rng.uniform(0.0, 2.0, 2)

        def one():
            fwd = beta_pq(x, y, p, q, qcfg).value
            rev = beta_pq(y, x, q, p, qcfg).value
            diag = beta_pq(x, y, p, p, qcfg).value
            single = beta_p(x, y, p, qcfg).value
            classical = beta_classical(x, y)
            zero = beta_p(x, y, 0.0, qcfg).value
            bounds = 0.0 if 0 < fwd <= classical * (1 + 1e-15) else math.inf
            return {"symmetry": rel_err(fwd, rev), "p=q": rel_err(diag, single),
                    "p=0": rel_err(zero, classical), "bounds": bounds}
        sw.run(f"x={x},y={y},p={p},q={q}", one, ["symmetry", "p=q", "p=0", "bounds"])
    return sw


def verify_beta_properties(tol: float = 1e-10, n_tuples: int = 20, seed: int = 20240607,
                           qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    sw = beta_property_errors(n_tuples, seed, qcfg)
    worst = np.max(np.array(list(sw.errors.values())), axis=0)
    notes = [", ".join(f"{k} {_fmt(max(v))}" for k, v in sw.errors.items())] + sw.notes
    return _report("extended-beta-properties", worst, tol, notes)


def wright_sanity_errors(n_tuples: int = 10, seed: int = 20240607,
                         cfg: SeriesConfig = SeriesConfig()):
    rng = np.random.default_rng(seed)
    sw = _Sweep()
    unit = WrightSpec([(1.0, 1.0)], [(1.0, 1.0)])
    for z in (-1.0, 0.0, 0.5, 2.0):
        sw.run(f"exp z={z}", lambda: {"exp": rel_err(wright_psi(unit, z, cfg).value, math.exp(z))},
               ["exp"])
    for _ in range(n_tuples):
        a = rng.uniform(0.5, 2.5)
        b = rng.uniform(0.3, 3.0)
        g = rng.uniform(0.3, 3.0)
        z = rng.uniform(-1.5, 1.5)

        def one():
            psi = wright_psi(WrightSpec([(g, 1.0)], [(b, a)]), z, cfg).value
            ml = math.gamma(g) * ml_prabhakar(a, b, g, z, cfg).value
            return {"prabhakar": rel_err(psi, ml)}
        sw.run(f"alpha={a},beta={b},gamma={g},z={z}", one, ["prabhakar"])
    return sw


def verify_wright_sanity(tol_exp: float = 1e-12, tol: float = 1e-10, n_tuples: int = 10,
                         seed: int = 20240607, cfg: SeriesConfig = SeriesConfig()) -> IdentityReport:
    sw = wright_sanity_errors(n_tuples, seed, cfg)
    # scale the exponential check to the common tolerance so one report carries both
    scaled = [e * tol / tol_exp for e in sw.errors["exp"]] + sw.errors["prabhakar"]
    notes = [f"1-Psi-1 with cancelling pairs vs exp(z) max {_fmt(max(sw.errors['exp']))} "
             f"(tolerance {tol_exp:g})",
             f"1-Psi-1 vs Gamma(gamma) Prabhakar max {_fmt(max(sw.errors['prabhakar']))}"] + sw.notes
    return _report("wright-sanity", scaled, tol, notes)


POWER_A = (0.0, 0.5, 1.0, 2.0)
POWER_NU = (0.25, 0.5, 0.9)
POWER_X = (0.5, 1.0, 2.0)


def power_rule_errors(qcfg: QuadConfig = KERNEL_QUAD):
    sw = _Sweep()
    for a, nu, x in itertools.product(POWER_A, POWER_NU, POWER_X):
        def one():
            got = rl_frac(lambda t: np.asarray(t, dtype=float) ** a, FracOrder.of(-nu), x, qcfg)
            want = math.exp(math.lgamma(a + 1) - math.lgamma(a + 1 + nu)) * x ** (a + nu)
            return {"power": rel_err(got.value, want)}
        sw.run(f"a={a},nu={nu},x={x}", one, ["power"])
    for p, nu, x in itertools.product((0.1, 0.4, 1.0), POWER_NU, (0.5, 1.0, 2.0)):
        def collapse():
            f = lambda t: np.cos(np.asarray(t, dtype=float))
            a = rl_ext_pq(f, FracOrder.of(-nu), x, ExtKernelParams(p, p), qcfg).value
            b = rl_ext_p(f, FracOrder.of(-nu), x, p, qcfg).value
            return {"collapse": rel_err(a, b)}
        sw.run(f"p={p},nu={nu},x={x}", collapse, ["collapse"])
    return sw


def verify_power_rule(tol: float = 1e-8, tol_collapse: float = 1e-10,
                      qcfg: QuadConfig = KERNEL_QUAD) -> IdentityReport:
    sw = power_rule_errors(qcfg)
    scaled = sw.errors["power"] + [e * tol / tol_collapse for e in sw.errors["collapse"]]
    notes = [f"power rule max {_fmt(max(sw.errors['power']))} (tolerance {tol:g})",
             f"p = q kernel collapse max {_fmt(max(sw.errors['collapse']))} "
             f"(tolerance {tol_collapse:g})"] + sw.notes
    return _report("fractional-power-rule", scaled, tol, notes)


# ---------------------------------------------------------------------------
# configuration and suite driver

class ConfigError(ValueError):
    """Invalid verification config; the message names the field and expected form."""


IDENTITIES = (
    "reduction-chain",
    "integral-representations",
    "recurrence",
    "mellin-transform",
    "frac-integral-ml",
    "derivative-formulas",
    "extended-beta-properties",
    "wright-sanity",
    "fractional-power-rule",
)

DEFAULT_TOLERANCES = {
    "reduction-chain": 1e-10,
    "integral-representations": 1e-8,
    "recurrence": 1e-9,
    "mellin-transform": 1e-5,
    "frac-integral-ml": 1e-6,
    "derivative-formulas": 1e-8,
    "extended-beta-properties": 1e-10,
    "wright-sanity": 1e-10,
    "fractional-power-rule": 1e-8,
}


@dataclass(frozen=True)
class SuiteConfig:
    grid: GridSpec = STANDARD_GRID
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    identities: Tuple[str, ...] = IDENTITIES
    rel_tol: float = 1e-12
    quad_rel_tol: float = 1e-13
    seed: int = 20240607
    mellin_diagonal: bool = True

    @property
    def series(self) -> SeriesConfig:
        return SeriesConfig(rel_tol=self.rel_tol)

    @property
    def quad(self) -> QuadConfig:
        return KERNEL_QUAD.with_(rel_tol=self.quad_rel_tol)


_GRID_KEYS = {f.name for f in fields(GridSpec)}
_TOP_KEYS = {"grid", "tolerances", "identities", "rel_tol", "quad_rel_tol", "seed",
             "mellin_diagonal"}


def _key_lines(text: str) -> Dict[str, int]:
    """1-based line of every mapping key, addressed as 'a.b.c'."""
    lines: Dict[str, int] = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return lines

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                path = f"{prefix}.{k.value}" if prefix else str(k.value)
                lines[path] = k.start_mark.line + 1
                walk(v, path)
    if root is not None:
        walk(root, "")
    return lines


def _number_list(value, where, expect="a non-empty list of numbers"):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected {expect}, got {value!r}")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected {expect}, got {value!r}") from None


def load_config(path=None, text: Optional[str] = None) -> SuiteConfig:
    """Parse a YAML verification config; every field is optional.

    Recognised keys: ``grid`` (alpha, beta, gamma, c, pq, z lists), ``tolerances``
    (identity -> float), ``identities`` (list to run), ``rel_tol`` (series),
    ``quad_rel_tol``, ``seed``, ``mellin_diagonal``.
    """
    if text is None:
        if path is None:
            return SuiteConfig()
        p = Path(path)
        if not p.is_file():
            raise FileNotFoundError(f"config file not found: {path}")
        text = p.read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from None
    if data is None:
        return SuiteConfig()
    lines = _key_lines(text)

    def where(key):
        line = lines.get(key)
        return f"field '{key}' (line {line})" if line else f"field '{key}'"

    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of field names to values")
    for key in data:
        if key not in _TOP_KEYS:
            raise ConfigError(f"{where(key)}: unknown field; expected one of {sorted(_TOP_KEYS)}")

    kwargs = {}
    for key in ("rel_tol", "quad_rel_tol"):
        if key in data:
            try:
                val = float(data[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{where(key)}: expected a positive number") from None
            if not val > 0:
                raise ConfigError(f"{where(key)}: expected a positive number")
            kwargs[key] = val
    if "seed" in data:
        if not isinstance(data["seed"], int):
            raise ConfigError(f"{where('seed')}: expected an integer")
        kwargs["seed"] = data["seed"]
    if "mellin_diagonal" in data:
        if not isinstance(data["mellin_diagonal"], bool):
            raise ConfigError(f"{where('mellin_diagonal')}: expected true or false")
        kwargs["mellin_diagonal"] = data["mellin_diagonal"]

    if "grid" in data:
        g = data["grid"]
        if not isinstance(g, dict):
            raise ConfigError(f"{where('grid')}: expected a mapping of parameter lists")
        gk = {}
        for key, value in g.items():
            if key not in _GRID_KEYS:
                raise ConfigError(f"{where('grid.' + key)}: unknown grid field; expected one of "
                                  f"{sorted(_GRID_KEYS)}")
            if key == "pq":
                if not isinstance(value, list) or not value or not all(
                        isinstance(v, list) and len(v) == 2 for v in value):
                    raise ConfigError(f"{where('grid.pq')}: expected a non-empty list of [p, q] pairs")
                gk[key] = tuple((float(a), float(b)) for a, b in value)
            else:
                gk[key] = _number_list(value, where("grid." + key))
        try:
            kwargs["grid"] = GridSpec(**gk)
        except ConfigError as exc:
            raise ConfigError(f"{where('grid')}: {exc}") from None
        except Exception as exc:
            raise ConfigError(f"{where('grid')}: {exc}") from None

    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in data:
        t = data["tolerances"]
        if not isinstance(t, dict):
            raise ConfigError(f"{where('tolerances')}: expected a mapping identity -> number")
        for key, value in t.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"{where('tolerances.' + key)}: unknown identity; expected one "
                                  f"of {list(IDENTITIES)}")
            try:
                tolerances[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{where('tolerances.' + key)}: expected a number") from None
    kwargs["tolerances"] = tolerances

    if "identities" in data:
        ids = data["identities"]
        if isinstance(ids, str):
            ids = [ids]
        if not isinstance(ids, list) or not ids:
            raise ConfigError(f"{where('identities')}: expected a non-empty list of identity names")
        for i in ids:
            if i not in IDENTITIES:
                raise ConfigError(f"{where('identities')}: unknown identity {i!r}; expected one "
                                  f"of {list(IDENTITIES)}")
        kwargs["identities"] = tuple(ids)
    return SuiteConfig(**kwargs)


def _runners(conf: SuiteConfig) -> Dict[str, Callable[[], IdentityReport]]:
    tol, s, q = conf.tolerances, conf.series, conf.quad
    return {
        "reduction-chain": lambda: verify_reduction_chain(tol=tol["reduction-chain"], cfg=s, qcfg=q),
        "integral-representations": lambda: verify_integral_reps(
            conf.grid, tol["integral-representations"], s, q),
        "recurrence": lambda: verify_recurrence(conf.grid, tol["recurrence"], s, q),
        "mellin-transform": lambda: verify_mellin(tol=tol["mellin-transform"], cfg=s, qcfg=q,
                                                  diagonal=conf.mellin_diagonal),
        "frac-integral-ml": lambda: verify_frac_theorem(tol["frac-integral-ml"], s, q),
        "derivative-formulas": lambda: verify_derivative_theorems(
            tol=tol["derivative-formulas"], cfg=s, qcfg=q),
        "extended-beta-properties": lambda: verify_beta_properties(
            tol["extended-beta-properties"], seed=conf.seed, qcfg=q),
        "wright-sanity": lambda: verify_wright_sanity(tol=tol["wright-sanity"], seed=conf.seed,
                                                      cfg=s),
        "fractional-power-rule": lambda: verify_power_rule(tol["fractional-power-rule"], qcfg=q),
    }


def run_full_suite(config_path=None, only: Optional[Sequence[str]] = None,
                   conf: Optional[SuiteConfig] = None, log=None) -> List[IdentityReport]:
    """Run every selected identity sweep and return the reports in a fixed order."""
    conf = conf or load_config(config_path)
    selected = tuple(only) if only else conf.identities
    for name in selected:
        if name not in IDENTITIES:
            raise ConfigError(f"unknown identity {name!r}; expected one of {list(IDENTITIES)}")
    runners = _runners(conf)
    reports = []
    for name in IDENTITIES:
        if name not in selected:
            continue
        t0 = time.perf_counter()
        rep = runners[name]()
        if log:
            log(f"{name}: {'pass' if rep.passed else 'FAIL'} ({time.perf_counter() - t0:.1f} s)")
        reports.append(rep)
    return reports


def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def report_json(rep: IdentityReport) -> str:
    """One JSON object; floats carry 17 significant digits."""
    rec = rep.to_record()
    parts = []
    for k, v in rec.items():
        if isinstance(v, bool) or isinstance(v, str) or isinstance(v, int):
            parts.append(f"{json.dumps(k)}: {json.dumps(v)}")
        else:
            parts.append(f"{json.dumps(k)}: {_num(float(v))}")
    return "{" + ", ".join(parts) + "}"


def write_reports(reports: Sequence[IdentityReport], path) -> None:
    """Write one JSON record per line (JSON Lines)."""
    with open(path, "w", newline="\n") as fh:
        for rep in reports:
            fh.write(report_json(rep) + "\n")


def summary_table(reports: Sequence[IdentityReport]) -> str:
    head = f"{'identity':28s} {'grid':>5s} {'max rel err':>12s} {'median':>12s} {'tol':>9s}  result"
    rows = [head, "-" * len(head)]
    for r in reports:
        verdict = "pass" if r.passed else "FAIL"
        rows.append(f"{r.identity_id:28s} {r.grid_size:5d} {r.max_rel_err:12.3e} "
                    f"{r.median_rel_err:12.3e} {r.tolerance:9.1e}  {verdict}")
    return "\n".join(rows)
