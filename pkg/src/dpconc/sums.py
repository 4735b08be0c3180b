"""Confidence regions and Chernoff tails for sums of independent processes.

Given components (alpha_j, nu_j) and a confidence level delta, the
region radius is

    sup { sum_j E_{mu_j}[v_j] : sum_j alpha_j KL(nu_j || mu_j) <= log(1/delta) },

computed by strong duality as min_{lam >= 0} lam log(1/delta) + sum_j S_j(lam)
where S_j(lam) is the conjugate bound of component j at effective
concentration lam * alpha_j (and S_j(0) is its maximal payoff value).

The tail bound at a level u is exp(-I(u)) with

    I(u) = inf { sum_j alpha_j kinf_j(u_j) : sum_j u_j = u },

solved by equalizing the scaled slopes alpha_j * kinf_slope_j(u_j)
across components: each component's level is inverted from a shared
slope parameter eta by bisection, and eta itself is bisected until the
levels sum to u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cgf import cgf_bound
from .kinf import kinf
from .measures import DPSpec, WeightedValues, kl_discrete

__all__ = ["SumSpec", "RegionResult", "region_radius", "sum_tail_bound", "optimal_split"]

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0
_ETA_TOL = 1e-12
_LEVEL_TOL = 1e-10
_MAX_ITER = 200


@dataclass(frozen=True)
class SumSpec:
    """An ordered collection of independent components."""

    components: tuple[DPSpec, ...]

    def __init__(self, components):
        components = tuple(components)
        if len(components) == 0:
            raise ValueError("at least one component is required")
        object.__setattr__(self, "components", components)

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class RegionResult:
    """Radius of the sum-confidence region with its dual certificate.

    ``witnesses`` are per-component optimizing measures; ``unconstrained``
    marks the degenerate outer multiplier lam = 0, where the budget
    exceeds every finite divergence and the radius is the sum of the
    maximal payoff values.
    """

    radius: float
    lambda_star: float
    witnesses: tuple[WeightedValues, ...]
    unconstrained: bool = False


def _degenerate(dp: DPSpec) -> bool:
    # all mass already at the top payoff value: nothing to optimize
    pv, _ = dp.base.positive()
    return pv.size == 1 and pv[0] == dp.base.v_max


def region_radius(spec: SumSpec, delta: float) -> RegionResult:
    """Radius of the product confidence region at level ``delta``."""
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must be in (0,1), got {delta!r}")
    budget = -math.log(delta)
    comps = spec.components

    if all(_degenerate(c) for c in comps):
        return RegionResult(
            radius=sum(c.base.v_max for c in comps),
            lambda_star=0.0,
            witnesses=tuple(c.base for c in comps),
            unconstrained=True,
        )

    def conjugates(lam: float):
        return [cgf_bound(DPSpec(lam * c.alpha, c.base)) for c in comps]

    def g(lam: float) -> float:
        if lam == 0.0:
            return sum(c.base.v_max for c in comps)
        return lam * budget + sum(r.value for r in conjugates(lam))

    # grow an upper end until the objective turns upward, then golden-section
    hi = 1.0
    g_hi = g(hi)
    for _ in range(_MAX_ITER):
        g_next = g(2.0 * hi)
        if g_next >= g_hi:
            break
        hi *= 2.0
        g_hi = g_next
    hi *= 2.0

    lam = _golden_min(g, 0.0, hi)

    # polish: the slope budget - sum_j alpha_j KL_j(lam) is nondecreasing in lam
    def slope(lam_: float) -> float:
        return budget - _divergence_spent(comps, conjugates(lam_))

    lo_p, hi_p = lam / 2.0, lam * 2.0
    if slope(lo_p) < 0.0 <= slope(hi_p):
        for _ in range(100):
            mid = 0.5 * (lo_p + hi_p)
            if slope(mid) < 0.0:
                lo_p = mid
            else:
                hi_p = mid
            if hi_p - lo_p <= _ETA_TOL * max(1.0, hi_p):
                break
        lam = 0.5 * (lo_p + hi_p)

    results = conjugates(lam)
    witnesses = tuple(r.witness for r in results)
    radius = sum(w.mean for w in witnesses)
    return RegionResult(radius=radius, lambda_star=lam, witnesses=witnesses)


def _divergence_spent(comps, results) -> float:
    return sum(c.alpha * kl_discrete(c.base, r.witness) for c, r in zip(comps, results))


def _golden_min(f, lo: float, hi: float) -> float:
    x1 = hi - _GOLD * (hi - lo)
    x2 = lo + _GOLD * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(300):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLD * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLD * (hi - lo)
            f2 = f(x2)
        if hi - lo <= _ETA_TOL * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


# -- tail bound over an additive split ------------------------------------


def _level_of_slope(dp: DPSpec, eta: float) -> float:
    """sup { s in [mean, v_max) : alpha * kinf_slope(s) <= eta } by bisection."""
    mean, vmax = dp.base.mean, dp.base.v_max
    if vmax == mean or eta <= 0.0:
        return mean
    lo, hi = mean, vmax
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if dp.alpha * kinf(dp.base, mid).lambda_star <= eta:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _LEVEL_TOL:
            break
    return lo


def _split(spec: SumSpec, u: float) -> list[float]:
    comps = spec.components
    means = [c.base.mean for c in comps]
    vmaxs = [c.base.v_max for c in comps]
    if u <= sum(means):
        return means
    if u >= sum(vmaxs):
        return vmaxs
    if len(comps) == 1:
        return [u]

    def total(eta: float) -> list[float]:
        return [_level_of_slope(c, eta) for c in comps]

    eta_hi = 1.0
    for _ in range(_MAX_ITER):
        if sum(total(eta_hi)) >= u:
            break
        eta_hi *= 2.0
    eta_lo = 0.0
    levels = total(eta_lo)
    for _ in range(_MAX_ITER):
        mid = 0.5 * (eta_lo + eta_hi)
        cand = total(mid)
        if sum(cand) <= u:
            eta_lo, levels = mid, cand
        else:
            eta_hi = mid
        if eta_hi - eta_lo <= _ETA_TOL * max(1.0, eta_hi):
            break

    # hand the residual to the component with the most slack toward its top
    residual = u - sum(levels)
    order = np.argsort([-c.alpha * (vm - lv) for c, vm, lv in zip(comps, vmaxs, levels)])
    for idx in order:
        room = vmaxs[idx] - levels[idx]
        step = min(residual, room) if residual > 0 else residual
        levels[idx] += step
        residual -= step
        if abs(residual) == 0.0:
            break
    return levels


def optimal_split(spec: SumSpec, u: float) -> list[float]:
    """Levels (u_j) summing to ``u`` that minimize sum_j alpha_j kinf_j(u_j)."""
    means = sum(c.base.mean for c in spec.components)
    vmaxs = sum(c.base.v_max for c in spec.components)
    if not (means <= u <= vmaxs):
        raise ValueError(f"u must lie in [{means}, {vmaxs}], got {u!r}")
    return _split(spec, u)


def sum_tail_bound(spec: SumSpec, u: float) -> float:
    """Chernoff bound on P(sum_j E_{X_j}[v_j] >= u) in [0, 1]."""
    comps = spec.components
    if u <= sum(c.base.mean for c in comps):
        return 1.0
    if u > sum(c.base.v_max for c in comps):
        return 0.0
    levels = _split(spec, u)
    exponent = sum(c.alpha * kinf(c.base, lv).value for c, lv in zip(comps, levels))
    if math.isinf(exponent):
        return 0.0
    return min(1.0, math.exp(-exponent))
