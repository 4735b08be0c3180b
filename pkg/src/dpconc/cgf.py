"""Log-MGF bound for Dirichlet-process payoffs and its special cases.

The central object is the convex conjugate of the scaled reversed KL
divergence,

    B(alpha, nu) = sup_q ( E_q[v] - alpha * KL(nu || q) ),

taken over probability measures q on the atom set.  It upper-bounds the
cumulant generating function log E[exp(E_X[v])] of X ~ DP(alpha * nu).
The supremum is computed through the 1-D dual

    B = min_{c in [v_max, v_max + alpha]} c - alpha + alpha * sum_i p_i log(alpha / (c - v_i)),

which is strictly convex in c.  An interior stationary point satisfies
sum_i alpha p_i / (c - v_i) = 1 and yields the witness
q_i = alpha p_i / (c - v_i); the boundary c = v_max is admissible only
when the base has no mass at v_max, and then the leftover weight
1 - sum_i alpha p_i / (v_max - v_i) sits at the ambient maximizer.

Also here: the Gamma-process log-MGF, the single-process Chernoff tail,
and the closed-form bound for Beta random variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinf import kinf
from .measures import DPSpec, WeightedValues, canonicalize, kl_bernoulli

__all__ = [
    "CgfBoundResult",
    "cgf_bound",
    "cgf_bound_scaled",
    "gamma_log_mgf",
    "tail_bound_single",
    "beta_cgf_bound",
]

_C_TOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True)
class CgfBoundResult:
    """Conjugate value with its dual optimizer and primal witness."""

    value: float
    c_star: float
    boundary_mass: float
    witness: WeightedValues


def cgf_bound(dp: DPSpec) -> CgfBoundResult:
    """Convex conjugate of ``alpha * KL(base || .)`` evaluated at the payoff."""
    base = dp.base
    alpha = dp.alpha
    vmax = base.v_max
    v, p = base.positive()

    terms = [(float(pi), float(vi)) for pi, vi in zip(p, v)]
    boundary_mass = 0.0
    if base.mass_at_max == 0.0:
        sum_q = alpha * sum(pi / (vmax - vi) for pi, vi in terms)
        if sum_q <= 1.0:
            c = vmax
            boundary_mass = 1.0 - sum_q
        else:
            c = _solve_interior(alpha, terms, vmax)
    else:
        c = _solve_interior(alpha, terms, vmax)

    value = c - alpha + alpha * sum(pi * math.log(alpha / (c - vi)) for pi, vi in terms)

    q = np.zeros_like(base.weights)
    q[base.weights > 0] = alpha * p / (c - v)
    if boundary_mass > 0.0:
        q[-1] += boundary_mass
    witness = canonicalize(zip(base.values, q))
    return CgfBoundResult(value, c, boundary_mass, witness)


def _solve_interior(alpha: float, terms: list[tuple[float, float]], vmax: float) -> float:
    # g'(c) = 1 - alpha sum p_i/(c - v_i): negative at v_max+, >= 0 at v_max+alpha
    lo, hi = vmax, vmax + alpha
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if 1.0 - alpha * sum(pi / (mid - vi) for pi, vi in terms) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _C_TOL:
            break
    return 0.5 * (lo + hi)


def cgf_bound_scaled(dp: DPSpec, lam: float, u: float) -> float:
    """Conjugate bound for the recentered, rescaled payoff lam * (v - u)."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if lam == 0.0:
        return 0.0
    scaled = canonicalize((lam * (v - u), w) for v, w in dp.base.atoms)
    return cgf_bound(DPSpec(dp.alpha, scaled)).value


def gamma_log_mgf(dp: DPSpec) -> float:
    """Log-MGF of the Gamma process with shape alpha * base at the payoff.

    Equals -alpha * E_base[log(1 - v)]; requires every payoff value <= 1
    and zero base mass at the value 1 exactly.
    """
    base = dp.base
    if base.v_max > 1.0:
        raise ValueError("all payoff values must be <= 1")
    v, p = base.positive()
    if v.size and v[-1] == 1.0:
        raise ValueError("base mass at payoff value 1 is not allowed")
    return -dp.alpha * float(np.sum(p * np.log1p(-v)))


def tail_bound_single(dp: DPSpec, u: float) -> float:
    """Chernoff tail bound exp(-alpha * kinf(base, u)) in [0, 1]."""
    k = kinf(dp.base, u).value
    if math.isinf(k):
        return 0.0
    return min(1.0, math.exp(-dp.alpha * k))


def beta_cgf_bound(a: float, b: float, lam: float) -> float:
    """Closed-form CGF bound for a centered Beta(a, b) random variable.

    Evaluates max_{s in [a/(a+b), 1]} lam (s - a/(a+b)) - (a+b) kl(a/(a+b), s)
    at the stationary point s = (lam - (a+b) + sqrt((lam - (a+b))^2 + 4 lam a)) / (2 lam),
    rationalized to avoid cancellation for small lam.
    """
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if lam == 0.0:
        return 0.0
    p = a / (a + b)
    diff = lam - (a + b)
    root = math.sqrt(diff * diff + 4.0 * lam * a)
    denom = root - diff if diff <= 0 else 4.0 * lam * a / (root + diff)
    s = min(2.0 * a / denom, 1.0)
    # s = p is always feasible, so the maximum is nonnegative
    return max(lam * (s - p) - (a + b) * kl_bernoulli(p, s), 0.0)
