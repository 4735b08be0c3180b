"""Dirichlet-process samplers and exact moment oracles.

Two sampling routes target the same law and cross-validate each other:
finite-support exact sampling (Dirichlet weights over the positive
atoms, i.e. normalized Gamma draws) and the stick-breaking construction
truncated at a residual tolerance.  The moment oracles -- the
nested-set product formula, the split polynomials Q_k / R_k, and the
concave two-term maximum -- are closed-form and validate every bound in
the package against simulation.

All sampling takes an explicit numpy Generator; equal seeds give
bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import DPSpec

__all__ = [
    "DPSample",
    "sample_exact",
    "sample_payoff_means",
    "sample_stick_breaking",
    "moment_nested",
    "qk_rk",
    "concave_split_max",
    "mc_log_mgf",
]

_MAX_SUBSET_K = 20


@dataclass(frozen=True)
class DPSample:
    """One realization: payoff values with their random weights."""

    values: np.ndarray
    weights: np.ndarray

    def payoff_mean(self) -> float:
        return float(self.weights @ self.values)


def sample_exact(dp: DPSpec, rng: np.random.Generator) -> DPSample:
    """Draw one realization over the base's atom set.

    Weights over the positive atoms are Dirichlet(alpha * p_1, ...,
    alpha * p_k); zero-weight (ambient) atoms receive weight 0.
    """
    mask = dp.base.weights > 0
    w = np.zeros_like(dp.base.weights)
    if int(mask.sum()) == 1:
        w[mask] = 1.0  # degenerate Dirichlet: skip the (deterministic) draw
    else:
        w[mask] = rng.dirichlet(dp.alpha * dp.base.weights[mask])
    return DPSample(dp.base.values.copy(), w)


def sample_payoff_means(dp: DPSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent draws of E_X[v], vectorized over exact samples."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v, p = dp.base.positive()
    w = rng.dirichlet(dp.alpha * p, size=n)
    return w @ v


def sample_stick_breaking(
    dp: DPSpec, rng: np.random.Generator, residual_tol: float
) -> DPSample:
    """Draw one realization by breaking sticks until the leftover is small.

    Atom locations come iid from the base, stick fractions from
    Beta(1, alpha); once the unassigned mass drops below
    ``residual_tol`` it is handed to one extra base draw, so weights
    always sum to 1.
    """
    if not (0.0 < residual_tol < 1.0):
        raise ValueError("residual_tol must be in (0,1)")
    v, p = dp.base.positive()
    values, weights = [], []
    remaining = 1.0
    while remaining >= residual_tol:
        omega = rng.choice(v, p=p)
        frac = rng.beta(1.0, dp.alpha)
        values.append(float(omega))
        weights.append(frac * remaining)
        remaining *= 1.0 - frac
    values.append(float(rng.choice(v, p=p)))
    weights.append(remaining)
    return DPSample(np.asarray(values), np.asarray(weights))


def moment_nested(dp: DPSpec, nu0_of_sets) -> float:
    """E[prod_l X(A_l)] for nested measurable sets A_1 c ... c A_m.

    Only the base masses a_l = nu0(A_l) enter; the exact value is
    prod_l (alpha a_l + l - 1) / (alpha + l - 1).
    """
    a = np.asarray(list(nu0_of_sets), dtype=float)
    if a.size == 0:
        raise ValueError("need at least one set mass")
    if np.any(a < 0) or np.any(a > 1):
        raise ValueError("set masses must lie in [0,1]")
    if np.any(np.diff(a) < 0):
        raise ValueError("set masses must be nondecreasing (nested sets)")
    # rank offsets precomputed: alpha*a + (l-1) must not absorb tiny masses
    ell0 = np.arange(a.size, dtype=float)
    return float(np.prod((dp.alpha * a + ell0) / (dp.alpha + ell0)))


def _nested_products_all_subsets(conc: float, a: np.ndarray, k: int) -> np.ndarray:
    """E[prod_{l in S} X(A_l)] for every S subset [k], indexed by bitmask.

    Within a subset, the l-th smallest member contributes factor
    (conc * a_l + rank - 1) / (conc + rank - 1) where rank counts its
    position inside the subset.
    """
    masks = np.arange(1 << k, dtype=np.int64)
    pop = np.zeros(1 << k, dtype=np.int64)
    for b in range(k):
        pop += (masks >> b) & 1
    t = np.ones(1 << k, dtype=float)
    for b in range(k):
        sel = ((masks >> b) & 1) == 1
        rank_below = pop[masks[sel] & ((1 << b) - 1)].astype(float)
        t[sel] *= (conc * a[b] + rank_below) / (conc + rank_below)
    return t


def qk_rk(alpha: float, beta: float, nu0_of_sets, k: int) -> tuple[float, float]:
    """Exact subset-split moments Q_k and R_k over nested sets.

    Q_k enumerates all 2^k assignments of the k sets to a pair of
    independent processes with concentrations alpha and beta; R_k is the
    single-process moment at concentration alpha + beta.  Input masses
    are sorted ascending (nested sets ordered by inclusion).
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    if not (1 <= k <= _MAX_SUBSET_K):
        raise ValueError(f"k must be in [1, {_MAX_SUBSET_K}]")
    a = np.sort(np.asarray(list(nu0_of_sets), dtype=float))
    if a.size != k:
        raise ValueError(f"expected {k} set masses, got {a.size}")
    if np.any(a < 0) or np.any(a > 1):
        raise ValueError("set masses must lie in [0,1]")

    masks = np.arange(1 << k, dtype=np.int64)
    pop = np.zeros(1 << k, dtype=np.int64)
    for b in range(k):
        pop += (masks >> b) & 1
    t_a = _nested_products_all_subsets(alpha, a, k)
    t_b = _nested_products_all_subsets(beta, a, k)
    full = (1 << k) - 1
    q = float(np.sum(alpha**pop * beta ** (k - pop) * t_a * t_b[full ^ masks]))

    ell0 = np.arange(k, dtype=float)
    r = float(
        (alpha + beta) ** k
        * np.prod(((alpha + beta) * a + ell0) / (alpha + beta + ell0))
    )
    return q, r


def concave_split_max(s: float, t: float, j: float, x: float) -> tuple[float, float]:
    """Maximum over z in [0, j] of the two-term concave split objective.

    h(z) = (s x + z) s / (s + z) + (t x + j - z) t / (t + j - z); the
    maximizer is z* = j s / (s + t) with value
    (s + t)((s + t) x + j) / (s + t + j).
    """
    if not (s > 0 and t > 0 and j > 0):
        raise ValueError("s, t and j must be positive")
    if not (0.0 <= x <= 1.0):
        raise ValueError("x must lie in [0,1]")
    z_star = j * s / (s + t)
    value = (s + t) * ((s + t) * x + j) / (s + t + j)
    return z_star, value


def mc_log_mgf(dp: DPSpec, n: int, rng: np.random.Generator) -> tuple[float, float]:
    """Monte Carlo estimate of log E[exp(E_X[v])] with a delta-method error.

    Returns (log of the sample mean of exp(E_X[v]), standard error of
    that logarithm).
    """
    y = np.exp(sample_payoff_means(dp, n, rng))
    m = float(y.mean())
    if n == 1:
        return math.log(m), math.inf
    se = float(y.std(ddof=1)) / math.sqrt(n) / m
    return math.log(m), se
