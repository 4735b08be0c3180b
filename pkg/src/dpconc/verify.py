"""Self-validation suites: oracles, duality gaps, and Monte Carlo checks.

Each suite returns a report dict with one record per check; the CLI
turns a failed suite into exit code 1.  Margins are positive slack --
how far the observed quantity sits inside its allowed band.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from .cgf import cgf_bound, cgf_bound_scaled, gamma_log_mgf, tail_bound_single
from .kinf import kinf
from .measures import DPSpec, WeightedValues, canonicalize, kl_discrete
from .sampler import (
    mc_log_mgf,
    moment_nested,
    qk_rk,
    sample_payoff_means,
    sample_stick_breaking,
)
from .sums import SumSpec, region_radius, sum_tail_bound

__all__ = ["SUITES", "run_suite"]

_BERNOULLI_HALF = canonicalize([(0.0, 0.5), (1.0, 0.5)])


def _check(name: str, passed: bool, margin: float, **extra) -> dict:
    rec = {"name": name, "passed": bool(passed), "margin": float(margin)}
    rec.update(extra)
    return rec


def _report(suite: str, checks: list[dict]) -> dict:
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}


def random_measure(rng: np.random.Generator, n_atoms: int, ambient_prob: float = 0.3) -> WeightedValues:
    """Random canonical measure on [0,1] with well-separated atoms.

    With probability ``ambient_prob`` one atom is zeroed out, so the
    boundary branches of the solvers get exercised.
    """
    while True:
        vals = np.sort(rng.uniform(0.0, 1.0, n_atoms))
        if n_atoms == 1 or np.min(np.diff(vals)) > 1e-3:
            break
    w = rng.dirichlet(np.ones(n_atoms))
    if n_atoms > 1 and rng.random() < ambient_prob:
        w[rng.integers(n_atoms)] = 0.0
    return canonicalize(zip(vals, w))


def _minimize_convex(f, lo: float, hi: float, iters: int = 200) -> float:
    """Golden-section minimum of a scalar convex function on [lo, hi]."""
    gold = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - gold * (hi - lo)
    x2 = lo + gold * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gold * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gold * (hi - lo)
            f2 = f(x2)
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            break
    return f(0.5 * (lo + hi))


def chernoff_minimum_gamma(dp: DPSpec, u: float) -> float:
    """min over lam in [0, 1/(v_max - u)] of the Gamma log-MGF at lam (v - u)."""
    vmax = dp.base.v_max
    if u >= vmax:
        raise ValueError("u must be below v_max")
    lam_max = 1.0 / (vmax - u)

    def objective(lam: float) -> float:
        payoff = canonicalize(
            (min(lam * (v - u), 1.0), w) for v, w in dp.base.atoms
        )
        return gamma_log_mgf(DPSpec(dp.alpha, payoff))

    return _minimize_convex(objective, 0.0, lam_max)


def min_scaled_conjugate(dp: DPSpec, u: float) -> float:
    """min over lam >= 0 of the conjugate bound at payoff lam (v - u)."""

    def f(lam: float) -> float:
        return cgf_bound_scaled(dp, lam, u)

    hi, f_hi = 1.0, f(1.0)
    for _ in range(200):
        f_next = f(2.0 * hi)
        if f_next >= f_hi:
            break
        hi *= 2.0
        f_hi = f_next
    return _minimize_convex(f, 0.0, 2.0 * hi)


# -- suites ----------------------------------------------------------------


def suite_duality(seed: int, samples: int = 200, tol: float = 1e-6) -> dict:
    """Scaled-conjugate minimum vs the half-space projection, two routes."""
    rng = np.random.default_rng(seed)
    gamma_tol = 1e-9
    worst_conj, worst_gamma = 0.0, 0.0
    for _ in range(samples):
        base = random_measure(rng, int(rng.integers(2, 6)))
        alpha = float(np.exp(rng.uniform(np.log(0.2), np.log(20.0))))
        dp = DPSpec(alpha, base)
        frac = rng.uniform(0.05, 0.95)
        u = base.mean + frac * (base.v_max - base.mean)
        if u <= base.mean or u >= base.v_max:
            continue
        k = kinf(base, u).value
        gap_conj = abs(min_scaled_conjugate(dp, u) + alpha * k)
        gap_gamma = abs(chernoff_minimum_gamma(dp, u) + alpha * k)
        worst_conj = max(worst_conj, gap_conj)
        worst_gamma = max(worst_gamma, gap_gamma)
    checks = [
        _check("conjugate_matches_projection", worst_conj < tol, tol - worst_conj,
               max_gap=worst_conj, cases=samples),
        _check("gamma_chernoff_matches_projection", worst_gamma < gamma_tol,
               gamma_tol - worst_gamma, max_gap=worst_gamma, cases=samples),
    ]
    return _report("duality", checks)


def suite_superadd(seed: int, samples: int = 500, kmax: int = 12, rel_tol: float = 1e-12) -> dict:
    """Subset-split moments never exceed the merged-process moments."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(samples):
        k = int(rng.integers(1, kmax + 1))
        alpha = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        beta = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        a = np.sort(rng.uniform(0.0, 1.0, k))
        q, r = qk_rk(alpha, beta, a, k)
        worst = min(worst, (r - q) / max(abs(r), 1e-300))
    # first-moment agreement on exactly representable inputs
    exact_ok = True
    for alpha, beta, a1 in [(1.0, 1.0, 0.5), (2.0, 0.5, 0.25), (4.0, 8.0, 0.75)]:
        q1, r1 = qk_rk(alpha, beta, [a1], 1)
        exact_ok = exact_ok and (q1 == r1)
    checks = [
        _check("qk_below_rk", worst >= -rel_tol, worst + rel_tol,
               min_relative_gap=worst, cases=samples, kmax=kmax),
        _check("q1_equals_r1_exactly", exact_ok, 0.0),
    ]
    return _report("superadd", checks)


def suite_moments(seed: int, samples: int = 100_000, configs: int = 20) -> dict:
    """Closed-form nested moments vs simulation, and sampler agreement."""
    rng = np.random.default_rng(seed)
    checks = []
    worst_sigma = math.inf
    ok = True
    for _ in range(configs):
        n_atoms = int(rng.integers(2, 7))
        base = random_measure(rng, n_atoms, ambient_prob=0.0)
        alpha = float(np.exp(rng.uniform(np.log(0.5), np.log(8.0))))
        dp = DPSpec(alpha, base)
        m = int(rng.integers(1, 5))
        # nested prefix sets: A_l = first c_l atoms, c nondecreasing
        cuts = np.sort(rng.integers(1, n_atoms + 1, size=m))
        masses = [min(float(base.weights[:c].sum()), 1.0) for c in cuts]
        exact = moment_nested(dp, masses)
        w = rng.dirichlet(alpha * base.weights, size=samples)
        prod = np.ones(samples)
        for c in cuts:
            prod *= w[:, :c].sum(axis=1)
        mc, se = float(prod.mean()), float(prod.std(ddof=1)) / math.sqrt(samples)
        # 1e-12 floor absorbs rounding noise on deterministic products
        sigma_gap = 3.0 * se + 1e-12 - abs(mc - exact)
        worst_sigma = min(worst_sigma, sigma_gap)
        ok = ok and sigma_gap >= 0.0
    checks.append(_check("nested_moments_within_3_sigma", ok, worst_sigma, configs=configs))

    base = canonicalize([(0.0, 0.4), (0.5, 0.35), (1.0, 0.25)])
    dp = DPSpec(3.0, base)
    n_ks = 10_000
    exact_means = sample_payoff_means(dp, n_ks, rng)
    stick_means = np.array(
        [sample_stick_breaking(dp, rng, 1e-8).payoff_mean() for _ in range(n_ks)]
    )
    ks = stats.ks_2samp(exact_means, stick_means)
    checks.append(
        _check("stick_breaking_matches_exact_ks", ks.pvalue > 0.01, ks.pvalue - 0.01,
               statistic=float(ks.statistic), pvalue=float(ks.pvalue))
    )
    return _report("moments", checks)


def suite_mc_bound(seed: int, samples: int = 100_000) -> dict:
    """Simulated log-MGFs and tails never exceed their bounds (3 sigma)."""
    rng = np.random.default_rng(seed)
    checks = []
    for alpha in (1.0, 5.0):
        dp = DPSpec(alpha, _BERNOULLI_HALF)
        bound = cgf_bound(dp).value
        est, se = mc_log_mgf(dp, samples, rng)
        checks.append(
            _check(f"log_mgf_bound_alpha_{alpha:g}", est <= bound + 3 * se,
                   bound + 3 * se - est, estimate=est, bound=bound, se=se)
        )
        means = sample_payoff_means(dp, samples, rng)
        for u in (0.6, 0.75, 0.9):
            bound_u = tail_bound_single(dp, u)
            phat = float((means >= u).mean())
            se_u = math.sqrt(phat * (1.0 - phat) / samples)
            checks.append(
                _check(f"tail_bound_alpha_{alpha:g}_u_{u:g}", phat <= bound_u + 3 * se_u,
                       bound_u + 3 * se_u - phat, empirical=phat, bound=bound_u)
            )

    # paired components: empirical sum tail vs the split bound
    spec = SumSpec([DPSpec(5.0, _BERNOULLI_HALF), DPSpec(5.0, _BERNOULLI_HALF)])
    u = 1.4
    bound_sum = sum_tail_bound(spec, u)
    sums = sample_payoff_means(spec.components[0], samples, rng) + sample_payoff_means(
        spec.components[1], samples, rng
    )
    phat = float((sums >= u).mean())
    se_u = math.sqrt(phat * (1.0 - phat) / samples)
    checks.append(
        _check("sum_tail_bound_r2", phat <= bound_sum + 3 * se_u,
               bound_sum + 3 * se_u - phat, empirical=phat, bound=bound_sum)
    )

    # region witnesses must sit on the divergence budget
    spec4 = SumSpec([DPSpec(4.0, _BERNOULLI_HALF), DPSpec(4.0, _BERNOULLI_HALF)])
    delta = math.exp(-2.0)
    res = region_radius(spec4, delta)
    spent = sum(
        c.alpha * kl_discrete(c.base, w) for c, w in zip(spec4.components, res.witnesses)
    )
    budget_gap = abs(spent - math.log(1.0 / delta))
    checks.append(
        _check("region_witness_budget", budget_gap < 1e-6, 1e-6 - budget_gap,
               spent=spent, budget=math.log(1.0 / delta), radius=res.radius)
    )
    return _report("mc-bound", checks)


def suite_ldp(seed: int, samples: int = 1_000_000) -> dict:
    """Loose asymptotic check: the empirical tail exponent approaches kinf."""
    rng = np.random.default_rng(seed)
    u = 0.75
    k_ref = kinf(_BERNOULLI_HALF, u).value
    checks = []
    for alpha, assert_band in ((20.0, False), (40.0, False), (80.0, True)):
        means = sample_payoff_means(DPSpec(alpha, _BERNOULLI_HALF), samples, rng)
        hits = int((means >= u).sum())
        stat = math.inf if hits == 0 else -math.log(hits / samples) / alpha
        rel = abs(stat - k_ref) / k_ref if math.isfinite(stat) else math.inf
        passed = (rel <= 0.25) if assert_band else True
        checks.append(
            _check(f"tail_exponent_alpha_{alpha:g}", passed,
                   (0.25 - rel) if assert_band else 0.0,
                   statistic=stat, reference=k_ref, hits=hits, asserted=assert_band)
        )
    return _report("ldp", checks)


SUITES = {
    "moments": suite_moments,
    "superadd": suite_superadd,
    "duality": suite_duality,
    "mc-bound": suite_mc_bound,
    "ldp": suite_ldp,
}


def run_suite(name: str, seed: int, samples: int | None = None, tol: float | None = None) -> dict:
    """Dispatch a named suite with optional sample-count/tolerance overrides."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    kwargs = {}
    if samples is not None:
        kwargs["samples"] = samples
    if tol is not None and name == "duality":
        kwargs["tol"] = tol
    if tol is not None and name == "superadd":
        kwargs["rel_tol"] = tol
    return fn(seed, **kwargs)
