import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy import optimize

from conftest import measures, random_measure
from oracles import kinf_grid_three_atoms, kinf_grid_two_atoms
from dpconc.cgf import cgf_bound
from dpconc.kinf import kinf, kinf_inverse, kinf_slope
from dpconc.measures import DPSpec, canonicalize, kl_bernoulli

BER_HALF = canonicalize([(0.0, 0.5), (1.0, 0.5)])


class TestKinfExamples:
    def test_zero_at_mean(self):
        res = kinf(BER_HALF, 0.5)
        assert res.value == 0.0
        assert res.lambda_star == 0.0

    def test_bernoulli_reference(self):
        res = kinf(BER_HALF, 0.75)
        assert res.value == pytest.approx(kl_bernoulli(0.5, 0.75), abs=1e-10)
        assert res.diagnostic == pytest.approx(1.0, abs=1e-6)

    def test_point_mass_with_ambient_top(self):
        base = canonicalize([(0.0, 1.0), (1.0, 0.0)])
        res = kinf(base, 0.5)
        assert res.value == pytest.approx(math.log(2.0), abs=1e-10)
        assert res.at_boundary
        assert res.lambda_star == pytest.approx(2.0, abs=1e-10)

    def test_above_top_is_infinite(self):
        assert kinf(BER_HALF, 1.0).value == math.inf
        assert kinf(BER_HALF, 1.5).value == math.inf

    def test_point_mass_at_top(self):
        base = canonicalize([(0.0, 0.0), (1.0, 1.0)])
        assert kinf(base, 1.0).value == 0.0
        assert kinf(base, 1.0 + 1e-9).value == math.inf

    def test_single_atom(self):
        base = canonicalize([(0.3, 1.0)])
        assert kinf(base, 0.2).value == 0.0
        assert kinf(base, 0.3).value == 0.0
        assert kinf(base, 0.4).value == math.inf

    def test_rejects_nonfinite_level(self):
        with pytest.raises(ValueError):
            kinf(BER_HALF, math.nan)


class TestKinfProperties:
    @given(measures(min_atoms=2))
    def test_zero_iff_at_most_mean(self, base):
        mean, vmax = base.mean, base.v_max
        assert kinf(base, mean).value <= 1e-12
        assert kinf(base, mean - 0.25).value == 0.0
        if vmax > mean:
            u = mean + 0.3 * (vmax - mean)
            assert kinf(base, u).value > 1e-12

    def test_convex_in_level(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            base = random_measure(rng, int(rng.integers(2, 6)))
            mean, vmax = base.mean, base.v_max
            if vmax <= mean:
                continue
            a, b = np.sort(mean + rng.uniform(0.01, 0.99, 2) * (vmax - mean))
            mid = kinf(base, (a + b) / 2).value
            assert mid <= (kinf(base, a).value + kinf(base, b).value) / 2 + 1e-9

    def test_diagnostic_contract(self):
        rng = np.random.default_rng(3)
        for _ in range(120):
            base = random_measure(rng, int(rng.integers(2, 6)))
            mean, vmax = base.mean, base.v_max
            if vmax <= mean:
                continue
            u = mean + rng.uniform(0.02, 0.98) * (vmax - mean)
            res = kinf(base, u)
            assert res.diagnostic <= 1.0 + 1e-9
            assert 0.0 <= res.lambda_star <= 1.0 / (vmax - u) + 1e-12
            if res.at_boundary:
                assert base.mass_at_max == 0.0
            elif res.lambda_star > 0:
                assert abs(res.diagnostic - 1.0) <= 1e-6

    def test_atom_split_leaves_solvers_unchanged(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            base = random_measure(rng, 3, ambient_prob=0.0)
            # split the middle atom into two equal-value halves
            (v0, p0), (v1, p1), (v2, p2) = base.atoms
            frac = rng.uniform(0.1, 0.9)
            split = canonicalize(
                [(v0, p0), (v1, frac * p1), (v1, (1 - frac) * p1), (v2, p2)]
            )
            u = base.mean + 0.4 * (base.v_max - base.mean)
            assert kinf(split, u).value == pytest.approx(kinf(base, u).value, abs=1e-9)
            alpha = float(rng.uniform(0.5, 5.0))
            assert cgf_bound(DPSpec(alpha, split)).value == pytest.approx(
                cgf_bound(DPSpec(alpha, base)).value, abs=1e-9
            )


class TestKinfOracles:
    def test_two_atom_grid(self):
        rng = np.random.default_rng(6)
        for _ in range(40):
            base = random_measure(rng, 2)
            u = base.mean + rng.uniform(0.02, 0.95) * (base.v_max - base.mean)
            if u >= base.v_max:
                continue
            assert kinf(base, u).value == pytest.approx(
                kinf_grid_two_atoms(base, u), abs=1e-4
            )

    def test_three_atom_segment_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            base = random_measure(rng, 3)
            u = base.mean + rng.uniform(0.02, 0.95) * (base.v_max - base.mean)
            if u >= base.v_max:
                continue
            assert kinf(base, u).value == pytest.approx(
                kinf_grid_three_atoms(base, u, points=100_000), abs=1e-4
            )

    def test_many_atoms_against_primal_solver(self):
        # independent route: constrained primal minimization of the KL
        rng = np.random.default_rng(8)
        for _ in range(12):
            base = random_measure(rng, int(rng.integers(4, 6)), ambient_prob=0.0)
            v, p = base.positive()
            u = base.mean + rng.uniform(0.1, 0.8) * (base.v_max - base.mean)

            def neg_entropy(q):
                return float(np.sum(p * np.log(p / np.maximum(q, 1e-300))))

            cons = [
                {"type": "eq", "fun": lambda q: q.sum() - 1.0},
                {"type": "ineq", "fun": lambda q: q @ v - u},
            ]
            best = math.inf
            for _attempt in range(5):
                q0 = rng.dirichlet(np.ones(v.size))
                r = optimize.minimize(
                    neg_entropy,
                    q0,
                    bounds=[(1e-12, 1.0)] * v.size,
                    constraints=cons,
                    method="SLSQP",
                    options={"maxiter": 500, "ftol": 1e-14},
                )
                if r.success:
                    best = min(best, float(r.fun))
            assert kinf(base, u).value == pytest.approx(best, abs=1e-5)


class TestKinfSlope:
    def test_zero_at_or_below_mean(self):
        assert kinf_slope(BER_HALF, 0.5) == 0.0
        assert kinf_slope(BER_HALF, 0.2) == 0.0

    def test_matches_finite_differences(self):
        h = 1e-5
        fd = (kinf(BER_HALF, 0.75 + h).value - kinf(BER_HALF, 0.75 - h).value) / (2 * h)
        assert kinf_slope(BER_HALF, 0.75) == pytest.approx(fd, abs=1e-4)

    def test_monotone_on_grid(self):
        grid = np.arange(0.55, 0.951, 0.05)
        slopes = [kinf_slope(BER_HALF, u) for u in grid]
        assert all(b >= a - 1e-9 for a, b in zip(slopes, slopes[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            kinf_slope(BER_HALF, -0.1)
        with pytest.raises(ValueError):
            kinf_slope(BER_HALF, 1.0)


class TestKinfInverse:
    def test_zero_budget_returns_mean(self):
        assert kinf_inverse(BER_HALF, 0.0) == pytest.approx(0.5, abs=1e-9)

    def test_reference_budget(self):
        assert kinf_inverse(BER_HALF, 0.25) == pytest.approx(0.8136356725116606, abs=1e-9)

    def test_huge_budget_approaches_top(self):
        assert kinf_inverse(BER_HALF, 1e6) == pytest.approx(1.0, abs=1e-9)

    def test_point_mass_hits_top_exactly(self):
        base = canonicalize([(0.25, 1.0)])
        assert kinf_inverse(base, 0.1) == 0.25

    def test_negative_budget_rejected(self):
        with pytest.raises(ValueError):
            kinf_inverse(BER_HALF, -0.1)

    @settings(max_examples=25)
    @given(measures(min_atoms=2))
    def test_roundtrip_with_kinf(self, base):
        if base.v_max <= base.mean:
            return
        budget = 0.2
        u = kinf_inverse(base, budget)
        assert kinf(base, u).value <= budget + 1e-6
        if u + 1e-6 < base.v_max:
            assert kinf(base, u + 1e-6).value >= budget - 1e-6
