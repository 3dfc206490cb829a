"""Cost-constrained point-to-point capacity."""

import numpy as np
import pytest

import infoenergy as ie
from conftest import binary_entropy, make_bsc


class TestAwgnCapacity:
    def test_values(self):
        assert ie.awgn_capacity(4.0, 1.0) == pytest.approx(0.5 * np.log2(5), abs=1e-12)
        assert ie.awgn_capacity(4.0, 1.0) == pytest.approx(1.1610, abs=5e-5)
        assert ie.awgn_capacity(0.0, 1.0) == 0.0
        assert ie.awgn_capacity(3.0, 1.0) == pytest.approx(1.0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            ie.awgn_capacity(1.0, 0.0)
        with pytest.raises(ValueError):
            ie.awgn_capacity(-0.1, 1.0)


class TestDmCapacityWithCost:
    def test_noiseless_binary_free(self):
        ch = ie.DmChannel.noiseless(ie.Alphabet([0.0, 1.0]))
        res = ie.dm_capacity_with_cost(ch, ie.CostFn([0.0, 0.0]), 5.0)
        assert res.capacity_bits == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(res.input_pmf.probs, [0.5, 0.5], atol=1e-6)

    def test_bsc_unconstrained(self):
        res = ie.dm_capacity_with_cost(make_bsc(0.11))
        assert res.capacity_bits == pytest.approx(1.0 - binary_entropy(0.11), abs=1e-9)

    def test_budget_pins_cheapest_symbols(self):
        # Only pmfs supported on {-1, 1} satisfy E[X^2] <= 1 on these levels.
        ch = ie.DmChannel.noiseless(ie.Alphabet([-2.0, -1.0, 1.0, 2.0]))
        c = ie.CostFn([4.0, 1.0, 1.0, 4.0])
        res = ie.dm_capacity_with_cost(ch, c, 1.0)
        assert res.capacity_bits == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(res.input_pmf.probs, [0.0, 0.5, 0.5, 0.0], atol=1e-9)
        assert res.expected_cost <= 1.0 + 1e-9

    def test_budget_exhaustive_cross_check(self):
        """Grid oracle over the input simplex confirms the solver value."""
        ch = ie.DmChannel.noiseless(ie.Alphabet([-2.0, -1.0, 1.0, 2.0]))
        c = ie.CostFn([4.0, 1.0, 1.0, 4.0])
        budget = 2.0
        grid = ie.simplex_grid(4, 41)
        ok = grid @ c.values <= budget + 1e-12
        best = max(ie.mutual_information(ie.Pmf(row), ch) for row in grid[ok])
        res = ie.dm_capacity_with_cost(ch, c, budget)
        assert res.capacity_bits >= best - 1e-9
        assert res.expected_cost <= budget + 1e-9

    def test_infeasible_budget(self):
        ch = ie.DmChannel.noiseless(ie.Alphabet([-2.0, -1.0, 1.0, 2.0]))
        c = ie.CostFn([4.0, 1.0, 1.0, 4.0])
        with pytest.raises(ie.InfeasibleError):
            ie.dm_capacity_with_cost(ch, c, 0.5)

    def test_iterates_non_decreasing(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            W = rng.dirichlet(np.ones(3), size=4)
            ch = ie.DmChannel.point_to_point(
                ie.Alphabet([0.0, 1.0, 2.0, 3.0]), ie.Alphabet([0.0, 1.0, 2.0]), W)
            c = ie.CostFn(rng.uniform(0, 2, size=4))
            res = ie.dm_capacity_with_cost(ch, c, float(c.values.mean()))
            its = res.iterates
            assert all(b >= a - 1e-10 for a, b in zip(its, its[1:]))

    def test_constraint_active_or_interior(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            W = rng.dirichlet(np.ones(3), size=3)
            ch = ie.DmChannel.point_to_point(
                ie.Alphabet([0.0, 1.0, 2.0]), ie.Alphabet([0.0, 1.0, 2.0]), W)
            c = ie.CostFn(rng.uniform(0.1, 2, size=3))
            budget = float(rng.uniform(c.values.min(), c.values.max()))
            res = ie.dm_capacity_with_cost(ch, c, budget)
            assert res.expected_cost <= budget + 1e-9
