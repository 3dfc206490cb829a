"""Harvesting-relay capacity, cut-set oracle, and the four-level example."""

import numpy as np
import pytest

import infoenergy as ie
from conftest import make_bsc

LOG2_9_HALF = 0.5 * np.log2(9.0)


def make_dm_dm_instance(kind: str) -> ie.MhcProblem:
    """Small two-hop instances whose optima sit on both search lattices."""
    bsc1 = make_bsc(0.05)
    bsc2 = make_bsc(0.11)
    free = ie.CostFn([0.0, 0.0])
    if kind == "no-harvest":
        return ie.MhcProblem(bsc1, bsc2, free, free, ie.EnergyFn([0.0, 0.0]), 1.0, 1.0)
    if kind == "constant-harvest":
        return ie.MhcProblem(bsc1, bsc2, free, free, ie.EnergyFn([0.7, 0.7]), 1.0, 1.0)
    if kind == "first-hop-bottleneck":
        # Second hop is clean; min always hits the first hop at uniform.
        clean = make_bsc(1e-3)
        return ie.MhcProblem(make_bsc(0.2), clean, free, free,
                             ie.EnergyFn([0.5, 0.5]), 1.0, 1.0)
    if kind == "second-hop-bottleneck":
        # First hop noiseless, so the value is set by the harvested budget;
        # the budget-maximizing input is a vertex of the grid.
        noiseless = ie.DmChannel.noiseless(ie.Alphabet([0.0, 1.0]))
        return ie.MhcProblem(noiseless, make_bsc(0.4), free, free,
                             ie.EnergyFn([0.0, 1.0]), 1.0, 0.0)
    if kind == "cost-tight":
        # Hop-1 budget 0.5 on cost (0, 1): optimum at the tight (1/2, 1/2).
        noiseless = ie.DmChannel.noiseless(ie.Alphabet([0.0, 1.0]))
        return ie.MhcProblem(noiseless, make_bsc(0.11), ie.CostFn([0.0, 1.0]),
                             free, ie.EnergyFn([0.0, 1.0]), 0.5, 0.5)
    raise ValueError(kind)


DM_DM_KINDS = ["no-harvest", "constant-harvest", "first-hop-bottleneck",
               "second-hop-bottleneck", "cost-tight"]


class TestMhcCapacity:
    def test_no_harvest_baseline(self):
        prob = ie.example_problem(4.0, 8.0, 1.0, energy_off=True)
        sol = ie.mhc_capacity(prob)
        assert sol.capacity_bits == pytest.approx(min(2.0, LOG2_9_HALF), abs=1e-9)
        assert sol.harvested_budget == pytest.approx(8.0)

    def test_first_hop_bottleneck(self):
        # Huge clean second hop: capacity equals the hop-1 constrained value.
        hop1 = make_bsc(0.11)
        hop2 = ie.DmChannel.noiseless(ie.Alphabet(list(range(8))))
        prob = ie.MhcProblem(hop1, hop2, ie.CostFn([0.0, 0.0]),
                             ie.CostFn(np.zeros(8)), ie.EnergyFn([1.0, 1.0]),
                             1.0, 0.0)
        sol = ie.mhc_capacity(prob)
        want = ie.dm_capacity_with_cost(hop1, ie.CostFn([0.0, 0.0]), 1.0)
        assert sol.capacity_bits == pytest.approx(want.capacity_bits, abs=1e-9)

    def test_dead_second_hop(self):
        hop1 = make_bsc(0.05)
        dead = ie.DmChannel.point_to_point(
            ie.Alphabet([0.0, 1.0]), ie.Alphabet([0.0, 1.0]), [[1, 0], [1, 0]])
        prob = ie.MhcProblem(hop1, dead, ie.CostFn([0, 0]), ie.CostFn([0, 0]),
                             ie.EnergyFn([1.0, 1.0]), 1.0, 5.0)
        sol = ie.mhc_capacity(prob)
        assert sol.capacity_bits == pytest.approx(0.0, abs=1e-9)

    def test_infeasible_first_hop_budget(self):
        hop1 = ie.DmChannel.noiseless(ie.Alphabet([-2.0, -1.0, 1.0, 2.0]))
        prob = ie.MhcProblem(hop1, ie.AwgnSpec(1.0), ie.CostFn([4, 1, 1, 4]),
                             None, ie.EnergyFn([4, 1, 1, 4]), 0.5, 0.0)
        with pytest.raises(ie.InfeasibleError):
            ie.mhc_capacity(prob)

    def test_matches_scalar_example_solver(self):
        for n0 in (0.1, 1.0, 4.0, 16.0):
            sol = ie.mhc_capacity(ie.example_problem(4.0, 0.0, n0))
            want, _ = ie.mhc_example_capacity(4.0, 0.0, n0)
            assert sol.capacity_bits == pytest.approx(want, abs=2e-3)

    def test_monotone_in_budgets_and_energy(self):
        """More first-hop power, relay supply, or harvest never hurts.

        Run on the plain grid (no refinement) so the candidate sets are
        literally nested and the comparison is exact.
        """
        spec = ie.MhcGridSpec(steps=33, refine_passes=0)
        base = ie.example_problem(2.0, 0.5, 1.0)
        cap = ie.mhc_capacity(base, spec).capacity_bits
        more_p1 = ie.example_problem(3.0, 0.5, 1.0)
        more_p2 = ie.example_problem(2.0, 1.5, 1.0)
        assert ie.mhc_capacity(more_p1, spec).capacity_bits >= cap - 1e-12
        assert ie.mhc_capacity(more_p2, spec).capacity_bits >= cap - 1e-12
        boosted = ie.MhcProblem(base.hop1, base.hop2, base.c1, None,
                                ie.EnergyFn(base.b.values * 2.0),
                                base.p1_budget, base.p2_budget)
        assert ie.mhc_capacity(boosted, spec).capacity_bits >= cap - 1e-12

    def test_sandwich_bounds(self):
        prob = make_dm_dm_instance("constant-harvest")
        sol = ie.mhc_capacity(prob)
        hop1_cap = ie.dm_capacity_with_cost(prob.hop1, prob.c1, prob.p1_budget)
        assert sol.capacity_bits <= hop1_cap.capacity_bits + 1e-9
        hop2_cap = ie.dm_capacity_with_cost(
            prob.hop2, prob.c2, prob.p2_budget + float(prob.b.values.max()))
        assert sol.capacity_bits <= hop2_cap.capacity_bits + 1e-9


class TestCutsetOracle:
    @pytest.mark.parametrize("kind", DM_DM_KINDS)
    def test_nested_solver_attains_cutset(self, kind):
        prob = make_dm_dm_instance(kind)
        nested = ie.mhc_capacity(prob).capacity_bits
        cutset = ie.cutset_joint_oracle(prob, steps=21)
        assert nested == pytest.approx(cutset, abs=1e-3)

    def test_example_instance_within_grid_tolerance(self):
        prob = ie.example_problem(4.0, 0.0, 4.0)
        nested = ie.mhc_capacity(prob).capacity_bits
        cutset = ie.cutset_joint_oracle(prob, steps=21)
        assert nested == pytest.approx(cutset, abs=0.05)

    def test_decoupled_equals_separate_maxima(self):
        prob = make_dm_dm_instance("no-harvest")
        got = ie.cutset_joint_oracle(prob, steps=21)
        m1 = ie.dm_capacity_with_cost(prob.hop1).capacity_bits
        m2 = ie.dm_capacity_with_cost(prob.hop2).capacity_bits
        assert got == pytest.approx(min(m1, m2), abs=1e-3)

    def test_zero_capacity_second_hop(self):
        dead = ie.DmChannel.point_to_point(
            ie.Alphabet([0.0, 1.0]), ie.Alphabet([0.0, 1.0]), [[1, 0], [1, 0]])
        prob = ie.MhcProblem(make_bsc(0.05), dead, ie.CostFn([0, 0]),
                             ie.CostFn([0, 0]), ie.EnergyFn([1, 1]), 1.0, 1.0)
        assert ie.cutset_joint_oracle(prob, steps=11) == pytest.approx(0.0, abs=1e-12)

    def test_size_guard(self):
        prob = make_dm_dm_instance("no-harvest")
        with pytest.raises(ValueError):
            ie.cutset_joint_oracle(prob, steps=22)


class TestExampleCapacity:
    def test_high_snr_information_transfer(self):
        cap, p_star = ie.mhc_example_capacity(4.0, 0.0, 0.001)
        assert cap == pytest.approx(2.0, abs=1e-3)
        assert p_star == pytest.approx(0.25, abs=1e-3)

    def test_low_snr_energy_transfer(self):
        cap, p_star = ie.mhc_example_capacity(4.0, 0.0, 100.0)
        assert p_star == pytest.approx(0.5, abs=1e-3)
        assert cap == pytest.approx(0.5 * np.log2(1 + 4.0 / 100.0), abs=1e-4)

    def test_first_term_dominates_at_quarter(self):
        # Second hop good enough that the entropy term is the binding one.
        cap, p_star = ie.mhc_example_capacity(4.0, 0.0, 0.01)
        second = ie.awgn_capacity(0.25 * 6 + 1, 0.01)
        assert second > 2.0
        assert cap == pytest.approx(2.0, abs=1e-3)

    def test_budget_restricts_p(self):
        # P1 = 2.5 caps p at (P1-1)/6 = 0.25; the smallest-in-tie rule may
        # sit a hair below the cap where the objective is nearly flat.
        _, p_star = ie.mhc_example_capacity(2.5, 0.0, 100.0)
        assert p_star == pytest.approx(0.25, abs=1e-4)
        assert p_star <= 0.25

    def test_infeasible_budget(self):
        with pytest.raises(ie.InfeasibleError):
            ie.mhc_example_capacity(0.5, 0.0, 1.0)

    def test_matches_scalar_scan_oracle(self):
        """Plain dense scan (no refinement, no tie logic) as reference."""
        for n0 in (0.05, 0.5, 2.0, 20.0):
            ps = np.linspace(0.0, 0.5, 20001)
            first = ie.symmetric_input_entropy(ps)
            second = 0.5 * np.log2(1 + (6 * ps + 1) / n0)
            want = float(np.minimum(first, second).max())
            got, _ = ie.mhc_example_capacity(4.0, 0.0, n0)
            assert got == pytest.approx(want, abs=1e-4)

    def test_harvesting_beats_no_harvest_baseline(self):
        """Free energy at the relay can only raise the rate.

        The smallest-p tie rule may give away up to its 1e-6-bit window.
        """
        for p2 in (0.0, 1.0, 4.0):
            for n0 in (0.1, 1.0, 10.0):
                cap, _ = ie.mhc_example_capacity(4.0, p2, n0)
                baseline = min(2.0, ie.awgn_capacity(p2, n0))
                assert cap >= baseline - 2e-6


class TestSnrSweep:
    def test_endpoints_and_monotone_p(self):
        rows = ie.relay_snr_sweep(4.0, 0.0, np.linspace(-20, 60, 81))
        ps = [r.p_star for r in rows]
        assert ps[0] == pytest.approx(0.5, abs=1e-9)
        assert ps[-1] == pytest.approx(0.25, abs=1e-3)
        assert rows[-1].capacity_bits == pytest.approx(2.0, abs=1e-3)
        assert all(b <= a + 1e-12 for a, b in zip(ps, ps[1:]))

    def test_snr_to_noise_mapping(self):
        rows = ie.relay_snr_sweep(4.0, 0.0, [0.0, 10.0])
        assert rows[0].n0 == pytest.approx(1.0)
        assert rows[1].n0 == pytest.approx(0.5)
        rows10 = ie.relay_snr_sweep(4.0, 0.0, [10.0], snr_log10=True)
        assert rows10[0].n0 == pytest.approx(0.1)

    def test_threads_match_serial(self):
        grid = list(np.linspace(-5, 25, 7))
        a = ie.relay_snr_sweep(4.0, 0.0, grid, threads=1)
        b = ie.relay_snr_sweep(4.0, 0.0, grid, threads=4)
        assert a == b

    def test_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            ie.relay_snr_sweep(4.0, 0.0, [10.0, 0.0])
