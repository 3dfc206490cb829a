"""Capacity of a two-hop channel whose relay harvests received energy.

The end-to-end rate is the smaller of the first-hop mutual information and
the second-hop capacity, where the relay's transmit budget is its own supply
plus the mean energy it harvests from the first hop.  The outer input
distribution is searched on a refined simplex grid; the inner problem is the
cost-constrained capacity solver (discrete hop) or the closed Gaussian form.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capacity import awgn_capacity, dm_capacity_with_cost
from .channel import (AwgnSpec, CostFn, DmChannel, EnergyFn, InfeasibleError,
                      Pmf)
from .mac_region import simplex_grid
from .metrics import entropy_bits

FEAS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MhcProblem:
    """Two separated hops, a harvesting relay, and per-hop cost budgets."""

    hop1: DmChannel
    hop2: DmChannel | AwgnSpec
    c1: CostFn
    c2: CostFn | None
    b: EnergyFn
    p1_budget: float
    p2_budget: float

    def __post_init__(self):
        if self.hop1.is_mac:
            raise ValueError("hop 1 must be point to point")
        if len(self.c1) != len(self.hop1.input_alphabets[0]):
            raise ValueError("c1 does not match the hop-1 input alphabet")
        if len(self.b) != len(self.hop1.output_alphabet):
            raise ValueError("b does not match the hop-1 output alphabet")
        if isinstance(self.hop2, DmChannel):
            if self.hop2.is_mac:
                raise ValueError("hop 2 must be point to point")
            if self.c2 is not None and len(self.c2) != len(self.hop2.input_alphabets[0]):
                raise ValueError("c2 does not match the hop-2 input alphabet")
        if self.p1_budget < 0 or self.p2_budget < 0:
            raise ValueError("budgets must be nonnegative")


@dataclass
class MhcSolution:
    capacity_bits: float
    input_pmf: Pmf
    harvested_budget: float
    relay_pmf: Pmf | None = None
    relay_power: float | None = None


@dataclass(frozen=True)
class MhcGridSpec:
    steps: int = 65
    refine_factor: int = 8
    refine_passes: int = 1


def _second_hop_capacity(prob: MhcProblem, budget: float):
    """(bits, relay pmf or None, relay power or None) for a given budget."""
    if isinstance(prob.hop2, AwgnSpec):
        return awgn_capacity(budget, prob.hop2.n0), None, budget
    try:
        res = dm_capacity_with_cost(prob.hop2, prob.c2, budget)
    except InfeasibleError:
        return 0.0, None, None
    return res.capacity_bits, res.input_pmf, None


def mhc_capacity(prob: MhcProblem, spec: MhcGridSpec | None = None) -> MhcSolution:
    """Best end-to-end rate over first-hop input pmfs within the cost budget.

    For each candidate p(x1) the value is min(I(X1;Y1), second-hop capacity
    at budget E[b(Y1)] + P2); candidates are screened in decreasing budget
    order so most inner solves are pruned by the running best.
    """
    spec = spec or MhcGridSpec()
    W1 = prob.hop1.transition
    c1 = prob.c1.values
    if c1.min() > prob.p1_budget + FEAS_TOL:
        raise InfeasibleError(
            f"budget {prob.p1_budget} is below the cheapest hop-1 symbol cost {c1.min()}")
    beta = W1 @ prob.b.values  # mean harvested energy per input symbol
    h_rows = entropy_bits(W1)

    awgn = isinstance(prob.hop2, AwgnSpec)
    inner_cache: dict[float, float] = {}

    def inner_bits(budget: float) -> float:
        if awgn:
            return awgn_capacity(budget, prob.hop2.n0)
        hit = inner_cache.get(budget)
        if hit is None:
            hit = _second_hop_capacity(prob, budget)[0]
            inner_cache[budget] = hit
        return hit

    def stage_best(cands: np.ndarray):
        ec = cands @ c1
        keep = ec <= prob.p1_budget + FEAS_TOL
        cands = cands[keep]
        if cands.shape[0] == 0:
            return None
        i1 = entropy_bits(cands @ W1) - cands @ h_rows
        budgets = cands @ beta + prob.p2_budget
        if awgn:
            g = awgn_capacity_vec(budgets, prob.hop2.n0)
            vals = np.minimum(i1, g)
            # Among value ties, keep headroom in the slack term so later
            # refinement can trade it against the binding one.
            near = vals >= vals.max() - 1e-12
            sub = int(np.argmax(np.where(near, i1 + g, -np.inf)))
            return float(vals[sub]), cands[sub]
        order = np.argsort(-budgets)
        best_val, best_p = -np.inf, None
        for j in order:
            if i1[j] <= best_val:
                continue
            g = inner_bits(float(budgets[j]))
            if g <= best_val:
                break  # budgets only shrink from here on
            val = min(float(i1[j]), g)
            if val > best_val:
                best_val, best_p = val, cands[j]
        return (best_val, best_p) if best_p is not None else None

    n1 = W1.shape[0]
    grid = simplex_grid(n1, spec.steps)
    incumbent = None
    # A ladder of blend scales per pass keeps the simplex boundary reachable;
    # a pure geometric shrink could only creep toward low-mass optima.
    stage_scales = [[1.0]] + [
        [spec.refine_factor ** -(i + 1) * m for m in (4.0, 2.0, 1.0)]
        for i in range(spec.refine_passes)
    ]
    for scales in stage_scales:
        if incumbent is None:
            cands = grid
        else:
            parts = [incumbent[1][None, :]]
            for s in scales:
                s = min(s, 1.0)
                parts.append(incumbent[1][None, :] * (1 - s) + grid * s)
            cands = np.vstack(parts)
        found = stage_best(cands)
        if found is not None and (incumbent is None or found[0] > incumbent[0]):
            incumbent = found
    if incumbent is None:
        raise InfeasibleError("no input pmf satisfies the hop-1 cost budget")

    value, p1 = incumbent
    budget = float(p1 @ beta) + prob.p2_budget
    bits2, relay_pmf, relay_power = _second_hop_capacity(prob, budget)
    cap = min(float(entropy_bits(p1 @ W1) - p1 @ h_rows), bits2)
    return MhcSolution(max(cap, 0.0), Pmf(np.maximum(p1, 0.0)), budget,
                       relay_pmf, relay_power)


def awgn_capacity_vec(powers: np.ndarray, n0: float) -> np.ndarray:
    return 0.5 * np.log2(1.0 + np.maximum(powers, 0.0) / n0)


def cutset_joint_oracle(prob: MhcProblem, steps: int = 21) -> float:
    """max over gridded (p(x1), p(x2)) of min(I(X1;Y1), I(X2;Y2)).

    Joint enumeration with the relay budget coupled through p(x1); the
    independent check that the nested solver attains the cut-set value.
    """
    n1 = prob.hop1.transition.shape[0]
    if n1 > 4 or (isinstance(prob.hop2, DmChannel)
                  and prob.hop2.transition.shape[0] > 4):
        raise ValueError("oracle restricted to hop alphabets of size <= 4")
    if steps > 21:
        raise ValueError("oracle restricted to steps <= 21")

    W1 = prob.hop1.transition
    g1 = simplex_grid(n1, steps)
    ec1 = g1 @ prob.c1.values
    g1 = g1[ec1 <= prob.p1_budget + FEAS_TOL]
    if g1.shape[0] == 0:
        raise InfeasibleError("no gridded input satisfies the hop-1 cost budget")
    i1 = entropy_bits(g1 @ W1) - g1 @ entropy_bits(W1)
    budgets = g1 @ (W1 @ prob.b.values) + prob.p2_budget

    if isinstance(prob.hop2, AwgnSpec):
        return float(np.max(np.minimum(i1, awgn_capacity_vec(budgets, prob.hop2.n0))))

    W2 = prob.hop2.transition
    g2 = simplex_grid(W2.shape[0], steps)
    i2 = entropy_bits(g2 @ W2) - g2 @ entropy_bits(W2)
    ec2 = g2 @ (prob.c2.values if prob.c2 is not None else np.zeros(W2.shape[0]))
    order = np.argsort(ec2, kind="stable")
    ec2_sorted = ec2[order]
    best_i2_upto = np.maximum.accumulate(i2[order])

    # For each p1, the richest affordable p2 is a prefix maximum.
    pos = np.searchsorted(ec2_sorted, budgets + FEAS_TOL, side="right") - 1
    vals = np.where(pos >= 0, np.minimum(i1, best_i2_upto[np.maximum(pos, 0)]), -np.inf)
    return float(vals.max())


# ---------------------------------------------------------------------------
# Four-level first hop feeding a Gaussian second hop
# ---------------------------------------------------------------------------
#
# The worked example: a noiseless first hop on the levels {-2, -1, 1, 2} with
# quadratic cost and harvested energy, followed by an average-power-limited
# Gaussian hop.  By symmetry the input is (p, 1/2-p, 1/2-p, p), its mean
# squared level is 6p+1, and the trade-off reduces to a scalar search on p.

EXAMPLE_LEVELS = (-2.0, -1.0, 1.0, 2.0)


def symmetric_input_entropy(p) -> np.ndarray:
    """Entropy in bits of the pmf (p, 1/2-p, 1/2-p, p) on four levels."""
    p = np.asarray(p, dtype=float)
    q = 0.5 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(p > 0, -2.0 * p * np.log2(p), 0.0)
        t2 = np.where(q > 0, -(1.0 - 2.0 * p) * np.log2(q), 0.0)
    return t1 + t2


def mhc_example_capacity(p1_budget: float, p2_budget: float, n0: float,
                         p_steps: int = 256, refine_passes: int = 1):
    """Scalar max-min over the symmetric parameter p in [0, 1/2].

    Maximizes min(entropy of the four-level input, Gaussian hop capacity at
    power P2 + 6p + 1) subject to the hop-1 cost 6p+1 <= P1, on a grid with
    one zoomed refinement pass.  Returns (capacity bits, maximizing p); ties
    within 1e-6 bits resolve to the smallest p.
    """
    if n0 <= 0:
        raise ValueError("noise variance must be positive")
    if p1_budget < 1.0 - 1e-12:
        raise InfeasibleError("hop-1 budget below the minimum mean cost 6p+1 >= 1")
    p_max = min(0.5, (p1_budget - 1.0) / 6.0)

    def objective(ps):
        second = awgn_capacity_vec(p2_budget + 6.0 * ps + 1.0, n0)
        return np.minimum(symmetric_input_entropy(ps), second)

    lo, hi = 0.0, p_max
    best_val = -np.inf
    best_p = p_max
    for _ in range(refine_passes + 1):
        ps = np.linspace(lo, hi, p_steps + 1)
        vals = objective(ps)
        top = float(vals.max())
        p_star = float(ps[vals >= top - 1e-6].min())
        if top > best_val + 1e-6 or (top >= best_val - 1e-6 and p_star < best_p):
            best_val, best_p = top, p_star
        pitch = (hi - lo) / max(p_steps, 1)
        lo = max(0.0, best_p - pitch)
        hi = min(p_max, best_p + pitch)
    return float(objective(np.array([best_p]))[0]), best_p


@dataclass
class SnrSweepRow:
    snr: float
    n0: float
    capacity_bits: float
    p_star: float


def relay_snr_sweep(p1_budget: float, p2_budget: float, snr_grid,
                    p_steps: int = 256, snr_log10: bool = False,
                    threads: int = 1):
    """Example capacity and optimal p across an SNR grid.

    SNR maps to noise power as N0 = 2**(-snr/10); pass snr_log10=True for the
    conventional decibel mapping N0 = 10**(-snr/10) instead.
    """
    snr_grid = list(snr_grid)
    if sorted(snr_grid) != snr_grid:
        raise ValueError("SNR grid must be sorted ascending")

    def solve(snr):
        n0 = 10.0 ** (-snr / 10.0) if snr_log10 else 2.0 ** (-snr / 10.0)
        cap, p_star = mhc_example_capacity(p1_budget, p2_budget, n0, p_steps)
        return SnrSweepRow(snr, n0, cap, p_star)

    if threads > 1 and len(snr_grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve, snr_grid))
    return [solve(s) for s in snr_grid]


def example_problem(p1_budget: float, p2_budget: float, n0: float,
                    energy_off: bool = False) -> MhcProblem:
    """The four-level noiseless hop + Gaussian hop instance as an MhcProblem."""
    from .channel import Alphabet

    levels = Alphabet(np.array(EXAMPLE_LEVELS))
    hop1 = DmChannel.noiseless(levels)
    squares = np.array(EXAMPLE_LEVELS) ** 2
    b = EnergyFn(np.zeros(4)) if energy_off else EnergyFn(squares)
    return MhcProblem(hop1, AwgnSpec(n0), CostFn(squares), None, b,
                      p1_budget, p2_budget)
