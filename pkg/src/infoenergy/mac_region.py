"""Capacity-energy region of a two-sender channel with a received-energy floor.

The discrete solver searches time-sharing policies (p(q), {p(x1|q)},
{p(x2|q)}) by alternating coordinate ascent on simplex grids with shrinking
refinement passes and multiple restarts; the energy and cost constraints are
enforced by feasibility filtering, never by penalties.  A brute-force grid
enumerator is provided as an independent test oracle, and the Gaussian
two-sender example (information-bearing Gaussian phase time-shared against a
constant energy-beaming phase) is solved on a coarse-to-fine grid.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .channel import CostFn, DmChannel, EnergyFn, InfeasibleError, Pmf
from .metrics import TimeSharingPolicy, entropy_bits, mac_mutual_informations

FEAS_TOL = 1e-9
TIE_TOL = 1e-6


@dataclass(frozen=True)
class RateEnergyTriple:
    """An achievable (R1, R2, B) point: rates in bits/use, energy per use."""

    r1: float
    r2: float
    b: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0 or self.b < 0:
            raise ValueError("rates and energy must be nonnegative")


@dataclass(frozen=True, eq=False)
class MacProblem:
    """Two-sender channel with cost budgets and a received-energy target."""

    channel: DmChannel
    c1: CostFn
    c2: CostFn
    b: EnergyFn
    p1_budget: float
    p2_budget: float
    b_target: float = 0.0

    def __post_init__(self):
        if not self.channel.is_mac:
            raise ValueError("MacProblem needs a two-input channel")
        n1, n2, ny = self.channel.transition.shape
        if len(self.c1) != n1 or len(self.c2) != n2 or len(self.b) != ny:
            raise ValueError("cost/energy tables do not match the channel alphabets")
        if self.p1_budget < 0 or self.p2_budget < 0 or self.b_target < 0:
            raise ValueError("budgets and energy target must be nonnegative")

    def with_target(self, b_target: float) -> "MacProblem":
        return MacProblem(self.channel, self.c1, self.c2, self.b,
                          self.p1_budget, self.p2_budget, b_target)


@dataclass(frozen=True)
class MacGridSpec:
    """Search resolution for the coordinate-ascent policy solver."""

    max_block_candidates: int = 3000
    refine_factor: int = 8
    refine_passes: int = 2
    restarts: int = 8
    max_sweeps: int = 50
    seed: int = 0


@dataclass
class MacBoundaryResult:
    feasible: bool
    triple: RateEnergyTriple | None = None
    policy: TimeSharingPolicy | None = None
    weighted_rate: float = 0.0
    reason: str = ""


@dataclass
class MacSweepRow:
    b_target: float
    w1: float
    w2: float
    feasible: bool
    r1: float
    r2: float
    eb: float


@lru_cache(maxsize=None)
def _simplex_grid_cached(dim: int, steps: int):
    if dim == 1:
        grid = np.ones((1, 1))
    else:
        t = steps - 1
        bars = np.array(list(combinations(range(t + dim - 1), dim - 1)), dtype=float)
        padded = np.hstack([
            np.full((bars.shape[0], 1), -1.0),
            bars,
            np.full((bars.shape[0], 1), float(t + dim - 1)),
        ])
        grid = (np.diff(padded, axis=1) - 1.0) / t
    grid.setflags(write=False)
    return grid


def simplex_grid(dim: int, steps: int) -> np.ndarray:
    """All pmfs on `dim` symbols with entries k/(steps-1); C(steps-2+dim, dim-1) rows."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if dim > 1 and steps < 2:
        raise ValueError("need at least 2 grid points per dimension")
    return _simplex_grid_cached(dim, steps)


def _steps_for(dim: int, budget: int) -> int:
    """Largest steps such that the simplex grid stays within the row budget."""
    steps = 2
    while True:
        nxt = steps + 1
        t = nxt - 1
        count = 1
        for i in range(dim - 1):
            count = count * (t + i + 1) // (i + 1)
        if count > budget or nxt > 257:
            return steps
        steps = nxt


def _cost_polytope_vertices(cost: np.ndarray, budget: float) -> np.ndarray:
    """Extreme points of {p on the simplex : p.cost <= budget}.

    These are the single symbols within budget plus two-symbol mixtures that
    meet the budget with equality.
    """
    n = cost.size
    verts = []
    for i in range(n):
        if cost[i] <= budget + 1e-12:
            v = np.zeros(n)
            v[i] = 1.0
            verts.append(v)
    for i in range(n):
        for j in range(i + 1, n):
            lo, hi = (i, j) if cost[i] < cost[j] else (j, i)
            if cost[lo] < budget < cost[hi]:
                a = (cost[hi] - budget) / (cost[hi] - cost[lo])
                v = np.zeros(n)
                v[lo] = a
                v[hi] = 1.0 - a
                verts.append(v)
    return np.array(verts) if verts else np.empty((0, n))


def max_received_energy(prob: MacProblem):
    """Exact maximum of E[b(Y)] over cost-feasible product input pmfs.

    The objective is bilinear in (p1, p2), so the maximum is attained at a
    pair of extreme points of the two cost polytopes, which are enumerated
    exhaustively.  Returns (value, p1, p2).
    """
    W = prob.channel.transition
    m = np.einsum("ijy,y->ij", W, prob.b.values)
    v1 = _cost_polytope_vertices(prob.c1.values, prob.p1_budget)
    v2 = _cost_polytope_vertices(prob.c2.values, prob.p2_budget)
    if v1.shape[0] == 0 or v2.shape[0] == 0:
        raise InfeasibleError("cost budgets exclude every input distribution")
    vals = v1 @ m @ v2.T
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    return float(vals[i, j]), v1[i], v2[j]


# ---------------------------------------------------------------------------
# Policy evaluation
# ---------------------------------------------------------------------------

# Policies are scored by stat vectors [I1, I2, Isum, Eb, Ec1, Ec2]; every
# entry is a p(q)-weighted average of its per-q value, so blocks can be
# re-optimized with all other blocks folded into a constant.


class _Instance:
    def __init__(self, prob: MacProblem):
        self.prob = prob
        self.W = prob.channel.transition
        self.Wt = self.W.transpose(1, 0, 2)
        self.h_rows = entropy_bits(self.W)  # (n1, n2)
        self.b = prob.b.values
        self.c1 = prob.c1.values
        self.c2 = prob.c2.values
        self.n1, self.n2, self.ny = self.W.shape


def _vary_first_input(V: np.ndarray, p_other: np.ndarray, W: np.ndarray,
                      h_rows: np.ndarray, b: np.ndarray, c_self: np.ndarray):
    """Per-q stats for candidate pmfs V on axis 0 of W, the other input fixed.

    Returns (i_self, i_other, i_sum, eb, ec_self) as length-N arrays, where
    i_self conditions on the fixed sender and i_other vice versa.
    """
    hv = h_rows @ p_other  # (n_self,) mean row entropy given self symbol
    wbar = np.einsum("j,ijy->iy", p_other, W)  # (n_self, ny)
    out = V @ wbar  # (N, ny)
    h_cond = V @ hv  # (N,)

    i_self = -h_cond.copy()
    for j, pj in enumerate(p_other):
        if pj > 0:
            i_self += pj * entropy_bits(V @ W[:, j, :])
    i_sum = entropy_bits(out) - h_cond
    i_other = V @ (entropy_bits(wbar) - hv)
    eb = out @ b
    ec_self = V @ c_self
    return i_self, i_sum, i_other, eb, ec_self


def _block_stats(inst: _Instance, which: int, V: np.ndarray, p_fixed: np.ndarray):
    """Stat matrix (N, 6) for varying input `which` (0 or 1) at one q."""
    out = np.empty((V.shape[0], 6))
    if which == 0:
        i1, i_sum, i2, eb, ec1 = _vary_first_input(
            V, p_fixed, inst.W, inst.h_rows, inst.b, inst.c1)
        ec2 = float(p_fixed @ inst.c2)
        out[:, 0], out[:, 1], out[:, 2] = i1, i2, i_sum
        out[:, 4], out[:, 5] = ec1, ec2
    else:
        i2, i_sum, i1, eb, ec2 = _vary_first_input(
            V, p_fixed, inst.Wt, inst.h_rows.T, inst.b, inst.c2)
        ec1 = float(p_fixed @ inst.c1)
        out[:, 0], out[:, 1], out[:, 2] = i1, i2, i_sum
        out[:, 4], out[:, 5] = ec1, ec2
    out[:, 3] = eb
    return out


def _per_q_stat_matrix(inst: _Instance, A1: np.ndarray, A2: np.ndarray):
    k = A1.shape[0]
    S = np.empty((k, 6))
    for qi in range(k):
        S[qi] = _block_stats(inst, 0, A1[qi:qi + 1], A2[qi])[0]
    return S


def _corner_rates(i1, i2, i_sum, w1: float, w2: float):
    """Best weighted rate over the pentagon {r1<=i1, r2<=i2, r1+r2<=i_sum}."""
    r2a = np.maximum(i_sum - i1, 0.0)
    r1b = np.maximum(i_sum - i2, 0.0)
    val_a = w1 * np.minimum(i1, i_sum) + w2 * r2a
    val_b = w1 * r1b + w2 * np.minimum(i2, i_sum)
    return np.maximum(val_a, val_b)


def _score_block(stats: np.ndarray, prob: MacProblem, w1: float, w2: float):
    """Best candidate index and its (feasible, value) score for a stat matrix."""
    viol = (np.maximum(stats[:, 4] - prob.p1_budget, 0.0)
            + np.maximum(stats[:, 5] - prob.p2_budget, 0.0)
            + np.maximum(prob.b_target - stats[:, 3], 0.0))
    feas = viol <= FEAS_TOL
    if feas.any():
        vals = _corner_rates(stats[:, 0], stats[:, 1], stats[:, 2], w1, w2)
        vals = np.where(feas, vals, -np.inf)
        idx = int(np.argmax(vals))
        return idx, (1, float(vals[idx]))
    idx = int(np.argmin(viol))
    return idx, (0, -float(viol[idx]))


def _better(a, b) -> bool:
    if a[0] != b[0]:
        return a[0] > b[0]
    return a[1] > b[1] + 1e-12


def _shrunk(grid: np.ndarray, center: np.ndarray, scales) -> np.ndarray:
    parts = [center[None, :]]
    for s in scales:
        s = min(s, 1.0)
        parts.append(grid if s >= 1.0 else center[None, :] * (1.0 - s) + grid * s)
    return np.vstack(parts)


def _coordinate_ascent(inst: _Instance, w1, w2, q, A1, A2, spec: MacGridSpec):
    prob = inst.prob
    k = q.size
    grids = {d: simplex_grid(d, _steps_for(d, spec.max_block_candidates))
             for d in {k, inst.n1, inst.n2}}
    S = _per_q_stat_matrix(inst, A1, A2)
    # Scale ladder per refinement pass so low-mass optima near the simplex
    # boundary stay reachable instead of being approached geometrically.
    stage_scales = [[1.0]] + [
        [spec.refine_factor ** -(i + 1) * m for m in (4.0, 2.0, 1.0)]
        for i in range(spec.refine_passes)
    ]

    for scales in stage_scales:
        for _ in range(spec.max_sweeps):
            _, cur = _score_block((q @ S)[None, :], prob, w1, w2)
            improved = False

            Q = _shrunk(grids[k], q, scales)
            idx, score = _score_block(Q @ S, prob, w1, w2)
            if _better(score, cur):
                q = Q[idx]
                cur = score
                improved = True

            for qi in range(k):
                if q[qi] <= 0:
                    continue
                rest = q @ S - q[qi] * S[qi]
                for which in (0, 1):
                    block = A1 if which == 0 else A2
                    fixed = A2[qi] if which == 0 else A1[qi]
                    V = _shrunk(grids[block.shape[1]], block[qi], scales)
                    stats = rest[None, :] + q[qi] * _block_stats(inst, which, V, fixed)
                    idx, score = _score_block(stats, prob, w1, w2)
                    if _better(score, cur):
                        block[qi] = V[idx]
                        S[qi] = _block_stats(inst, which, block[qi:qi + 1], fixed)[0]
                        cur = score
                        improved = True
            if not improved:
                break
    _, final = _score_block((q @ S)[None, :], prob, w1, w2)
    return q, A1, A2, final


def _result_from_policy(prob, w1, w2, q, A1, A2) -> MacBoundaryResult:
    keep = q > 1e-12
    q = q[keep] / q[keep].sum()
    A1, A2 = A1[keep], A2[keep]
    pol = TimeSharingPolicy(
        Pmf(np.maximum(q, 0.0)),
        tuple((Pmf(np.maximum(a, 0.0)), Pmf(np.maximum(b_, 0.0)))
              for a, b_ in zip(A1, A2)),
    )
    i1, i2, i_sum, eb = mac_mutual_informations(pol, prob.channel, prob.b)
    r2a = max(i_sum - i1, 0.0)
    r1b = max(i_sum - i2, 0.0)
    val_a = w1 * i1 + w2 * r2a
    val_b = w1 * r1b + w2 * i2
    if val_a > val_b + 1e-15 or (abs(val_a - val_b) <= 1e-15 and w1 >= w2):
        r1, r2, val = i1, r2a, val_a
    else:
        r1, r2, val = r1b, i2, val_b
    triple = RateEnergyTriple(max(r1, 0.0), max(r2, 0.0), max(eb, 0.0))
    return MacBoundaryResult(True, triple, pol, val)


def _best_product_seed(inst: _Instance, prob, w1, w2, budget: int):
    """Exhaustive scan over single product-pmf policies on the coarse grids."""
    g1 = simplex_grid(inst.n1, _steps_for(inst.n1, budget))
    g2 = simplex_grid(inst.n2, _steps_for(inst.n2, budget))
    best = None
    best_score = (-1, -np.inf)
    for j in range(g2.shape[0]):
        stats = _block_stats(inst, 0, g1, g2[j])
        idx, score = _score_block(stats, prob, w1, w2)
        if _better(score, best_score):
            best_score = score
            best = (g1[idx], g2[j])
    return best


def _tilted_product_scan(inst: _Instance, prob, w1, w2, mu: float, budget: int):
    """Best product policy for the energy-tilted objective rate + mu*E[b(Y)].

    Only the cost budgets are enforced; mixtures of tilted optima for
    different mu trace the energy-constrained boundary.  Returns
    (p1, p2, stats) or None.
    """
    g1 = simplex_grid(inst.n1, _steps_for(inst.n1, budget))
    g2 = simplex_grid(inst.n2, _steps_for(inst.n2, budget))
    best = None
    best_val = -np.inf
    for j in range(g2.shape[0]):
        stats = _block_stats(inst, 0, g1, g2[j])
        ok = ((stats[:, 4] <= prob.p1_budget + FEAS_TOL)
              & (stats[:, 5] <= prob.p2_budget + FEAS_TOL))
        if not ok.any():
            continue
        vals = _corner_rates(stats[:, 0], stats[:, 1], stats[:, 2], w1, w2)
        vals = np.where(ok, vals + mu * stats[:, 3], -np.inf)
        idx = int(np.argmax(vals))
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best = (g1[idx], g2[j], stats[idx].copy())
    return best


def _bracket_seed(inst: _Instance, prob, w1, w2, k: int, p1e, p2e, budget: int):
    """Two-component seed straddling the energy target, from a mu ladder."""
    lo = _tilted_product_scan(inst, prob, w1, w2, 0.0, budget)
    if lo is None or lo[2][3] >= prob.b_target:
        return None
    scale = max(_corner_rates(*lo[2][:3], w1, w2), 0.1) / max(
        prob.b_target - lo[2][3], 1e-9)
    hi = None
    for mult in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0):
        cand = _tilted_product_scan(inst, prob, w1, w2, scale * mult, budget)
        if cand is None:
            break
        if cand[2][3] >= prob.b_target:
            hi = cand
            break
        lo = cand
    if hi is None:
        emax_stats = _block_stats(inst, 0, p1e[None, :], p2e)[0]
        hi = (p1e, p2e, emax_stats)
    span = hi[2][3] - lo[2][3]
    lam = min(max((hi[2][3] - prob.b_target) / span, 0.0), 1.0) if span > 1e-12 else 0.0
    q = np.zeros(k)
    q[0], q[1] = lam, 1.0 - lam
    a1 = np.tile(hi[0], (k, 1))
    a2 = np.tile(hi[1], (k, 1))
    a1[0], a2[0] = lo[0], lo[1]
    return q, a1, a2


def mac_boundary_point(prob: MacProblem, w1: float, w2: float,
                       q_size: int = 4, spec: MacGridSpec | None = None) -> MacBoundaryResult:
    """Maximize w1*R1 + w2*R2 over time-sharing policies meeting all constraints.

    q_size up to 4 suffices for the region boundary; 5 is accepted so the
    cardinality-sufficiency property can itself be tested.  Returns an
    infeasibility result (never raises) when the energy target exceeds the
    best achievable E[b(Y)] under the cost budgets.
    """
    if not 1 <= q_size <= 5:
        raise ValueError("q_size must be between 1 and 5")
    if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
        raise ValueError("weights must be nonnegative and not both zero")
    spec = spec or MacGridSpec()

    try:
        e_max, p1e, p2e = max_received_energy(prob)
    except InfeasibleError as exc:
        return MacBoundaryResult(False, reason=str(exc))
    if prob.b_target > e_max + FEAS_TOL:
        return MacBoundaryResult(
            False, reason=f"energy target {prob.b_target} exceeds max achievable {e_max:.6g}")

    inst = _Instance(prob)
    rng = np.random.default_rng(spec.seed)
    k, n1, n2 = q_size, inst.n1, inst.n2
    u1 = np.full(n1, 1.0 / n1)
    u2 = np.full(n2, 1.0 / n2)

    # Deterministic seeds: the energy-max vertex, the uniform policy, the
    # best single product policy, blends of it toward the energy-max vertex
    # (the boundary region where energy-constrained optima live), and a
    # split policy that time-shares the product seed against the vertex.
    seeds = [
        (np.full(k, 1.0 / k), np.tile(p1e, (k, 1)), np.tile(p2e, (k, 1))),
        (np.full(k, 1.0 / k), np.tile(u1, (k, 1)), np.tile(u2, (k, 1))),
    ]
    pair = _best_product_seed(inst, prob, w1, w2, spec.max_block_candidates)
    if pair is not None:
        s1, s2 = pair
        seeds.append((np.full(k, 1.0 / k), np.tile(s1, (k, 1)), np.tile(s2, (k, 1))))
        for theta in (0.25, 0.5, 0.75):
            seeds.append((np.full(k, 1.0 / k),
                          np.tile((1 - theta) * s1 + theta * p1e, (k, 1)),
                          np.tile((1 - theta) * s2 + theta * p2e, (k, 1))))
        if k >= 2:
            a1 = np.tile(s1, (k, 1))
            a2 = np.tile(s2, (k, 1))
            a1[-1], a2[-1] = p1e, p2e
            seeds.append((np.full(k, 1.0 / k), a1, a2))
    if k >= 2 and prob.b_target > 0:
        bracket = _bracket_seed(inst, prob, w1, w2, k, p1e, p2e,
                                spec.max_block_candidates)
        if bracket is not None:
            seeds.append(bracket)
    for _ in range(spec.restarts):
        seeds.append((rng.dirichlet(np.ones(k)),
                      rng.dirichlet(np.ones(n1), size=k),
                      rng.dirichlet(np.ones(n2), size=k)))

    best = None
    best_score = (-1, -np.inf)
    for q0, a1, a2 in seeds:
        q, A1, A2, score = _coordinate_ascent(
            inst, w1, w2, q0.copy(), a1.copy(), a2.copy(), spec)
        if _better(score, best_score):
            best_score = score
            best = (q, A1, A2)

    if best_score[0] < 1:
        return MacBoundaryResult(False, reason="no feasible policy found")
    return _result_from_policy(prob, w1, w2, *best)


def mac_region_sweep(prob: MacProblem, b_grid, weights, q_size: int = 4,
                     spec: MacGridSpec | None = None, threads: int = 1):
    """Boundary points for each (B, weight) pair; infeasibility encoded per row."""
    b_grid = list(b_grid)
    if sorted(b_grid) != b_grid:
        raise ValueError("B grid must be sorted ascending")
    tasks = [(bt, w1, w2) for bt in b_grid for w1, w2 in weights]

    def solve(task):
        bt, w1, w2 = task
        res = mac_boundary_point(prob.with_target(bt), w1, w2, q_size, spec)
        if res.feasible:
            t = res.triple
            return MacSweepRow(bt, w1, w2, True, t.r1, t.r2, t.b)
        return MacSweepRow(bt, w1, w2, False, 0.0, 0.0, 0.0)

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve, tasks))
    return [solve(t) for t in tasks]


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_mac_oracle(prob: MacProblem, w1: float, w2: float,
                           q_size: int = 1, steps: int = 11) -> MacBoundaryResult:
    """Exhaustive enumeration over gridded policies; independent test oracle.

    Every p(q) and every conditional pmf ranges over a uniform simplex grid
    with `steps` points per dimension.  Deliberately ignorant of the ascent
    solver's search strategy; guarded to desk scale.
    """
    inst = _Instance(prob)
    if inst.n1 > 3 or inst.n2 > 3:
        raise ValueError("oracle restricted to input alphabets of size <= 3")
    if steps > 21:
        raise ValueError("oracle restricted to steps <= 21")
    if not 1 <= q_size <= 4:
        raise ValueError("q_size must be between 1 and 4")

    g1 = simplex_grid(inst.n1, steps)
    g2 = simplex_grid(inst.n2, steps)
    gq = simplex_grid(q_size, steps)
    n_pairs = g1.shape[0] * g2.shape[0]
    outer = gq.shape[0] * n_pairs ** max(q_size - 1, 0)
    if outer > 2_000_000:
        raise ValueError(f"enumeration of {outer} policies exceeds the size guard")

    # Stat table for every product pair, vectorized over the p1 grid.
    T = np.empty((g1.shape[0], g2.shape[0], 6))
    for j in range(g2.shape[0]):
        T[:, j, :] = _block_stats(inst, 0, g1, g2[j])
    T = T.reshape(n_pairs, 6)

    best_val = -np.inf
    best = None
    for wq in gq:
        if q_size == 1:
            chunks = [(np.zeros(6), ())]
        else:
            chunks = []
            for head in product(range(n_pairs), repeat=q_size - 1):
                partial = np.zeros(6)
                for m, idx in enumerate(head):
                    partial = partial + wq[m] * T[idx]
                chunks.append((partial, head))
        for partial, head in chunks:
            tot = partial[None, :] + wq[-1] * T
            feas = ((tot[:, 4] <= prob.p1_budget + FEAS_TOL)
                    & (tot[:, 5] <= prob.p2_budget + FEAS_TOL)
                    & (tot[:, 3] >= prob.b_target - FEAS_TOL))
            if not feas.any():
                continue
            vals = _corner_rates(tot[:, 0], tot[:, 1], tot[:, 2], w1, w2)
            vals = np.where(feas, vals, -np.inf)
            idx = int(np.argmax(vals))
            if vals[idx] > best_val + 1e-15:
                best_val = float(vals[idx])
                best = (wq.copy(), head + (idx,))

    if best is None:
        return MacBoundaryResult(False, reason="no feasible gridded policy")
    wq, assignment = best
    A1 = np.array([g1[i // g2.shape[0]] for i in assignment])
    A2 = np.array([g2[i % g2.shape[0]] for i in assignment])
    return _result_from_policy(prob, w1, w2, wq, A1, A2)


# ---------------------------------------------------------------------------
# Gaussian two-sender example
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianMacSolution:
    """Optimal time-share between a Gaussian phase and a constant energy phase.

    lam is the fraction of uses carrying Gaussian codewords of power p_prime;
    the rest transmit the constant sqrt(p_dprime) from both senders, which
    combines coherently at the receiver.
    """

    r_sum: float
    lam: float
    p_prime: float
    p_dprime: float
    feasible: bool = True


def gaussian_unconstrained_sum_rate(power: float) -> float:
    """Max sum rate 0.5*log2(1 + 2P) with no energy floor."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    return 0.5 * float(np.log2(1.0 + 2.0 * power))


def _gaussian_candidates(power, b_target, lams, shares):
    L, S = np.meshgrid(lams, shares, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.where(L > 0, 0.5 * L * np.log2(1.0 + 2.0 * S / np.where(L > 0, L, 1.0)), 0.0)
    # The residual power (P - S) is spent in the constant phase, so received
    # energy depends on the split only through the Gaussian share S.
    energy = np.where(L >= 1.0 - 1e-15, 2.0 * S + 1.0, 4.0 * power + 1.0 - 2.0 * S)
    rate = np.where(energy >= b_target - 1e-12, rate, -np.inf)
    return L, S, rate


def _pick_lexicographic(L, S, rate):
    best = rate.max()
    if not np.isfinite(best):
        return None
    near = rate >= best - TIE_TOL
    lam_min = L[near].min()
    on_lam = near & (L == lam_min)
    p_prime = np.where(L[on_lam] > 0, S[on_lam] / np.maximum(L[on_lam], 1e-300), 0.0)
    j = int(np.argmin(p_prime))
    lam = float(lam_min)
    s = float(S[on_lam][j])
    return float(rate[on_lam][j]), lam, s


def gaussian_mac_timeshare(power: float, b_target: float,
                           steps: int = 64, refine_factor: int = 8,
                           refine_passes: int = 2) -> GaussianMacSolution:
    """Best achievable sum rate under a received-energy floor, by grid search.

    The search runs over (lam, s) where s = lam * p_prime is the power share
    of the Gaussian phase; the constant phase spends the whole residual
    budget, which is optimal for the energy constraint.  Below the threshold
    b_target <= 2P+1 no time sharing is needed; above 4P+1 the problem is
    infeasible.  Ties within 1e-6 bits resolve to the smallest (lam, p_prime).
    """
    if power < 0 or b_target < 0:
        raise ValueError("power and energy target must be nonnegative")
    if b_target > 4.0 * power + 1.0 + FEAS_TOL:
        return GaussianMacSolution(0.0, 0.0, 0.0, 0.0, feasible=False)
    if b_target <= 2.0 * power + 1.0 + 1e-12:
        return GaussianMacSolution(gaussian_unconstrained_sum_rate(power), 1.0, power, 0.0)

    lam_lo, lam_hi = 0.0, 1.0
    s_lo, s_hi = 0.0, power
    pitch_lam = 1.0 / steps
    pitch_s = power / steps if power > 0 else 1.0
    best = None
    for _ in range(refine_passes + 1):
        lams = np.linspace(lam_lo, lam_hi, steps + 1)
        shares = np.linspace(s_lo, s_hi, steps + 1)
        picked = _pick_lexicographic(*_gaussian_candidates(power, b_target, lams, shares))
        if picked is None:
            break
        best = picked
        _, lam, s = best
        pitch_lam /= refine_factor
        pitch_s /= refine_factor
        lam_lo, lam_hi = max(0.0, lam - pitch_lam * refine_factor), min(1.0, lam + pitch_lam * refine_factor)
        s_lo, s_hi = max(0.0, s - pitch_s * refine_factor), min(power, s + pitch_s * refine_factor)

    if best is None:
        return GaussianMacSolution(0.0, 0.0, 0.0, power, feasible=True)
    rate, lam, s = best
    if lam <= 0:
        return GaussianMacSolution(max(rate, 0.0), 0.0, 0.0, power)
    p_prime = s / lam
    p_dprime = (power - s) / (1.0 - lam) if lam < 1.0 else 0.0
    return GaussianMacSolution(max(rate, 0.0), lam, p_prime, p_dprime)


@dataclass
class GaussianSweepRow:
    power: float
    b_target: float
    r_timeshare: float
    lam: float
    p_prime: float
    p_dprime: float
    r_no_ts: float
    feasible: bool


def gaussian_mac_sweep(powers, b_grid, steps: int = 64, threads: int = 1):
    """Sum rate vs energy floor, with and without time sharing, per (P, B).

    The no-time-sharing column freezes lam at 1 and is reported as 0 where
    its own feasibility check (B <= 2P+1) fails.
    """
    powers = list(powers)
    b_grid = list(b_grid)
    if not powers or not b_grid:
        raise ValueError("powers and B grid must be nonempty")
    tasks = [(p, bt) for p in powers for bt in b_grid]

    def solve(task):
        p, bt = task
        sol = gaussian_mac_timeshare(p, bt, steps=steps)
        no_ts = gaussian_unconstrained_sum_rate(p) if bt <= 2.0 * p + 1.0 + 1e-12 else 0.0
        return GaussianSweepRow(p, bt, sol.r_sum, sol.lam, sol.p_prime,
                                sol.p_dprime, no_ts, sol.feasible)

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve, tasks))
    return [solve(t) for t in tasks]
