"""Solvers for the classical (diagonal) part of an instance.

The classical part is a quadratic pseudo-boolean function of the occupation
vector x.  Exact solvers: vectorized brute force (small n), a min-cut
reduction for bipartite interaction graphs, and direct per-edge optimization
when the interaction graph is a matching.  Approximate solver: hyperplane
rounding of the signed-max-cut SDP relaxation after homogenizing the linear
terms with one extra spin.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .model import CifhInstance, Convention
from .sdp import SdpProblem, solve_sdp

BRUTE_FORCE_LIMIT = 24
_CHUNK_BITS = 20


@dataclass(frozen=True)
class Exactness:
    """Either an exact optimum or a solution with an in-expectation ratio."""

    exact: bool
    expected_ratio: float | None = None

    @staticmethod
    def exact_optimum() -> "Exactness":
        return Exactness(exact=True)

    @staticmethod
    def expected(ratio: float) -> "Exactness":
        return Exactness(exact=False, expected_ratio=ratio)


def classical_energy(assignment, inst: CifhInstance) -> float:
    """Value of the classical part at an occupation vector (0/1 entries)."""
    x = np.asarray(assignment, dtype=float)
    if x.shape != (inst.n,) or not np.all((x == 0) | (x == 1)):
        raise ValueError("assignment must be a 0/1 vector of length n")
    total = 0.0
    conv = inst.convention
    for j, k, w in inst.interaction_edges:
        if conv is Convention.TRACELESS:
            total += w * (0.25 - x[j] * x[k])
        elif conv is Convention.PSD:
            total += w * (1.0 - x[j] * x[k])
        else:  # fmc
            total += (w / 2.0) * (x[j] + x[k] - 2.0 * x[j] * x[k])
    for j, mu in enumerate(inst.potentials):
        if conv is Convention.TRACELESS:
            total += mu * (x[j] - 0.5)
        elif conv is Convention.PSD:
            total += mu * x[j]
    return float(total)


@dataclass(frozen=True)
class ClassicalSolution:
    """An occupation vector with its (recomputed) classical-part value."""

    assignment: tuple[int, ...]
    value: float
    method: str
    exactness: Exactness

    @staticmethod
    def from_assignment(
        inst: CifhInstance, assignment, method: str, exactness: Exactness
    ) -> "ClassicalSolution":
        arr = tuple(int(v) for v in assignment)
        return ClassicalSolution(
            assignment=arr,
            value=classical_energy(arr, inst),
            method=method,
            exactness=exactness,
        )


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------


def _popcount(states: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(states)
    for m in range(n):
        out += (states >> m) & 1
    return out


def brute_force_classical(
    inst: CifhInstance, fixed_particles: int | None = None
) -> ClassicalSolution:
    """Enumerate all assignments (n <= 24), chunked to bound memory.

    Ties break toward the lexicographically smallest assignment, with x_0
    as the most significant position.
    """
    n = inst.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports at most {BRUTE_FORCE_LIMIT} modes")
    conv = inst.convention
    mu = np.asarray(inst.potentials)
    best_val = -np.inf
    best_state = 0
    for lo in range(0, 1 << n, 1 << _CHUNK_BITS):
        hi = min(lo + (1 << _CHUNK_BITS), 1 << n)
        states = np.arange(lo, hi, dtype=np.int64)
        bits = (states[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
        energy = np.zeros(hi - lo)
        for j, k, w in inst.interaction_edges:
            xj = bits[:, j]
            xk = bits[:, k]
            if conv is Convention.TRACELESS:
                energy += w * (0.25 - xj * xk)
            elif conv is Convention.PSD:
                energy += w * (1.0 - xj * xk)
            else:
                energy += (w / 2.0) * (xj + xk - 2.0 * xj * xk)
        if conv is Convention.TRACELESS:
            energy += bits @ mu - mu.sum() / 2.0
        elif conv is Convention.PSD:
            energy += bits @ mu
        if fixed_particles is not None:
            energy[bits.sum(axis=1) != fixed_particles] = -np.inf
        arg = int(np.argmax(energy))
        if energy[arg] > best_val:
            best_val = float(energy[arg])
            best_state = lo + arg
    if not np.isfinite(best_val):
        raise ValueError(f"no assignment with exactly {fixed_particles} particles")
    assignment = [(best_state >> (n - 1 - j)) & 1 for j in range(n)]
    return ClassicalSolution.from_assignment(
        inst, assignment, "brute_force", Exactness.exact_optimum()
    )


# ---------------------------------------------------------------------------
# bipartite structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    """Two-coloring of the interaction graph; every edge crosses sides."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def validate(self, inst: CifhInstance) -> None:
        in_a = set(self.side_a)
        in_b = set(self.side_b)
        if in_a & in_b or in_a | in_b != set(range(inst.n)):
            raise ValueError("bipartition must partition the modes")
        for j, k, _ in inst.interaction_edges:
            if (j in in_a) == (k in in_a):
                raise ValueError(f"interaction edge ({j}, {k}) does not cross sides")


def detect_bipartition(inst: CifhInstance) -> Bipartition | None:
    """BFS two-coloring of the interaction graph; isolated modes land on
    side_a; returns None when an odd cycle makes the graph non-bipartite."""
    adj: list[list[int]] = [[] for _ in range(inst.n)]
    for j, k, _ in inst.interaction_edges:
        adj[j].append(k)
        adj[k].append(j)
    color = [-1] * inst.n
    for root in range(inst.n):
        if color[root] != -1:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w in sorted(adj[v]):
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    side_a = tuple(j for j in range(inst.n) if color[j] == 0)
    side_b = tuple(j for j in range(inst.n) if color[j] == 1)
    return Bipartition(side_a=side_a, side_b=side_b)


def bipartite_exact(
    inst: CifhInstance, bipartition: Bipartition | None = None
) -> ClassicalSolution:
    """Exact classical optimum for bipartite interaction graphs.

    Flipping the occupations on one side turns the maximization into a
    supermodular quadratic in the flipped variables (all pairwise
    coefficients +w >= 0), whose maximum is a minimum s-t cut.
    """
    if bipartition is None:
        bipartition = detect_bipartition(inst)
        if bipartition is None:
            raise ValueError("interaction graph is not bipartite")
    bipartition.validate(inst)
    n = inst.n
    conv = inst.convention
    # maximize f(x) = sum_j a_j x_j + sum_E b_jk x_j x_k (+ constant)
    a = np.zeros(n)
    if conv is Convention.TRACELESS or conv is Convention.PSD:
        a += np.asarray(inst.potentials)
    pair: dict[tuple[int, int], float] = {}
    for j, k, w in inst.interaction_edges:
        pair[(j, k)] = -w
        if conv is Convention.FMC:
            a[j] += w / 2.0
            a[k] += w / 2.0
    flipped = set(bipartition.side_a)
    # substitute y_j = 1 - x_j on side_a: every pairwise coefficient becomes
    # -b_jk = +w, and linear terms fold accordingly
    ay = np.zeros(n)
    for j in range(n):
        ay[j] = -a[j] if j in flipped else a[j]
    caps: dict[tuple[int, int], float] = {}
    for (j, k), b in pair.items():
        jf, kf = (j in flipped), (k in flipped)
        if jf == kf:
            raise ValueError(f"interaction edge ({j}, {k}) does not cross sides")
        u, v = (j, k) if jf else (k, j)  # u flipped, v not: b x_u x_k ->
        # b (1 - y_u) x_v = b x_v - b y_u x_v;  -b = w >= 0
        ay[v] += b
        caps[(u, v)] = -b
    # minimize sum_j (-ay_j) y_j - sum w y_u y_v  via min cut; fold the
    # pairwise identity  -w y_u y_v = -w y_u + w y_u (1 - y_v)
    lin = -ay.copy()
    for (u, v), w in caps.items():
        lin[u] -= w
    g = nx.DiGraph()
    g.add_node("s")
    g.add_node("t")
    for (u, v), w in caps.items():
        if w > 0:
            g.add_edge(u, v, capacity=w)
    for j in range(n):
        if lin[j] > 0:
            g.add_edge(j, "t", capacity=lin[j])
        elif lin[j] < 0:
            g.add_edge("s", j, capacity=-lin[j])
    if g.number_of_edges() == 0:
        source_side: set = {"s"}
    else:
        _, (source_side, _) = nx.minimum_cut(g, "s", "t")
    y = np.array([1 if j in source_side else 0 for j in range(n)])
    x = np.array([1 - y[j] if j in flipped else y[j] for j in range(n)])
    return ClassicalSolution.from_assignment(
        inst, x, "bipartite_mincut", Exactness.exact_optimum()
    )


def disjoint_edge_exact(inst: CifhInstance) -> ClassicalSolution:
    """Exact optimum when the interaction graph is a matching: each edge is
    optimized over its four assignments independently (ties resolved toward
    the lexicographically smallest assignment); isolated modes are occupied
    iff their potential is nonnegative."""
    seen: set[int] = set()
    for j, k, _ in inst.interaction_edges:
        if j in seen or k in seen:
            raise ValueError("interaction graph is not a matching")
        seen.update((j, k))
    n = inst.n
    conv = inst.convention
    mu = np.asarray(inst.potentials)
    x = np.zeros(n, dtype=int)
    for j in range(n):
        if j not in seen:
            x[j] = 1 if mu[j] >= 0 and conv is not Convention.FMC else 0
    for j, k, w in inst.interaction_edges:
        best = None
        for xj, xk in ((0, 0), (0, 1), (1, 0), (1, 1)):
            if conv is Convention.TRACELESS:
                val = w * (0.25 - xj * xk) + mu[j] * xj + mu[k] * xk
            elif conv is Convention.PSD:
                val = w * (1.0 - xj * xk) + mu[j] * xj + mu[k] * xk
            else:
                val = (w / 2.0) * (xj + xk - 2.0 * xj * xk)
            if best is None or val > best[0]:
                best = (val, xj, xk)
        x[j], x[k] = best[1], best[2]
    return ClassicalSolution.from_assignment(
        inst, x, "disjoint_edge", Exactness.exact_optimum()
    )


# ---------------------------------------------------------------------------
# Goemans-Williamson machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedCutSolution:
    """Best rounded cut plus the SDP relaxation value (an upper bound on
    the true signed-max-cut optimum)."""

    spins: tuple[int, ...]
    value: float
    sdp_value: float
    trials: int


def signed_cut_value(n: int, edges, spins) -> float:
    z = np.asarray(spins, dtype=float)
    return float(sum(w * (1.0 - s * z[j] * z[k]) for j, k, w, s in edges))


def gw_signed_maxcut(
    n: int,
    edges: list[tuple[int, int, float, int]],
    trials: int = 64,
    seed: int = 0,
    tol: float = 1e-7,
) -> SignedCutSolution:
    """maximize sum_e w_e (1 - s_e z_j z_k) over z in {-1, +1}^n.

    Solves the SDP relaxation (diag(Y) = 1), then rounds `trials` random
    hyperplanes with per-trial generators seeded by (seed + trial); the best
    rounded cut wins, ties broken toward the lexicographically smallest
    occupation vector (1 - z) / 2.

    sdp_value is a certified upper bound on the true optimum: the dual of
    the relaxation is min sum(y) over diag(y) - C psd, and the candidate
    y_i = (C Y)_ii is repaired by shifting out any negative slack
    eigenvalue, so feasibility holds regardless of solver tolerance.
    """
    for j, k, w, s in edges:
        if not (0 <= j < k < n):
            raise ValueError(f"edge ({j}, {k}) out of range for n={n}")
        if w < 0:
            raise ValueError("signed max-cut weights must be nonnegative")
        if s not in (-1, 1):
            raise ValueError("edge sign must be -1 or +1")
    w_total = float(sum(w for _, _, w, _ in edges))
    if n == 0 or not edges:
        return SignedCutSolution(
            spins=tuple(1 for _ in range(n)), value=0.0, sdp_value=0.0, trials=0
        )
    c = np.zeros((n, n))
    for j, k, w, s in edges:
        c[j, k] -= w * s / 2.0
        c[k, j] -= w * s / 2.0
    constraints = []
    for i in range(n):
        a = np.zeros((n, n))
        a[i, i] = 1.0
        constraints.append((a, 1.0))
    sol = solve_sdp(SdpProblem(dim=n, objective=c, constraints=constraints), tol=tol)
    y_dual = np.einsum("ij,ji->i", c, sol.x_matrix)
    slack = np.diag(y_dual) - c
    worst = float(np.linalg.eigvalsh((slack + slack.T) / 2.0)[0])
    if worst < 0.0:
        y_dual = y_dual - worst
    sdp_value = w_total + float(y_dual.sum())
    vals, vecs = np.linalg.eigh((sol.x_matrix + sol.x_matrix.T) / 2.0)
    factors = vecs * np.sqrt(np.clip(vals, 0.0, None))
    best: tuple[float, tuple[int, ...], tuple[int, ...]] | None = None
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        g = rng.standard_normal(n)
        z = np.where(factors @ g >= 0.0, 1, -1)
        value = signed_cut_value(n, edges, z)
        occ = tuple(int((1 - zi) // 2) for zi in z)
        key = (-value, occ)
        if best is None or key < (-best[0], best[2]):
            best = (value, tuple(int(zi) for zi in z), occ)
    return SignedCutSolution(
        spins=best[1], value=float(best[0]), sdp_value=float(sdp_value), trials=trials
    )


@dataclass(frozen=True)
class GwClassicalResult:
    """Rounded classical solution plus a certified upper bound on the true
    classical optimum (from the SDP relaxation, valid per run)."""

    solution: ClassicalSolution
    upper_bound: float


def gw_classical_psd(
    inst: CifhInstance, trials: int = 64, seed: int = 0, tol: float = 1e-7
) -> GwClassicalResult:
    """Approximate classical optimum for the psd convention.

    The linear terms are homogenized with one extra spin y: in z = 1 - 2x
    variables the classical part becomes, up to constants, a signed max cut
    whose graph has the interaction edges at weight w/4 (sign +1) plus one
    merged edge per mode at weight |alpha_j|, sign -sign(alpha_j), with
    alpha_j = W_j/4 - mu_j/2.  Solutions with y = -1 are globally flipped.
    Degree-zero modes are set exactly (occupied iff mu_j > 0) and removed.

    The expected approximation ratio of the rounding is 0.878; the returned
    upper bound (offset + SDP value) is certified for this run.
    """
    if inst.convention is not Convention.PSD:
        raise ValueError("gw_classical_psd expects the psd convention")
    n = inst.n
    mu = np.asarray(inst.potentials)
    degw = inst.degree_weights()
    active = sorted({j for e in inst.interaction_edges for j in (e[0], e[1])})
    index = {j: i for i, j in enumerate(active)}
    x = np.zeros(n, dtype=int)
    exact_part = 0.0
    for j in range(n):
        if j not in index:
            x[j] = 1 if mu[j] > 0 else 0
            exact_part += mu[j] * x[j]
    if not active:
        sol = ClassicalSolution.from_assignment(
            inst, x, "gw_homogenized", Exactness.exact_optimum()
        )
        return GwClassicalResult(solution=sol, upper_bound=sol.value)
    na = len(active)
    y_node = na
    cut_edges: list[tuple[int, int, float, int]] = []
    offset = 0.0
    for j, k, w, in inst.interaction_edges:
        cut_edges.append((index[j], index[k], w / 4.0, 1))
        offset += 3.0 * w / 4.0 - w / 4.0
    for j in active:
        offset += mu[j] / 2.0
        alpha = degw[j] / 4.0 - mu[j] / 2.0
        if alpha != 0.0:
            cut_edges.append((index[j], y_node, abs(alpha), -int(np.sign(alpha))))
            offset -= abs(alpha)
    cut = gw_signed_maxcut(na + 1, cut_edges, trials=trials, seed=seed, tol=tol)
    spins = np.asarray(cut.spins)
    if spins[y_node] == -1:
        spins = -spins
    for j in active:
        x[j] = (1 - spins[index[j]]) // 2
    sol = ClassicalSolution.from_assignment(
        inst, x, "gw_homogenized", Exactness.expected(0.878)
    )
    upper = exact_part + offset + cut.sdp_value
    return GwClassicalResult(solution=sol, upper_bound=float(upper))


def classical_fixed_q_bipartite(
    inst: CifhInstance, q: int, bipartition: Bipartition
) -> ClassicalSolution:
    """With mu = 0 and a bipartite interaction graph, occupying any q modes
    on one side leaves every interaction edge open, which is optimal among
    states with average particle number q; the value (1/4) sum w does not
    depend on q.  Occupies the q lowest-index modes of the larger side."""
    if any(m != 0.0 for m in inst.potentials):
        raise ValueError("fixed-q classical solver requires zero potentials")
    if inst.convention is not Convention.TRACELESS:
        raise ValueError("fixed-q classical solver expects the traceless convention")
    bipartition.validate(inst)
    side = bipartition.side_a
    if len(bipartition.side_b) > len(side):
        side = bipartition.side_b
    if q > len(side):
        raise ValueError(f"q={q} exceeds the larger side (size {len(side)})")
    x = np.zeros(inst.n, dtype=int)
    for j in sorted(side)[:q]:
        x[j] = 1
    return ClassicalSolution.from_assignment(
        inst, x, "fixed_q_bipartite", Exactness.exact_optimum()
    )
