"""End-to-end solvers producing Gaussian states with certified ratio bounds.

Every path follows the same scheme: solve the classical part (exactly where
the structure allows it, by SDP rounding otherwise), solve the quadratic
part exactly, then build Gaussian candidates -- convex blends of the
classical state with a mediator/quadratic pair, and covariance-matrix SDP
relaxations seeded by scaled classical pins -- and keep the best.  The
returned ratio bound divides the achieved energy by a certified upper bound
on the true optimum, so it is valid for the run at hand even when the
classical step was only approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gaussian
from .classical import (
    ClassicalSolution,
    brute_force_classical,
    bipartite_exact,
    classical_fixed_q_bipartite,
    detect_bipartition,
    disjoint_edge_exact,
    gw_classical_psd,
)
from .gaussian import CovarianceMatrix, clip_blocks, covariance_from_bits
from .model import CifhInstance, Convention
from .oracle import ORACLE_MODE_LIMIT, exact_spectrum
from .quad import QuadSolution, hopping_majorana, solve_quad
from .sdp import SdpFailure, SdpProblem, extract_hermitian, hermitian_embed, solve_sdp

GW_RATIO = 0.878
DEFAULT_P_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_ORACLE_GATE = 10
FLOOR_SLACK = 1e-4
_TINY = 1e-12

# when set to a list, every relaxation solve appends
# (primal_residual, min_eigenvalue) -- used by the bench suite to audit
# feasibility across whole runs
SDP_TRACE: list[tuple[float, float]] | None = None


class PipelineError(RuntimeError):
    """A solve path could not produce a solution (operational failure)."""


class CertificationError(PipelineError):
    """A mathematical guarantee the run must satisfy was violated: the
    certified ratio fell below its theory floor, the oracle contradicted the
    certified upper bound, or a particle-number target was missed."""


# ---------------------------------------------------------------------------
# covariance-matrix SDP relaxation
# ---------------------------------------------------------------------------


def _pin_matrix(d: int, i: int, j: int) -> np.ndarray:
    """Hermitian A with tr(A (I + i Gamma)) = -Gamma_ij for real antisym Gamma."""
    a = np.zeros((d, d), dtype=complex)
    a[j, i] = 0.5j
    a[i, j] = -0.5j
    return a


def build_covariance_sdp(
    inst: CifhInstance,
    pins: dict[tuple[int, int], float],
    total_z: float | None = None,
) -> SdpProblem:
    """Real-embedded SDP relaxation over X = I + i Gamma, Gamma real antisym.

    maximizes the quadratic-part energy tr(i h X) subject to: unit diagonal;
    vanishing real part off the diagonal (forcing the I + i Gamma form);
    Gamma_ij pinned to the given values; on every interaction edge (j, k)
    the number-conserving symmetries Gamma[2j, 2k+1] = -Gamma[2j+1, 2k] and
    Gamma[2j, 2k] = Gamma[2j+1, 2k+1]; and optionally a pinned total
    sum_j Gamma[2j, 2j+1] = total_z (the average-occupation constraint,
    consistent with per-mode pins when both are supplied).

    X >= 0 for Hermitian X = I + i Gamma is exactly the covariance
    feasibility condition ||Gamma|| <= 1.
    """
    d = 2 * inst.n
    h = hopping_majorana(inst)
    objective = 1j * h
    constraints: list[tuple[np.ndarray, float]] = []
    for i in range(d):
        a = np.zeros((d, d), dtype=complex)
        a[i, i] = 1.0
        constraints.append((a, 1.0))
    for i in range(d):
        for j in range(i + 1, d):
            a = np.zeros((d, d), dtype=complex)
            a[i, j] = 0.5
            a[j, i] = 0.5
            constraints.append((a, 0.0))
    for (i, j), value in sorted(pins.items()):
        if not (0 <= i < j < d):
            raise ValueError(f"pin index pair ({i}, {j}) out of range")
        constraints.append((_pin_matrix(d, i, j), -float(value)))
    for j, k, _ in inst.interaction_edges:
        constraints.append(
            (_pin_matrix(d, 2 * j, 2 * k + 1) + _pin_matrix(d, 2 * j + 1, 2 * k), 0.0)
        )
        constraints.append(
            (_pin_matrix(d, 2 * j, 2 * k) - _pin_matrix(d, 2 * j + 1, 2 * k + 1), 0.0)
        )
    if total_z is not None:
        a_total = np.zeros((d, d), dtype=complex)
        for j in range(inst.n):
            a_total += _pin_matrix(d, 2 * j, 2 * j + 1)
        constraints.append((a_total, -float(total_z)))
    return hermitian_embed(objective, constraints)


def recover_covariance(x_real: np.ndarray) -> CovarianceMatrix:
    """Pull the covariance matrix out of a solved real-embedded relaxation."""
    x = extract_hermitian(x_real)
    gamma = np.imag(x)
    gamma = (gamma - gamma.T) / 2.0
    return clip_blocks(gamma)


def _diag_pins(gamma_class: np.ndarray, p: float, n: int) -> dict[tuple[int, int], float]:
    return {(2 * j, 2 * j + 1): p * gamma_class[2 * j, 2 * j + 1] for j in range(n)}


# ---------------------------------------------------------------------------
# classical-step selection
# ---------------------------------------------------------------------------


def _is_matching(inst: CifhInstance) -> bool:
    seen: set[int] = set()
    for j, k, _ in inst.interaction_edges:
        if j in seen or k in seen:
            return False
        seen.update((j, k))
    return True


@dataclass(frozen=True)
class ClassicalStep:
    """Classical solution plus the certified upper bound used downstream."""

    solution: ClassicalSolution | None
    upper_bound: float
    upper_method: str


def classical_step(
    inst: CifhInstance, trials: int = 64, seed: int = 0, sdp_tol: float = 1e-7
) -> ClassicalStep:
    """Pick the classical solver an instance supports.

    traceless: disjoint-edge, bipartite min-cut, or brute force (n <= 24) --
    all exact, so the upper bound is the optimum itself; raises when none
    applies.  psd: SDP rounding with its dual upper bound.  fmc: the upper
    bound (sum w)/2 holds with no classical solve at all (max cut is at most
    half the total weight); an exact solver is still used when the structure
    allows, because its assignment seeds better blend candidates.
    """
    conv = inst.convention
    if conv is Convention.PSD:
        res = gw_classical_psd(inst, trials=trials, seed=seed, tol=sdp_tol)
        return ClassicalStep(res.solution, res.upper_bound, "sdp_dual")
    sol: ClassicalSolution | None = None
    if _is_matching(inst):
        sol = disjoint_edge_exact(inst)
    elif detect_bipartition(inst) is not None:
        sol = bipartite_exact(inst)
    elif inst.n <= 24:
        sol = brute_force_classical(inst)
    if conv is Convention.FMC:
        upper = inst.interaction_total() / 2.0
        return ClassicalStep(sol, upper, "half_weight_sum")
    if sol is None:
        raise PipelineError(
            "classical optimum unavailable: interaction graph is neither a "
            "matching nor bipartite and n > 24"
        )
    return ClassicalStep(sol, sol.value, "exact:" + sol.method)


# ---------------------------------------------------------------------------
# certified solve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedSolution:
    """Best Gaussian state found, with its certificate.

    ratio_bound = energy_total / (certified upper bound on the optimum); it
    is valid for this run.  exact_ratio is filled in only when the
    exact-diagonalization oracle ran.  ratio_derivation records every number
    entering the bound, including the theory floor the run must clear.
    """

    gamma: CovarianceMatrix
    method: str
    p_class: float
    energy_class: float
    energy_quad: float
    energy_total: float
    ratio_bound: float
    ratio_derivation: dict = field(repr=False)
    exact_ratio: float | None = None
    classical: ClassicalSolution | None = field(default=None, repr=False)
    quad: QuadSolution | None = field(default=None, repr=False)


@dataclass(frozen=True)
class SweepRow:
    """One row of the blend-weight sweep (CSV schema order)."""

    p_class: float
    energy_class: float
    energy_quad: float
    energy_total: float
    ratio: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    denominator: float
    classical: ClassicalStep
    quad_value: float
    skipped: tuple[float, ...]


def _blend_candidate(
    gamma_class: CovarianceMatrix, gamma_quad: CovarianceMatrix, p: float
) -> CovarianceMatrix:
    med = gaussian.mediator(gamma_quad)
    return gaussian.blend(
        [(p, gamma_class), ((1.0 - p) / 2.0, med), ((1.0 - p) / 2.0, gamma_quad)]
    )


def _sdp_candidate(
    inst: CifhInstance,
    gamma_class: CovarianceMatrix,
    p: float,
    sdp_tol: float,
    total_z: float | None = None,
) -> CovarianceMatrix:
    pins = _diag_pins(gamma_class.matrix, p, inst.n)
    problem = build_covariance_sdp(inst, pins, total_z=total_z)
    sol = solve_sdp(problem, tol=sdp_tol)
    if SDP_TRACE is not None:
        SDP_TRACE.append((sol.primal_residual, sol.min_eigenvalue))
    return recover_covariance(sol.x_matrix)


def _theory_floor(
    conv: Convention,
    lambda_class_upper: float,
    lambda_quad: float,
    nu: float | None = None,
    rounding_ratio: float = GW_RATIO,
) -> tuple[float, dict]:
    """Floor the achieved ratio must clear, per convention.

    traceless: max of f(p) = (p^2 beta + (1-p)/2) / (beta + 1) at the
    endpoints, never below 1/3.  psd: same shape with the rounding ratio r
    on the classical term, f(p) = (((1+p^2)/2) r beta + 1/2 + (1-p)/4) /
    (beta + 1), never below r/(r+1/2); the r factor holds in expectation
    over the rounding, so a run can in principle land below it.  fmc: 1/2.
    fixed particle number: 1 / (2 (nu + 3/2)) at occupation fraction
    imbalance nu = (n - 2q)/n.
    """
    detail: dict = {}
    if lambda_quad <= _TINY:
        beta = None
    else:
        beta = lambda_class_upper / lambda_quad
    detail["beta"] = beta
    if nu is not None:
        # lambda_quad here is the occupation-restricted quadratic optimum,
        # so beta and the endpoint values f(nu), f(1) are the ones the
        # guarantee is actually proved for.  The headline 1/(2(nu+3/2))
        # follows from max(f(nu), f(1)) only when nu <= 1/2 or beta >=
        # 1/(2(nu+1)); outside that region the max itself is still a valid
        # certified floor, so that is what gets enforced.
        if beta is None:
            f_nu, f_one = 0.0, 1.0
        else:
            f_nu = (nu * nu * beta + (1.0 - nu) / 2.0) / (beta + 1.0)
            f_one = beta / (beta + 1.0)
        headline = 1.0 / (2.0 * (nu + 1.5))
        provable = (
            beta is None or nu <= 0.5 + 1e-12 or beta >= 1.0 / (2.0 * (nu + 1.0)) - 1e-12
        )
        detail["nu"] = nu
        detail["f_endpoints"] = [f_nu, f_one]
        detail["headline_floor"] = headline
        detail["headline_provable"] = provable
        detail["floor_formula"] = "max(f(nu), f(1)), f(p) = (p^2 b + (1-p)/2)/(b+1)"
        return max(f_nu, f_one), detail
    if conv is Convention.FMC:
        detail["floor_formula"] = "1/2"
        return 0.5, detail
    if conv is Convention.TRACELESS:
        if beta is None:
            f0, f1 = 0.0, 1.0
        else:
            f0 = 0.5 / (beta + 1.0)
            f1 = beta / (beta + 1.0)
        detail["f_endpoints"] = [f0, f1]
        detail["floor_formula"] = "max(f(0), f(1)) >= 1/3"
        return max(f0, f1), detail
    r = rounding_ratio
    if beta is None:
        f0, f1 = 0.0, r
    else:
        f0 = (0.5 * r * beta + 0.75) / (beta + 1.0)
        f1 = (r * beta + 0.5) / (beta + 1.0)
    detail["f_endpoints"] = [f0, f1]
    detail["rounding_ratio"] = r
    if r < 1.0:
        detail["floor_formula"] = "max(f(0), f(1)) >= r/(r+1/2), r in expectation"
    else:
        detail["floor_formula"] = "max(f(0), f(1)) >= 2/3"
    return max(f0, f1), detail


def _pick_best(
    inst: CifhInstance,
    candidates: list[tuple[str, float, CovarianceMatrix]],
    purify: bool,
    refine_budget: int,
) -> tuple[str, float, CovarianceMatrix, float]:
    best: tuple[str, float, CovarianceMatrix, float] | None = None
    for method, p, gamma in candidates:
        if purify:
            gamma = gaussian.purify(gamma, inst)
            if refine_budget > 0:
                gamma = gaussian.local_refine(gamma, inst, budget=refine_budget)
        value = gaussian.energy_total(gamma, inst)
        if best is None or value > best[3] + _TINY:
            best = (method, p, gamma, value)
    if best is None:
        raise PipelineError("no candidate state could be constructed")
    return best


def _certify(
    inst: CifhInstance,
    best: tuple[str, float, CovarianceMatrix, float],
    step: ClassicalStep,
    quad: QuadSolution,
    floor: float,
    floor_detail: dict,
    oracle: str,
    oracle_gate: int,
    q_target: int | None = None,
    quad_cap: float | None = None,
) -> CertifiedSolution:
    method, p, gamma, value = best
    e_class = gaussian.energy_class(gamma, inst)
    e_quad = gaussian.energy_quad(gamma, inst)
    quad_bound = quad.value if quad_cap is None else quad_cap
    denominator = step.upper_bound + quad_bound
    if denominator <= _TINY:
        ratio = 1.0
    else:
        ratio = value / denominator
    derivation = {
        "lambda_class_upper": step.upper_bound,
        "lambda_class_method": step.upper_method,
        "lambda_quad": quad_bound,
        "denominator": denominator,
        "achieved": value,
        "floor": floor,
        **floor_detail,
    }
    if quad_cap is not None:
        derivation["lambda_quad_unrestricted"] = quad.value
    if denominator > _TINY and ratio < floor * (1.0 - FLOOR_SLACK):
        raise CertificationError(
            f"certified ratio {ratio:.6f} fell below the theory floor "
            f"{floor:.6f} ({derivation.get('floor_formula')})"
        )
    exact_ratio = None
    if oracle not in ("on", "off", "auto"):
        raise ValueError(f"oracle mode must be on|off|auto (got {oracle!r})")
    run_oracle = oracle == "on" or (oracle == "auto" and inst.n <= oracle_gate)
    if run_oracle:
        spectrum = exact_spectrum(inst)
        target = (
            spectrum.avg_q_max(q_target) if q_target is not None else spectrum.lambda_max
        )
        derivation["oracle_value"] = target
        if target > denominator + 1e-6 * max(1.0, abs(denominator)):
            raise CertificationError(
                f"oracle value {target:.9f} exceeds the certified upper bound "
                f"{denominator:.9f}"
            )
        if value > target + 1e-6 * max(1.0, abs(target)):
            raise CertificationError(
                f"achieved energy {value:.9f} exceeds the oracle optimum {target:.9f}"
            )
        exact_ratio = 1.0 if abs(target) <= _TINY else value / target
    return CertifiedSolution(
        gamma=gamma,
        method=method,
        p_class=p,
        energy_class=e_class,
        energy_quad=e_quad,
        energy_total=value,
        ratio_bound=ratio,
        ratio_derivation=derivation,
        exact_ratio=exact_ratio,
        classical=step.solution,
        quad=quad,
    )


def _standard_candidates(
    inst: CifhInstance,
    gamma_class: CovarianceMatrix | None,
    gamma_quad: CovarianceMatrix,
    p_grid,
    sdp_tol: float,
) -> list[tuple[str, float, CovarianceMatrix]]:
    """SDP candidates over the pin-scale grid, then endpoint blends.

    The order is the tie-break: equal energies resolve to the earliest
    entry, i.e. lowest p first and SDP before blend.
    """
    zero_class = covariance_from_bits([0] * inst.n)
    base = gamma_class if gamma_class is not None else zero_class
    candidates: list[tuple[str, float, CovarianceMatrix]] = []
    for p in p_grid:
        if gamma_class is None and p > 0.0:
            continue
        if p > 1.0 - 1e-9:
            # all diagonal pins at +-1 collapse the feasible set to the
            # classical state itself, which the p = 1 blend already covers;
            # the boundary-degenerate SDP only burns iterations
            continue
        try:
            candidates.append(("sdp", p, _sdp_candidate(inst, base, p, sdp_tol)))
        except SdpFailure:
            continue
    for p in (0.0, 1.0):
        if gamma_class is None and p > 0.0:
            continue
        candidates.append(("blend", p, _blend_candidate(base, gamma_quad, p)))
    return candidates


def solve_traceless(
    inst: CifhInstance,
    *,
    p_grid=DEFAULT_P_GRID,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
    oracle: str = "auto",
    oracle_gate: int = DEFAULT_ORACLE_GATE,
) -> CertifiedSolution:
    """Certified solve for traceless instances; the classical step is exact,
    so the denominator lambda_c + lambda_q is a true upper bound and the
    floor max(f(0), f(1)) >= 1/3 must hold."""
    if inst.convention is not Convention.TRACELESS:
        raise ValueError("solve_traceless expects the traceless convention")
    if inst.particle_target is not None:
        return solve_fixed_particles(
            inst,
            refine_budget=refine_budget,
            sdp_tol=sdp_tol,
            oracle=oracle,
            oracle_gate=oracle_gate,
        )
    step = classical_step(inst)
    quad = solve_quad(inst)
    gamma_class = covariance_from_bits(step.solution.assignment)
    candidates = _standard_candidates(inst, gamma_class, quad.gamma, p_grid, sdp_tol)
    best = _pick_best(inst, candidates, purify=True, refine_budget=refine_budget)
    floor, detail = _theory_floor(inst.convention, step.upper_bound, quad.value)
    return _certify(inst, best, step, quad, floor, detail, oracle, oracle_gate)


def solve_psd(
    inst: CifhInstance,
    *,
    trials: int = 64,
    seed: int = 0,
    p_grid=DEFAULT_P_GRID,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
    oracle: str = "auto",
    oracle_gate: int = DEFAULT_ORACLE_GATE,
    classical: str = "gw",
) -> CertifiedSolution:
    """Certified solve for psd instances.

    By default the classical step is SDP rounding, so the denominator uses
    its dual upper bound (certified per run) while the floor's rounding
    factor holds in expectation.  classical="exact" switches to an exact
    classical solver (matching / bipartite / brute force, subject to the
    same availability limits as the traceless path), which tightens the
    floor to max(f(0), f(1)) >= 2/3.
    """
    if inst.convention is not Convention.PSD:
        raise ValueError("solve_psd expects the psd convention")
    if classical == "exact":
        sol = None
        if _is_matching(inst):
            sol = disjoint_edge_exact(inst)
        elif detect_bipartition(inst) is not None:
            sol = bipartite_exact(inst)
        elif inst.n <= 24:
            sol = brute_force_classical(inst)
        if sol is None:
            raise PipelineError(
                "exact classical step unavailable: interaction graph is "
                "neither a matching nor bipartite and n > 24"
            )
        step = ClassicalStep(sol, sol.value, "exact:" + sol.method)
        rounding_ratio = 1.0
    elif classical == "gw":
        step = classical_step(inst, trials=trials, seed=seed, sdp_tol=sdp_tol)
        rounding_ratio = GW_RATIO
    else:
        raise ValueError(f"unknown classical mode {classical!r}")
    quad = solve_quad(inst)
    gamma_class = covariance_from_bits(step.solution.assignment)
    candidates = _standard_candidates(inst, gamma_class, quad.gamma, p_grid, sdp_tol)
    best = _pick_best(inst, candidates, purify=True, refine_budget=refine_budget)
    floor, detail = _theory_floor(
        inst.convention, step.upper_bound, quad.value, rounding_ratio=rounding_ratio
    )
    return _certify(inst, best, step, quad, floor, detail, oracle, oracle_gate)


def solve_fmc(
    inst: CifhInstance,
    *,
    p_grid=DEFAULT_P_GRID,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
    oracle: str = "auto",
    oracle_gate: int = DEFAULT_ORACLE_GATE,
) -> CertifiedSolution:
    """Certified solve for fmc instances.  The upper bound (sum w)/2 +
    lambda_q needs no classical solve, and the p = 0 blend alone already
    achieves half of it, so the 1/2 floor holds unconditionally."""
    if inst.convention is not Convention.FMC:
        raise ValueError("solve_fmc expects the fmc convention")
    step = classical_step(inst)
    quad = solve_quad(inst)
    gamma_class = (
        covariance_from_bits(step.solution.assignment) if step.solution else None
    )
    candidates = _standard_candidates(inst, gamma_class, quad.gamma, p_grid, sdp_tol)
    best = _pick_best(inst, candidates, purify=True, refine_budget=refine_budget)
    floor, detail = _theory_floor(inst.convention, step.upper_bound, quad.value)
    return _certify(inst, best, step, quad, floor, detail, oracle, oracle_gate)


def solve_fixed_particles(
    inst: CifhInstance,
    *,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
    oracle: str = "auto",
    oracle_gate: int = DEFAULT_ORACLE_GATE,
) -> CertifiedSolution:
    """Certified solve at fixed average particle number q.

    Requires the traceless convention with zero potentials and a bipartite
    interaction graph.  Candidates pair a classical state with q' particles
    on one side (q' in {0, q}) with blend weight p = (n - 2q)/(n - 2q'), so
    the average occupation lands exactly on q; the same pins drive the SDP
    candidates.  No purification or refinement: both would move the
    occupation off target.

    The certified denominator is occupation-restricted on both sides: the
    classical bound (1/4) sum w is the exact average-q classical optimum on
    a bipartite graph, and because the hopping part conserves particle
    number its average-q optimum is the sum of the q largest one-body
    energies.
    """
    if inst.convention is not Convention.TRACELESS:
        raise ValueError("fixed-particle solve expects the traceless convention")
    q = inst.particle_target
    if q is None:
        raise ValueError("instance has no particle_target")
    if any(mu != 0.0 for mu in inst.potentials):
        raise PipelineError("fixed-particle solve requires zero potentials")
    bipartition = detect_bipartition(inst)
    if bipartition is None:
        raise PipelineError("fixed-particle solve requires a bipartite interaction graph")
    n = inst.n
    quad = solve_quad(inst)
    quad_restricted = (
        float(np.sort(quad.mode_energies)[::-1][:q].sum()) if q > 0 else 0.0
    )
    candidates: list[tuple[str, float, CovarianceMatrix]] = []
    classical_q = classical_fixed_q_bipartite(inst, q, bipartition)
    step = ClassicalStep(classical_q, classical_q.value, "exact:fixed_q_bipartite")
    for q_prime in sorted({0, q}):
        sol = classical_fixed_q_bipartite(inst, q_prime, bipartition)
        gamma_class = covariance_from_bits(sol.assignment)
        if n == 2 * q_prime:
            # the q' = q = n/2 member degenerates to the classical state
            candidates.append(("blend", 1.0, gamma_class))
            continue
        p = (n - 2.0 * q) / (n - 2.0 * q_prime)
        if p < 1.0 - 1e-9:  # p = 1 pins every block, leaving only gamma_class
            try:
                candidates.append(
                    (
                        "sdp",
                        p,
                        _sdp_candidate(
                            inst, gamma_class, p, sdp_tol, total_z=float(n - 2 * q)
                        ),
                    )
                )
            except SdpFailure:
                pass
        candidates.append(("blend", p, _blend_candidate(gamma_class, quad.gamma, p)))
    best = _pick_best(inst, candidates, purify=False, refine_budget=0)
    occupation = sum(best[2].occupations())
    if abs(occupation - q) > 1e-6:
        raise CertificationError(
            f"average occupation {occupation:.9f} missed the target {q}"
        )
    nu = (n - 2.0 * q) / n
    floor, detail = _theory_floor(
        inst.convention, step.upper_bound, quad_restricted, nu=nu
    )
    return _certify(
        inst, best, step, quad, floor, detail, oracle, oracle_gate,
        q_target=q, quad_cap=quad_restricted,
    )


def solve(
    inst: CifhInstance,
    *,
    trials: int = 64,
    seed: int = 0,
    p_grid=DEFAULT_P_GRID,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
    oracle: str = "auto",
    oracle_gate: int = DEFAULT_ORACLE_GATE,
) -> CertifiedSolution:
    """Dispatch on convention (and particle target) to the right solver,
    forwarding only the options that path uses."""
    common = dict(
        refine_budget=refine_budget,
        sdp_tol=sdp_tol,
        oracle=oracle,
        oracle_gate=oracle_gate,
    )
    if inst.particle_target is not None and inst.convention is not Convention.TRACELESS:
        raise PipelineError(
            "particle targets are supported only under the traceless convention"
        )
    if inst.convention is Convention.PSD:
        return solve_psd(inst, trials=trials, seed=seed, p_grid=p_grid, **common)
    if inst.convention is Convention.FMC:
        return solve_fmc(inst, p_grid=p_grid, **common)
    if inst.particle_target is not None:
        return solve_fixed_particles(inst, **common)
    return solve_traceless(inst, p_grid=p_grid, **common)


# ---------------------------------------------------------------------------
# blend-weight sweep
# ---------------------------------------------------------------------------


def sweep_p_class(
    inst: CifhInstance,
    p_values,
    *,
    trials: int = 64,
    seed: int = 0,
    refine_budget: int = 0,
    sdp_tol: float = 1e-7,
) -> SweepResult:
    """Solve the pinned SDP at each blend weight p and tabulate energies.

    Rows where the SDP solver fails are skipped (their p is recorded); if
    every value of p fails, raises PipelineError.  Not defined for
    fixed-particle instances, whose blend weight is tied to the target.
    """
    if inst.particle_target is not None:
        raise PipelineError(
            "sweep is not defined for fixed-particle instances: the blend "
            "weight is determined by the particle target"
        )
    step = classical_step(inst, trials=trials, seed=seed, sdp_tol=sdp_tol)
    quad = solve_quad(inst)
    if step.solution is not None:
        gamma_class = covariance_from_bits(step.solution.assignment)
    else:
        gamma_class = covariance_from_bits([0] * inst.n)
    denominator = step.upper_bound + quad.value
    rows: list[SweepRow] = []
    skipped: list[float] = []
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"blend weight {p} outside [0, 1]")
        if step.solution is None and p > 0.0:
            skipped.append(float(p))
            continue
        if p > 1.0 - 1e-9:
            # the fully pinned SDP has the classical state as its only
            # feasible point; use it directly
            gamma = gamma_class
        else:
            try:
                gamma = _sdp_candidate(inst, gamma_class, p, sdp_tol)
            except SdpFailure:
                skipped.append(float(p))
                continue
        gamma = gaussian.purify(gamma, inst)
        if refine_budget > 0:
            gamma = gaussian.local_refine(gamma, inst, budget=refine_budget)
        e_class = gaussian.energy_class(gamma, inst)
        e_quad = gaussian.energy_quad(gamma, inst)
        e_total = gaussian.energy_total(gamma, inst)
        ratio = 1.0 if denominator <= _TINY else e_total / denominator
        rows.append(
            SweepRow(
                p_class=float(p),
                energy_class=e_class,
                energy_quad=e_quad,
                energy_total=e_total,
                ratio=ratio,
            )
        )
    if not rows:
        raise PipelineError("every sweep point failed to solve")
    return SweepResult(
        rows=tuple(rows),
        denominator=denominator,
        classical=step,
        quad_value=quad.value,
        skipped=tuple(skipped),
    )
