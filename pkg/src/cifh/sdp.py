"""A small dense semidefinite-program solver.

Solves   maximize tr(C X)  s.t.  tr(A_i X) = b_i,  X >= 0 (PSD)

with real symmetric data via ADMM: the affine-subspace projection is
precomputed from an SVD pseudo-inverse of the stacked constraint operator
(so linearly dependent constraint lists are fine), the cone step is an
eigenvalue clip, and over-relaxation plus residual-balanced penalty updates
keep the iteration count down.  After convergence a few rounds of
alternating projections land the iterate on the affine subspace (residuals
at machine precision) while keeping the minimum eigenvalue above -1e-7.

Complex Hermitian problems enter through `hermitian_embed`, which doubles
the dimension with the standard [[Re, -Im], [Im, Re]] embedding and rescales
so reported objective values match the complex problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 200_000
PLATEAU_WINDOW = 5000
PLATEAU_FACTOR = 1e3
MIN_EIG_FLOOR = -1e-7

STATUS_CONVERGED = "converged"
STATUS_ITER_LIMIT = "iteration_limit"


class SdpFailure(RuntimeError):
    """Raised when the iteration stalls without reaching feasibility."""


@dataclass(frozen=True)
class SdpProblem:
    """maximize tr(objective @ X) over PSD X with tr(A_i X) = b_i."""

    dim: int
    objective: np.ndarray
    constraints: list[tuple[np.ndarray, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        c = np.asarray(self.objective, dtype=float)
        if c.shape != (self.dim, self.dim):
            raise ValueError(f"objective shape {c.shape} != ({self.dim}, {self.dim})")
        if np.max(np.abs(c - c.T)) > 1e-10 * max(1.0, np.max(np.abs(c))):
            raise ValueError("objective must be symmetric")
        for i, (a, b) in enumerate(self.constraints):
            a = np.asarray(a, dtype=float)
            if a.shape != (self.dim, self.dim):
                raise ValueError(f"constraint {i}: bad shape {a.shape}")
            if np.max(np.abs(a - a.T)) > 1e-10 * max(1.0, np.max(np.abs(a))):
                raise ValueError(f"constraint {i}: matrix must be symmetric")


@dataclass(frozen=True)
class SdpSolution:
    x_matrix: np.ndarray
    objective_value: float
    primal_residual: float  # max_i |tr(A_i X) - b_i| at the returned X
    min_eigenvalue: float
    iterations: int
    status: str


def _psd_clip(s: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((s + s.T) / 2.0)
    clipped = np.clip(vals, 0.0, None)
    out = (vecs * clipped) @ vecs.T
    return (out + out.T) / 2.0


class _AffineProjector:
    """Projection onto {X symmetric : tr(A_i X) = b_i} via the SVD
    pseudo-inverse of the stacked (vectorized) constraint operator."""

    def __init__(self, constraints: list[tuple[np.ndarray, float]], dim: int):
        self.dim = dim
        self.m = len(constraints)
        if self.m == 0:
            self.b = np.zeros(0)
            return
        self.v = np.stack(
            [np.asarray(a, dtype=float).ravel() for a, _ in constraints]
        )
        self.b = np.array([b for _, b in constraints], dtype=float)
        u, s, wt = np.linalg.svd(self.v, full_matrices=False)
        keep = s > 1e-12 * (s[0] if s.size else 1.0)
        self.u = u[:, keep]
        self.sinv = 1.0 / s[keep]
        self.wt = wt[keep, :]
        reachable = self.u @ (self.u.T @ self.b)
        if np.linalg.norm(reachable - self.b) > 1e-8 * (1.0 + np.linalg.norm(self.b)):
            raise SdpFailure("constraint right-hand sides are inconsistent")

    def values(self, x: np.ndarray) -> np.ndarray:
        """tr(A_i X) for every constraint."""
        if self.m == 0:
            return np.zeros(0)
        return self.v @ x.ravel()

    def project(self, x: np.ndarray) -> np.ndarray:
        if self.m == 0:
            return (x + x.T) / 2.0
        resid = self.values(x) - self.b
        correction = self.wt.T @ (self.sinv * (self.u.T @ resid))
        out = x - correction.reshape(self.dim, self.dim)
        return (out + out.T) / 2.0


def solve_sdp(
    problem: SdpProblem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SdpSolution:
    """ADMM with over-relaxation (alpha = 1.6) and residual balancing.

    Deterministic: identical problems give bit-identical solutions.  A
    residual plateau above 1e3 * tol lasting 5000 iterations raises
    SdpFailure instead of spinning to the iteration cap.
    """
    d = problem.dim
    c = (np.asarray(problem.objective, dtype=float)
         + np.asarray(problem.objective, dtype=float).T) / 2.0
    proj = _AffineProjector(problem.constraints, d)
    alpha = 1.6
    rho = max(1.0, float(np.linalg.norm(c)) / d)
    x = proj.project(np.zeros((d, d)))
    z = x.copy()
    u = np.zeros((d, d))
    status = STATUS_ITER_LIMIT
    it = 0
    best_combined = np.inf
    since_improved = 0
    scale = 1.0 + float(np.linalg.norm(c))
    for it in range(1, max_iter + 1):
        x = proj.project(z - u + c / rho)
        x_relaxed = alpha * x + (1.0 - alpha) * z
        z_prev = z
        z = _psd_clip(x_relaxed + u)
        u = u + x_relaxed - z
        r_norm = float(np.linalg.norm(x - z))
        s_norm = float(rho * np.linalg.norm(z - z_prev))
        eps_pri = tol * (1.0 + max(np.linalg.norm(x), np.linalg.norm(z)))
        eps_dual = tol * (1.0 + rho * np.linalg.norm(u))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            status = STATUS_CONVERGED
            break
        combined = max(r_norm, s_norm) / scale
        if combined < best_combined * (1.0 - 1e-4):
            best_combined = combined
            since_improved = 0
        else:
            since_improved += 1
            if since_improved >= PLATEAU_WINDOW and combined > PLATEAU_FACTOR * tol:
                raise SdpFailure(
                    f"residuals plateaued at {combined:.3e} after {it} iterations"
                )
        if it % 10 == 0:
            if r_norm > 10.0 * s_norm and rho < 1e6:
                rho *= 2.0
                u /= 2.0
            elif s_norm > 10.0 * r_norm and rho > 1e-6:
                rho /= 2.0
                u *= 2.0
    # cleanup: land exactly on the affine subspace while staying PSD enough
    x = proj.project(z)
    for _ in range(100):
        vals = np.linalg.eigvalsh(x)
        if vals[0] >= -1e-9:
            break
        x = proj.project(_psd_clip(x))
    min_eig = float(np.linalg.eigvalsh(x)[0])
    resid = proj.values(x) - proj.b
    primal_residual = float(np.max(np.abs(resid))) if resid.size else 0.0
    return SdpSolution(
        x_matrix=x,
        objective_value=float(np.sum(c * x)),
        primal_residual=primal_residual,
        min_eigenvalue=min_eig,
        iterations=it,
        status=status,
    )


# ---------------------------------------------------------------------------
# complex Hermitian problems
# ---------------------------------------------------------------------------


def _real_embed(a: np.ndarray) -> np.ndarray:
    """[[Re, -Im], [Im, Re]] block embedding of a complex matrix."""
    re, im = np.real(a), np.imag(a)
    return np.block([[re, -im], [im, re]])


def hermitian_embed(
    objective: np.ndarray, constraints: list[tuple[np.ndarray, float]]
) -> SdpProblem:
    """Real embedding of:  maximize tr(C X), tr(A_i X) = b_i, X Hermitian PSD.

    tr(M(A) M(X)) = 2 tr(A X) for Hermitian A and X, so the embedded
    objective is halved and the right-hand sides are doubled; reported
    objective values then match the complex problem exactly.
    """
    c = np.asarray(objective, dtype=complex)
    d = c.shape[0]
    if c.shape != (d, d) or np.max(np.abs(c - c.conj().T)) > 1e-10 * max(
        1.0, float(np.max(np.abs(c)))
    ):
        raise ValueError("objective must be a square Hermitian matrix")
    embedded: list[tuple[np.ndarray, float]] = []
    for i, (a, b) in enumerate(constraints):
        a = np.asarray(a, dtype=complex)
        if a.shape != (d, d) or np.max(np.abs(a - a.conj().T)) > 1e-10 * max(
            1.0, float(np.max(np.abs(a)))
        ):
            raise ValueError(f"constraint {i}: matrix must be Hermitian")
        embedded.append((_real_embed(a), 2.0 * float(b)))
    return SdpProblem(dim=2 * d, objective=_real_embed(c) / 2.0, constraints=embedded)


def extract_hermitian(x_real: np.ndarray) -> np.ndarray:
    """Inverse of the embedding, averaging over the embedding symmetry (the
    average is feasible and objective-preserving whenever all data matrices
    are embeddings, so extraction never loses optimality)."""
    dd = x_real.shape[0]
    if dd % 2 != 0:
        raise ValueError("embedded matrix must have even dimension")
    d = dd // 2
    x11 = x_real[:d, :d]
    x12 = x_real[:d, d:]
    x21 = x_real[d:, :d]
    x22 = x_real[d:, d:]
    out = (x11 + x22) / 2.0 + 1j * (x21 - x12) / 2.0
    return (out + out.conj().T) / 2.0
