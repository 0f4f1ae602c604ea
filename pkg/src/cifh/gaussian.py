"""Fermionic Gaussian states as 2n x 2n real antisymmetric covariance
matrices, and the energy/blending machinery built on Wick's theorem.

Majorana indexing is 0-based throughout: mode j owns the pair
(c_{2j}, c_{2j+1}) with c_{2j} = a_j + adag_j and c_{2j+1} = i(a_j - adag_j),
so the occupation expectation is <n_j> = (1 - Gamma[2j, 2j+1]) / 2 and the
vacuum has +1 diagonal blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import assemble_blocks, block_diagonalize_antisym
from .model import CifhInstance, Convention, edge_arrays

BLOCK_VALUE_TOL = 1e-9
PURITY_TOL = 1e-8


@dataclass(frozen=True)
class CovarianceMatrix:
    """Validated covariance matrix of a fermionic Gaussian state.

    The stored matrix is exactly antisymmetric (the strict upper triangle is
    mirrored at construction) and its singular values -- the canonical block
    values -- must lie in [0, 1 + 1e-9].
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError(f"covariance must be 2n x 2n, got shape {m.shape}")
        upper = np.triu(m, k=1)
        exact = upper - upper.T
        drift = float(np.max(np.abs(exact - m))) if m.size else 0.0
        if drift > 1e-8:
            raise ValueError(f"matrix is not antisymmetric (defect {drift:.3e})")
        top = float(np.linalg.norm(exact, 2)) if m.size else 0.0
        if top > 1.0 + BLOCK_VALUE_TOL:
            raise ValueError(f"block value {top:.12f} exceeds 1 + {BLOCK_VALUE_TOL}")
        exact.setflags(write=False)
        object.__setattr__(self, "matrix", exact)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def occupations(self) -> np.ndarray:
        """<n_j> for every mode."""
        m = self.matrix
        idx = np.arange(self.n_modes)
        return (1.0 - m[2 * idx, 2 * idx + 1]) / 2.0


@dataclass(frozen=True)
class PurityCertificate:
    is_pure: bool
    defect: float  # max-norm of Gamma Gamma^T - I


def _raw(gamma: CovarianceMatrix | np.ndarray) -> np.ndarray:
    if isinstance(gamma, CovarianceMatrix):
        return gamma.matrix
    return np.asarray(gamma, dtype=float)


def purity(gamma: CovarianceMatrix | np.ndarray) -> PurityCertificate:
    m = _raw(gamma)
    defect = float(np.max(np.abs(m @ m.T - np.eye(m.shape[0]))))
    return PurityCertificate(is_pure=defect <= PURITY_TOL, defect=defect)


def covariance_from_bits(bits) -> CovarianceMatrix:
    """Covariance of the classical product state |x>: diagonal blocks
    1 - 2 x_j, all other entries zero."""
    bits = np.asarray(bits, dtype=int)
    if bits.ndim != 1 or not np.all((bits == 0) | (bits == 1)):
        raise ValueError("bits must be a flat 0/1 vector")
    return CovarianceMatrix(assemble_blocks(1.0 - 2.0 * bits))


def wick_quartic(gamma: CovarianceMatrix | np.ndarray, i: int, j: int, k: int, l: int) -> float:
    """<c_i c_j c_k c_l> for strictly increasing Majorana indices i<j<k<l:

        -G_ij G_kl + G_ik G_jl - G_il G_jk.
    """
    if not (i < j < k < l):
        raise ValueError(f"indices must be strictly increasing, got {(i, j, k, l)}")
    m = _raw(gamma)
    return float(
        -m[i, j] * m[k, l] + m[i, k] * m[j, l] - m[i, l] * m[j, k]
    )


# ---------------------------------------------------------------------------
# energies
# ---------------------------------------------------------------------------


def _edge_terms(m: np.ndarray, edges) -> tuple[np.ndarray, ...]:
    ej, ek, w = edge_arrays(edges)
    gj = m[2 * ej, 2 * ej + 1]
    gk = m[2 * ek, 2 * ek + 1]
    quartic = (
        -gj * gk
        + m[2 * ej, 2 * ek] * m[2 * ej + 1, 2 * ek + 1]
        - m[2 * ej, 2 * ek + 1] * m[2 * ej + 1, 2 * ek]
    )
    return w, gj, gk, quartic


def energy_class(gamma: CovarianceMatrix | np.ndarray, inst: CifhInstance) -> float:
    """Expectation of the interaction + potential part in the Gaussian state."""
    m = _raw(gamma)
    w, gj, gk, quartic = _edge_terms(m, inst.interaction_edges)
    idx = np.arange(inst.n)
    diag = m[2 * idx, 2 * idx + 1]
    mu = np.asarray(inst.potentials)
    conv = inst.convention
    if conv is Convention.TRACELESS:
        return float(np.sum(w * (gj + gk + quartic)) / 4.0 - np.sum(mu * diag) / 2.0)
    if conv is Convention.PSD:
        occ = (1.0 - diag) / 2.0
        return float(np.sum(w * (3.0 + gj + gk + quartic)) / 4.0 + np.sum(mu * occ))
    return float(np.sum(w * (1.0 + quartic)) / 4.0)  # fmc


def energy_quad(gamma: CovarianceMatrix | np.ndarray, inst: CifhInstance) -> float:
    """Expectation of the hopping part in the Gaussian state."""
    m = _raw(gamma)
    ej, ek, w = edge_arrays(inst.hopping_edges)
    hop = float(np.sum(w * (m[2 * ej, 2 * ek + 1] - m[2 * ej + 1, 2 * ek])) / 2.0)
    if inst.convention is Convention.PSD:
        hop += float(np.sum(w))
    return hop


def energy_total(gamma: CovarianceMatrix | np.ndarray, inst: CifhInstance) -> float:
    return energy_class(gamma, inst) + energy_quad(gamma, inst)


# ---------------------------------------------------------------------------
# blending
# ---------------------------------------------------------------------------


def blend(components: list[tuple[float, CovarianceMatrix | np.ndarray]]) -> CovarianceMatrix:
    """Convex combination of covariance matrices (a valid Gaussian state's
    covariance again).  Weights must be nonnegative and sum to 1."""
    if not components:
        raise ValueError("blend needs at least one component")
    total = sum(p for p, _ in components)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"blend weights must sum to 1 (got {total!r})")
    acc = None
    for p, gamma in components:
        if p < 0:
            raise ValueError(f"blend weight must be nonnegative (got {p!r})")
        m = _raw(gamma)
        acc = p * m if acc is None else acc + p * m
    return CovarianceMatrix(acc)


def mediator(gamma_quad: CovarianceMatrix | np.ndarray) -> CovarianceMatrix:
    """Covariance whose diagonal blocks cancel those of gamma_quad in the
    half/half blend, and which vanishes elsewhere."""
    m = _raw(gamma_quad)
    n = m.shape[0] // 2
    idx = np.arange(n)
    out = np.zeros_like(m)
    out[2 * idx, 2 * idx + 1] = -m[2 * idx, 2 * idx + 1]
    out[2 * idx + 1, 2 * idx] = -m[2 * idx + 1, 2 * idx]
    return CovarianceMatrix(out)


def slater_check(gamma: CovarianceMatrix | np.ndarray, tol: float = 1e-9) -> bool:
    """True when gamma is the covariance of a Slater determinant, i.e. a
    pure particle-number-conserving Gaussian state.

    The one-body matrix M_jk = <adag_j a_k> is read off block-wise; the state
    is a Slater determinant iff the block structure is consistent with some
    Hermitian M and M is an orthogonal projector (M^2 = M).
    """
    m = _raw(gamma)
    n = m.shape[0] // 2
    idx = np.arange(n)
    xx = m[np.ix_(2 * idx, 2 * idx)]
    xy = m[np.ix_(2 * idx, 2 * idx + 1)]
    yx = m[np.ix_(2 * idx + 1, 2 * idx)]
    yy = m[np.ix_(2 * idx + 1, 2 * idx + 1)]
    # number conservation: Gamma[2j,2k+1] = -Gamma[2j+1,2k] (j != k) and
    # Gamma[2j,2k] = Gamma[2j+1,2k+1]
    off = ~np.eye(n, dtype=bool)
    if np.max(np.abs((xy + yx)[off])) > tol if n > 1 else False:
        return False
    if n > 1 and np.max(np.abs(xx - yy)) > tol:
        return False
    big_m = np.zeros((n, n), dtype=complex)
    re = -xy / 2.0
    np.fill_diagonal(re, (1.0 - np.diag(xy)) / 2.0)
    big_m = re + 1j * (-xx / 2.0)
    if np.max(np.abs(big_m - big_m.conj().T)) > tol:
        return False
    return bool(np.max(np.abs(big_m @ big_m - big_m)) <= tol)


def slater_covariance(big_m: np.ndarray) -> CovarianceMatrix:
    """Covariance of the number-conserving Gaussian state with one-body
    matrix M_jk = <adag_j a_k> (Hermitian, 0 <= M <= 1)."""
    big_m = np.asarray(big_m, dtype=complex)
    n = big_m.shape[0]
    gamma = np.zeros((2 * n, 2 * n))
    re = np.real(big_m)
    im = np.imag(big_m)
    idx = np.arange(n)
    gamma[np.ix_(2 * idx, 2 * idx + 1)] = -2.0 * re
    gamma[np.ix_(2 * idx + 1, 2 * idx)] = 2.0 * re
    gamma[np.ix_(2 * idx, 2 * idx)] = -2.0 * im
    gamma[np.ix_(2 * idx + 1, 2 * idx + 1)] = -2.0 * im
    gamma[2 * idx, 2 * idx + 1] = 1.0 - 2.0 * np.real(np.diag(big_m))
    gamma[2 * idx + 1, 2 * idx] = -(1.0 - 2.0 * np.real(np.diag(big_m)))
    gamma[2 * idx, 2 * idx] = 0.0
    gamma[2 * idx + 1, 2 * idx + 1] = 0.0
    return CovarianceMatrix(gamma)


# ---------------------------------------------------------------------------
# purification and local search
# ---------------------------------------------------------------------------


def purify(gamma: CovarianceMatrix | np.ndarray, inst: CifhInstance) -> CovarianceMatrix:
    """Round a mixed Gaussian state to a pure one without losing energy.

    The state is a convex mixture over the +-1 sign patterns of its canonical
    block values, and the energy is multilinear in those values, so fixing
    the blocks one at a time by conditional expectation (most mixed block
    first, ties resolved toward +1) never decreases the energy.
    """
    form = block_diagonalize_antisym(_raw(gamma))
    values = form.values.astype(float).copy()
    order = np.argsort(np.abs(1.0 - np.abs(values)), kind="stable")[::-1]
    for j in order:
        values[j] = 1.0
        up = energy_total(form.reassemble(values), inst)
        values[j] = -1.0
        down = energy_total(form.reassemble(values), inst)
        values[j] = 1.0 if up >= down else -1.0
    return CovarianceMatrix(form.reassemble(values))


def clip_blocks(gamma: np.ndarray) -> CovarianceMatrix:
    """Clip canonical block values into [0, 1]; the nearest valid covariance
    for matrices that drifted slightly outside (e.g. out of an SDP solver)."""
    form = block_diagonalize_antisym(np.asarray(gamma, dtype=float))
    return CovarianceMatrix(form.reassemble(np.clip(form.values, 0.0, 1.0)))


_REFINE_ANGLES = tuple(
    s * np.pi / d for d in (4.0, 8.0, 16.0, 32.0, 64.0) for s in (1.0, -1.0)
)


def local_refine(
    gamma0: CovarianceMatrix | np.ndarray,
    inst: CifhInstance,
    budget: int = 20000,
) -> CovarianceMatrix:
    """Deterministic greedy ascent over pure Gaussian states near gamma0.

    The state is kept in canonical form (orthogonal frame R, block signs
    sigma); moves are block-sign flips and Givens rotations of frame-row
    pairs over a fixed angle ladder.  `budget` caps the number of candidate
    energy evaluations; budget = 0 returns gamma0 unchanged.  The returned
    energy is never below the input energy (up to 1e-10).
    """
    m0 = _raw(gamma0)
    if budget <= 0:
        return CovarianceMatrix(m0)
    start = purify(m0, inst)  # spends no budget; never loses energy
    form = block_diagonalize_antisym(start.matrix)
    r = form.rotation.copy()
    sigma = form.values.copy()  # entries +-1
    nmaj = r.shape[0]

    def energy(rot: np.ndarray, sig: np.ndarray) -> float:
        return energy_total(rot.T @ assemble_blocks(sig) @ rot, inst)

    best = energy(r, sigma)
    evals = 0
    improved = True
    while improved and evals < budget:
        improved = False
        for j in range(len(sigma)):
            if evals >= budget:
                break
            sigma[j] = -sigma[j]
            cand = energy(r, sigma)
            evals += 1
            if cand > best + 1e-12:
                best = cand
                improved = True
            else:
                sigma[j] = -sigma[j]
        for a in range(nmaj):
            for b in range(a + 1, nmaj):
                if evals >= budget:
                    break
                base_a = r[a, :].copy()
                base_b = r[b, :].copy()
                best_angle = None
                for theta in _REFINE_ANGLES:
                    c, s = np.cos(theta), np.sin(theta)
                    r[a, :] = c * base_a + s * base_b
                    r[b, :] = -s * base_a + c * base_b
                    cand = energy(r, sigma)
                    evals += 1
                    if cand > best + 1e-12:
                        best = cand
                        best_angle = theta
                    if evals >= budget:
                        break
                if best_angle is None:
                    r[a, :] = base_a
                    r[b, :] = base_b
                else:
                    c, s = np.cos(best_angle), np.sin(best_angle)
                    r[a, :] = c * base_a + s * base_b
                    r[b, :] = -s * base_a + c * base_b
                    improved = True
    return CovarianceMatrix(r.T @ assemble_blocks(sigma) @ r)


def random_covariance(n: int, rng: np.random.Generator, pure: bool = False) -> CovarianceMatrix:
    """Haar-rotated random covariance; block values are 1 (pure) or U[0,1]."""
    import scipy.stats

    r = scipy.stats.ortho_group.rvs(2 * n, random_state=rng)
    values = np.ones(n) if pure else rng.uniform(0.0, 1.0, size=n)
    return CovarianceMatrix(r.T @ assemble_blocks(values) @ r)
