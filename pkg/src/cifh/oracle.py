"""Exact small-system reference implementations.

Everything here works in the full 2^n-dimensional Fock space through the
Jordan-Wigner encoding (mode j maps to qubit j, occupation = bit j, bit 0
least significant):

    a_j = (prod_{m<j} Z_m) sigma-minus_j,
    c_{2j+1(odd)} = a_j + adag_j,   c_{2j(even orbit)} = i(a_j - adag_j).

These routines are deliberately independent of the covariance-matrix code:
they are the oracle the fast path is tested against, so they share no
formulas with it beyond the Hamiltonian definition itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
import scipy.sparse

from .linalg import block_diagonalize_antisym
from .model import CifhInstance, Convention, heisenberg_line4

ORACLE_MODE_LIMIT = 14
DENSE_MODE_LIMIT = 7


def _require_modes(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise ValueError(f"{what} supports at most {limit} modes (got n={n})")


def _occupations(n: int) -> np.ndarray:
    """(2^n, n) array of occupation bits; row x is the basis state |x>."""
    x = np.arange(1 << n, dtype=np.int64)
    return (x[:, None] >> np.arange(n)[None, :]) & 1


def jw_hamiltonian(inst: CifhInstance) -> scipy.sparse.csr_matrix:
    """Sparse real-symmetric Jordan-Wigner matrix of the full Hamiltonian."""
    n = inst.n
    _require_modes(n, ORACLE_MODE_LIMIT, "jw_hamiltonian")
    dim = 1 << n
    occ = _occupations(n)
    diag = np.zeros(dim)
    conv = inst.convention
    for j, k, w in inst.interaction_edges:
        njnk = occ[:, j] * occ[:, k]
        if conv is Convention.TRACELESS:
            diag += w * (0.25 - njnk)
        elif conv is Convention.PSD:
            diag += w * (1.0 - njnk)
        else:  # fmc: (w/2)(n_j + n_k - 2 n_j n_k)
            diag += (w / 2.0) * (occ[:, j] + occ[:, k] - 2 * njnk)
    for j, m in enumerate(inst.potentials):
        if conv is Convention.TRACELESS:
            diag += m * (occ[:, j] - 0.5)
        elif conv is Convention.PSD:
            diag += m * occ[:, j]
        # fmc potentials are already part of the interaction expression
    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    vals = [diag]
    for j, k, w in inst.hopping_edges:
        if conv is Convention.PSD:
            diag += w  # the identity offset in w'(1 - hop)
        # -w' (adag_j a_k + adag_k a_j); matrix element between x (bit k set,
        # bit j clear) and y = x - e_k + e_j carries the JW parity of the
        # modes strictly between j and k.
        mask = (occ[:, k] == 1) & (occ[:, j] == 0)
        xs = np.nonzero(mask)[0].astype(np.int64)
        if xs.size == 0:
            continue
        parity = np.zeros(xs.shape, dtype=np.int64)
        for m in range(j + 1, k):
            parity ^= (xs >> m) & 1
        sign = 1.0 - 2.0 * parity
        ys = xs - (1 << k) + (1 << j)
        amp = -w * sign
        rows.extend([ys, xs])
        cols.extend([xs, ys])
        vals.extend([amp, amp])
    vals[0] = diag  # diag may have grown psd offsets inside the loop
    h = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return h.tocsr()


def number_operator(n: int) -> scipy.sparse.csr_matrix:
    occ = _occupations(n)
    return scipy.sparse.diags(occ.sum(axis=1).astype(float)).tocsr()


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorSpectrum:
    """Spectrum of a particle-number-conserving Hamiltonian, by sector.

    per_sector_max[N] is the largest eigenvalue among states with exactly N
    particles; eigenvalues is the full sorted (ascending) spectrum.
    """

    n: int
    per_sector_max: np.ndarray
    eigenvalues: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.per_sector_max.max())

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def gap_below_max(self) -> float:
        """lambda_max minus the next distinct eigenvalue below it."""
        top = self.eigenvalues[-1]
        below = self.eigenvalues[self.eigenvalues < top - 1e-12 * max(1.0, abs(top))]
        if below.size == 0:
            return 0.0
        return float(top - below[-1])

    def avg_q_max(self, q: float) -> float:
        """max tr(rho H) over states with tr(rho N) = q: the upper concave
        envelope of the points (N, per_sector_max[N]) evaluated at q."""
        if not (0 <= q <= self.n):
            raise ValueError(f"q must lie in [0, {self.n}] (got {q})")
        pts = [(float(N), float(m)) for N, m in enumerate(self.per_sector_max)]
        hull: list[tuple[float, float]] = []
        for p in pts:  # upper hull, x already ascending
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                # drop hull[-1] if it lies on or below chord hull[-2] -> p
                if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(p)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= q <= x2:
                t = 0.0 if x2 == x1 else (q - x1) / (x2 - x1)
                return float(y1 + t * (y2 - y1))
        return float(hull[-1][1])


def exact_spectrum(inst: CifhInstance) -> SectorSpectrum:
    """Diagonalize sector by sector (the Hamiltonian conserves particle
    number, so the Fock matrix is block diagonal over Hamming weight)."""
    n = inst.n
    _require_modes(n, ORACLE_MODE_LIMIT, "exact_spectrum")
    h = jw_hamiltonian(inst)
    weights = _occupations(n).sum(axis=1)
    per_sector_max = np.empty(n + 1)
    all_eigs = []
    for big_n in range(n + 1):
        idx = np.nonzero(weights == big_n)[0]
        block = h[np.ix_(idx, idx)].toarray()
        evals = np.linalg.eigvalsh(block)
        per_sector_max[big_n] = evals[-1]
        all_eigs.append(evals)
    eigenvalues = np.sort(np.concatenate(all_eigs))
    return SectorSpectrum(n=n, per_sector_max=per_sector_max, eigenvalues=eigenvalues)


# ---------------------------------------------------------------------------
# Majorana operators and Gaussian states
# ---------------------------------------------------------------------------


def _apply_majorana(v: np.ndarray, idx: int, n: int) -> np.ndarray:
    """Apply c_idx (0-based: even -> x-type of mode idx//2, odd -> y-type)."""
    mode, is_y = divmod(idx, 2)
    dim = v.shape[0]
    states = np.arange(dim, dtype=np.int64)
    below = states & ((1 << mode) - 1)
    parity = np.zeros(dim, dtype=np.int64)
    for m in range(mode):
        parity ^= (below >> m) & 1
    sign = (1.0 - 2.0 * parity).astype(complex)
    flipped = states ^ (1 << mode)
    out = np.empty_like(v, dtype=complex)
    if not is_y:
        # c = a + adag: |x> -> sign |x ^ e_mode>
        out[flipped] = sign * v
    else:
        # c = i(a - adag): |x> -> -i sign |x ^ e> on occupied, +... below
        bit = (states >> mode) & 1
        phase = np.where(bit == 1, 1j, -1j)  # amplitude attached to target
        out[flipped] = sign * phase * v
    return out


def majorana_matrices(n: int) -> list[np.ndarray]:
    """Dense Majorana matrices c_1 .. c_2n (small n only)."""
    _require_modes(n, DENSE_MODE_LIMIT, "majorana_matrices")
    dim = 1 << n
    eye = np.eye(dim, dtype=complex)
    mats = []
    for idx in range(2 * n):
        cols = [_apply_majorana(eye[:, i], idx, n) for i in range(dim)]
        mats.append(np.stack(cols, axis=1))
    return mats


def covariance_of_state(state: np.ndarray, n: int) -> np.ndarray:
    """Covariance matrix Gamma_jk = (i/2) tr(rho [c_j, c_k]) of a state.

    `state` is either a 2^n vector or a 2^n x 2^n density matrix.
    """
    _require_modes(n, ORACLE_MODE_LIMIT, "covariance_of_state")
    state = np.asarray(state, dtype=complex)
    dim = 1 << n
    if state.ndim == 1:
        if state.shape[0] != dim:
            raise ValueError(f"state vector has wrong length for n={n}")
        nrm = np.linalg.norm(state)
        if nrm == 0:
            raise ValueError("state vector is zero")
        v = state / nrm
        applied = np.stack([_apply_majorana(v, idx, n) for idx in range(2 * n)])
        gram = applied.conj() @ applied.T  # gram[j, k] = <c_j v, c_k v>
        gamma = np.real(1j * gram)
        np.fill_diagonal(gamma, 0.0)
        return (gamma - gamma.T) / 2.0
    if state.shape != (dim, dim):
        raise ValueError(f"density matrix has wrong shape for n={n}")
    _require_modes(n, DENSE_MODE_LIMIT, "covariance_of_state(density matrix)")
    mats = majorana_matrices(n)
    gamma = np.zeros((2 * n, 2 * n))
    for j in range(2 * n):
        for k in range(j + 1, 2 * n):
            gamma[j, k] = np.real(1j * np.trace(state @ mats[j] @ mats[k]))
            gamma[k, j] = -gamma[j, k]
    return gamma


def gaussian_density_matrix(gamma: np.ndarray, n: int) -> np.ndarray:
    """Density matrix of the fermionic Gaussian state with covariance gamma:

        rho = 2^-n prod_j (1 + i v_j ct_{2j-1} ct_{2j}),

    where gamma = R.T B R is the canonical block form (block values v_j) and
    ct = R c are the rotated Majorana operators.  Small n only.
    """
    _require_modes(n, DENSE_MODE_LIMIT, "gaussian_density_matrix")
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (2 * n, 2 * n):
        raise ValueError(f"covariance has wrong shape for n={n}")
    form = block_diagonalize_antisym(gamma)
    r = form.rotation
    mats = majorana_matrices(n)
    dim = 1 << n
    rho = np.eye(dim, dtype=complex) / dim
    for j in range(n):
        ct_a = sum(r[2 * j, b] * mats[b] for b in range(2 * n))
        ct_b = sum(r[2 * j + 1, b] * mats[b] for b in range(2 * n))
        rho = rho @ (np.eye(dim) + 1j * form.values[j] * (ct_a @ ct_b))
    return (rho + rho.conj().T) / 2.0


# ---------------------------------------------------------------------------
# the 4-mode line record
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Line4UpperBound:
    """Certified upper bound on the Gaussian approximation ratio for the
    4-mode Heisenberg line, together with the quantities it is built from:
    the exact top eigenvalue, the spectral gap below it, the squared-overlap
    threshold s, the overlap radius alpha_star where the Gaussian purity
    criterion crosses 1, and the resulting ratio bound."""

    lambda_max: float
    gap: float
    s: float
    alpha_star: float
    ratio_upper: float


def _overlap_criterion(alpha: float, s: float) -> float:
    """g_s(alpha) from the top-eigenvector structure of the 4-mode line; a
    Gaussian state must satisfy g >= 1, and g < 1 for alpha > alpha_star."""
    a2 = alpha * alpha
    rest = 1.0 - a2
    term1 = (a2 * sqrt(s) + rest) ** 2
    term2 = 6.0 * (2.0 * alpha * sqrt(max(rest, 0.0)) + rest) ** 2
    return term1 + term2


def line4_upper_bound() -> Line4UpperBound:
    """Recompute the 4-mode-line ratio upper bound from the exact spectrum
    (nothing here is hard-coded beyond the overlap threshold s)."""
    spectrum = exact_spectrum(heisenberg_line4())
    lam = spectrum.lambda_max
    gap = spectrum.gap_below_max
    s = (5.0 + 2.0 * sqrt(3.0)) / 9.0
    lo, hi = 0.9, 1.0  # g(lo) > 1 > g(hi) = s; g monotone on the bracket
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _overlap_criterion(mid, s) >= 1.0:
            lo = mid
        else:
            hi = mid
    alpha_star = 0.5 * (lo + hi)
    a2 = alpha_star * alpha_star
    ratio_upper = (a2 * lam + (1.0 - a2) * (lam - gap)) / lam
    return Line4UpperBound(
        lambda_max=lam, gap=gap, s=s, alpha_star=alpha_star, ratio_upper=ratio_upper
    )
