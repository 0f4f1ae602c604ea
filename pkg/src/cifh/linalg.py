"""Dense linear-algebra helpers shared across the package.

Wraps the numpy/scipy symmetric-eigenvalue and real-Schur routines behind
the three operations the rest of the code relies on: symmetric
eigendecomposition, the canonical 2x2 block form of a real antisymmetric
matrix, and projection onto the positive-semidefinite cone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


def eig_sym(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a real symmetric matrix.

    Returns (values, vectors) with values ascending and
    a = vectors @ diag(values) @ vectors.T.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    sym_err = np.max(np.abs(a - a.T)) if a.size else 0.0
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    if sym_err > 1e-10 * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {sym_err:.3e})")
    values, vectors = np.linalg.eigh((a + a.T) / 2.0)
    return values, vectors


@dataclass(frozen=True)
class AntisymBlockForm:
    """Canonical block form A = R.T @ B @ R of a real antisymmetric A.

    B is block diagonal with 2x2 blocks [[0, v], [-v, 0]], the block values
    v are nonnegative and sorted descending, and R is orthogonal (det = +-1;
    requiring det = +1 together with v >= 0 is not possible in general).
    """

    values: np.ndarray  # shape (m,), descending, >= 0
    rotation: np.ndarray  # shape (2m, 2m), orthogonal

    def block_matrix(self) -> np.ndarray:
        return assemble_blocks(self.values)

    def reassemble(self, values: np.ndarray | None = None) -> np.ndarray:
        """R.T @ B @ R, optionally with replaced block values."""
        v = self.values if values is None else np.asarray(values, dtype=float)
        r = self.rotation
        return r.T @ assemble_blocks(v) @ r


def assemble_blocks(values: np.ndarray) -> np.ndarray:
    """Block-diagonal antisymmetric matrix with blocks [[0, v], [-v, 0]]."""
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    b = np.zeros((2 * m, 2 * m))
    idx = np.arange(m)
    b[2 * idx, 2 * idx + 1] = values
    b[2 * idx + 1, 2 * idx] = -values
    return b


def block_diagonalize_antisym(a: np.ndarray) -> AntisymBlockForm:
    """Canonical form of a real antisymmetric matrix via the real Schur
    decomposition, post-processed so block values are >= 0 and descending."""
    a = np.asarray(a, dtype=float)
    dim = a.shape[0]
    if a.ndim != 2 or a.shape[0] != a.shape[1] or dim % 2 != 0:
        raise ValueError(f"expected an even-dimensional square matrix, got {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    anti_err = np.max(np.abs(a + a.T)) if a.size else 0.0
    if anti_err > 1e-10 * scale:
        raise ValueError(f"matrix is not antisymmetric (max error {anti_err:.3e})")
    a = (a - a.T) / 2.0
    t, z = scipy.linalg.schur(a, output="real")
    r = z.T  # a = r.T @ t @ r
    m = dim // 2
    values = np.empty(m)
    for j in range(m):
        v = t[2 * j, 2 * j + 1]
        if v < 0:
            # swap the block's two frame rows to flip the sign
            r[[2 * j, 2 * j + 1], :] = r[[2 * j + 1, 2 * j], :]
            v = -v
        values[j] = v
    order = np.argsort(-values, kind="stable")
    values = values[order]
    row_order = np.empty(dim, dtype=np.intp)
    row_order[0::2] = 2 * order
    row_order[1::2] = 2 * order + 1
    r = r[row_order, :]
    return AntisymBlockForm(values=values, rotation=r)


def project_psd(s: np.ndarray) -> np.ndarray:
    """Euclidean (Frobenius) projection of a symmetric matrix onto the
    positive-semidefinite cone: clip negative eigenvalues to zero."""
    values, vectors = eig_sym(s)
    clipped = np.clip(values, 0.0, None)
    out = (vectors * clipped) @ vectors.T
    return (out + out.T) / 2.0


def project_psd_hermitian(s: np.ndarray) -> np.ndarray:
    """Same projection for a complex Hermitian matrix."""
    s = np.asarray(s)
    values, vectors = np.linalg.eigh((s + s.conj().T) / 2.0)
    clipped = np.clip(values, 0.0, None)
    out = (vectors * clipped) @ vectors.conj().T
    return (out + out.conj().T) / 2.0
