"""Exact optimization of the quadratic (hopping) part.

The hopping part is a free-fermion Hamiltonian sum_jk T_jk adag_j a_k with
T = -W' (the negated weighted adjacency of the hopping graph), so its
maximum is the sum of the positive one-body eigenvalues, achieved by the
Slater determinant occupying exactly the positive modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import CovarianceMatrix, slater_covariance
from .linalg import eig_sym
from .model import CifhInstance, Convention, edge_arrays


def hopping_matrix(inst: CifhInstance) -> np.ndarray:
    """One-body matrix T with T[j, k] = -w'_jk on hopping edges, zero diag."""
    t = np.zeros((inst.n, inst.n))
    for j, k, w in inst.hopping_edges:
        t[j, k] = -w
        t[k, j] = -w
    return t


def hopping_majorana(inst: CifhInstance) -> np.ndarray:
    """Antisymmetric h with sum(h * Gamma) = hopping expectation (traceless
    part): the Majorana form H_quad = sum_{j,k} h_jk i c_j c_k."""
    h = np.zeros((2 * inst.n, 2 * inst.n))
    ej, ek, w = edge_arrays(inst.hopping_edges)
    h[2 * ej, 2 * ek + 1] += w / 4.0
    h[2 * ek + 1, 2 * ej] -= w / 4.0
    h[2 * ej + 1, 2 * ek] -= w / 4.0
    h[2 * ek, 2 * ej + 1] += w / 4.0
    return h


def quad_constant(inst: CifhInstance) -> float:
    """Constant offset of the hopping part (psd convention only)."""
    if inst.convention is Convention.PSD:
        return float(sum(w for _, _, w in inst.hopping_edges))
    return 0.0


@dataclass(frozen=True)
class QuadSolution:
    """Exact maximizer of the hopping part.

    value is lambda_max(H_quad) including any convention constant;
    mode_energies are the one-body eigenvalues, ascending.
    """

    value: float
    gamma: CovarianceMatrix
    mode_energies: np.ndarray


def solve_quad(inst: CifhInstance) -> QuadSolution:
    """Occupy the strictly positive one-body modes (zero modes left empty);
    an empty hopping graph yields the vacuum."""
    t = hopping_matrix(inst)
    energies, vectors = eig_sym(t)
    positive = energies > 0.0
    m = vectors[:, positive] @ vectors[:, positive].T
    gamma = slater_covariance(m)
    value = float(energies[positive].sum()) + quad_constant(inst)
    return QuadSolution(value=value, gamma=gamma, mode_energies=energies)
