"""Quadratic (hopping) part: exact one-body solver."""

import numpy as np
import pytest

from cifh.gaussian import energy_quad, purity, slater_check
from cifh.model import CifhInstance, Convention, fmc_instance, random_instance
from cifh.oracle import exact_spectrum, jw_hamiltonian
from cifh.quad import hopping_matrix, quad_constant, solve_quad


def hopping_only(n, edges):
    return CifhInstance(
        n=n,
        interaction_edges=(),
        potentials=(0.0,) * n,
        hopping_edges=tuple(edges),
        convention=Convention.TRACELESS,
    )


def test_hopping_matrix_layout():
    inst = hopping_only(3, [(0, 1, 0.5), (1, 2, -0.25)])
    m = hopping_matrix(inst)
    want = np.array(
        [[0.0, -0.5, 0.0], [-0.5, 0.0, 0.25], [0.0, 0.25, 0.0]]
    )
    assert np.allclose(m, want)


def test_solve_quad_value_is_positive_spectrum_sum():
    inst = hopping_only(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    sol = solve_quad(inst)
    eps = np.linalg.eigvalsh(hopping_matrix(inst))
    assert sol.value == pytest.approx(float(np.clip(eps, 0, None).sum()))
    assert np.allclose(np.sort(sol.mode_energies), sol.mode_energies)


def test_solve_quad_matches_exact_diagonalization():
    for seed in range(8):
        inst = random_instance(
            n=5, seed=700 + seed, convention=Convention.TRACELESS,
            p_edge=0.0, p_hop=0.8, zero_potentials=True,
        )
        if not inst.hopping_edges:
            continue
        sol = solve_quad(inst)
        lam = exact_spectrum(inst).lambda_max
        assert sol.value == pytest.approx(lam, abs=1e-9)
        assert energy_quad(sol.gamma, inst) == pytest.approx(sol.value, abs=1e-9)


def test_solve_quad_state_is_pure_slater():
    inst = hopping_only(4, [(0, 1, 1.0), (0, 2, 0.5), (2, 3, 1.5)])
    sol = solve_quad(inst)
    assert purity(sol.gamma).defect <= 1e-9
    assert slater_check(sol.gamma)


def test_quad_constant_per_convention():
    tr = random_instance(n=3, seed=1, convention=Convention.TRACELESS)
    assert quad_constant(tr) == 0.0
    psd = CifhInstance(
        n=2,
        interaction_edges=((0, 1, 1.0),),
        potentials=(0.5, 0.5),
        hopping_edges=((0, 1, 0.75),),
        convention=Convention.PSD,
    )
    assert quad_constant(psd) == pytest.approx(0.75)
    fmc = fmc_instance(2, [(0, 1, 1.0)])
    assert quad_constant(fmc) == 0.0  # the fmc shift lives in the classical part


def test_psd_quad_value_includes_constant():
    # value = lambda_max(H_quad) where the psd hopping term is
    # w'(2 - a^dag a - a^dag a)-style, i.e. shifted by sum w'
    inst = CifhInstance(
        n=2,
        interaction_edges=(),
        potentials=(0.0, 0.0),
        hopping_edges=((0, 1, 1.0),),
        convention=Convention.PSD,
    )
    sol = solve_quad(inst)
    lam = float(
        np.linalg.eigvalsh(jw_hamiltonian(inst).toarray())[-1]
    )
    assert sol.value == pytest.approx(lam, abs=1e-9)


def test_empty_hopping():
    inst = hopping_only(3, [])
    sol = solve_quad(inst)
    assert sol.value == 0.0
    assert np.allclose(sol.mode_energies, 0.0)
