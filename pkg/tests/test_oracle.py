"""Exact-diagonalization oracle: Jordan-Wigner algebra, sector spectra,
and the small closed forms everything else is checked against."""

import math

import numpy as np
import pytest

from cifh import gaussian, model
from cifh.oracle import (
    ORACLE_MODE_LIMIT,
    SectorSpectrum,
    covariance_of_state,
    exact_spectrum,
    gaussian_density_matrix,
    heisenberg_line4,
    jw_hamiltonian,
    line4_upper_bound,
    majorana_matrices,
    number_operator,
)


def test_majorana_algebra():
    n = 3
    cs = majorana_matrices(n)
    assert len(cs) == 2 * n
    eye = np.eye(2**n)
    for i, ci in enumerate(cs):
        assert np.allclose(ci, ci.conj().T)
        for j, cj in enumerate(cs):
            anti = ci @ cj + cj @ ci
            expected = 2.0 * eye if i == j else np.zeros_like(eye)
            assert np.allclose(anti, expected), (i, j)


def test_number_operator_counts_bits():
    n = 4
    num = number_operator(n).toarray()
    # diagonal in the occupation basis with the Hamming weight on it
    assert np.allclose(num, np.diag(np.diag(num)))
    weights = np.array([bin(k).count("1") for k in range(2**n)])
    # occupation-number ordering is an internal choice; the multiset of
    # diagonal entries per weight class is what must match
    assert sorted(np.diag(num).real) == sorted(weights.tolist())


def test_jw_hamiltonian_conserves_particle_number():
    inst = model.random_instance(n=5, seed=7, convention="traceless")
    h = jw_hamiltonian(inst).toarray()
    num = number_operator(5).toarray()
    assert np.allclose(h, h.conj().T)
    assert np.allclose(h @ num - num @ h, 0.0, atol=1e-12)


def test_traceless_convention_is_traceless():
    inst = model.random_instance(n=4, seed=11, convention="traceless")
    h = jw_hamiltonian(inst).toarray()
    assert abs(np.trace(h)) < 1e-10


def test_line4_closed_forms():
    spec = exact_spectrum(heisenberg_line4())
    # the 4-mode line has sector maxima (1 + 2*sqrt(2))/4 at N in {1, 3}
    # and (3 + 2*sqrt(3))/4 at half filling
    assert spec.lambda_max == pytest.approx((3 + 2 * math.sqrt(3)) / 4, abs=1e-12)
    assert spec.per_sector_max[1] == pytest.approx((1 + 2 * math.sqrt(2)) / 4, abs=1e-12)
    assert spec.per_sector_max[3] == pytest.approx((1 + 2 * math.sqrt(2)) / 4, abs=1e-12)
    assert spec.per_sector_max[0] == pytest.approx(-0.75, abs=1e-12)
    assert spec.per_sector_max[4] == pytest.approx(-0.75, abs=1e-12)


def test_line4_upper_bound_fields():
    bound = line4_upper_bound()
    spec = exact_spectrum(heisenberg_line4())
    assert bound.lambda_max == pytest.approx(spec.lambda_max, abs=1e-12)
    assert bound.gap == pytest.approx(spec.gap_below_max, abs=1e-10)
    assert 0.0 < bound.s < 1.0
    assert bound.ratio_upper < 1.0
    assert bound.ratio_upper > bound.alpha_star


def test_sector_spectrum_shapes():
    inst = model.random_instance(n=4, seed=3, convention="traceless")
    spec = exact_spectrum(inst)
    assert spec.n == 4
    assert len(spec.per_sector_max) == 5
    assert len(spec.eigenvalues) == 2**4
    assert spec.lambda_max == pytest.approx(max(spec.per_sector_max))
    assert spec.lambda_max == pytest.approx(float(np.max(spec.eigenvalues)))
    assert spec.lambda_min == pytest.approx(float(np.min(spec.eigenvalues)))
    # cross-check against one dense diagonalization of the full matrix
    dense = np.linalg.eigvalsh(jw_hamiltonian(inst).toarray())
    assert np.allclose(np.sort(spec.eigenvalues), dense, atol=1e-10)


def test_avg_q_max_envelope():
    spec = exact_spectrum(heisenberg_line4())
    # the envelope dominates the sector maxima and interpolates linearly
    for big_n in range(5):
        assert spec.avg_q_max(big_n) >= spec.per_sector_max[big_n] - 1e-12
    assert spec.avg_q_max(2.0) == pytest.approx(spec.lambda_max)
    mid = spec.avg_q_max(1.5)
    assert mid >= 0.5 * (spec.avg_q_max(1.0) + spec.avg_q_max(2.0)) - 1e-12
    with pytest.raises(ValueError):
        spec.avg_q_max(-0.5)
    with pytest.raises(ValueError):
        spec.avg_q_max(4.5)


def test_avg_q_max_concavity():
    spec = exact_spectrum(model.random_instance(n=5, seed=19, convention="traceless"))
    qs = np.linspace(0.0, 5.0, 41)
    vals = [spec.avg_q_max(q) for q in qs]
    # concavity: every chord midpoint sits at or below the curve
    for i in range(len(qs) - 2):
        assert vals[i + 1] >= 0.5 * (vals[i] + vals[i + 2]) - 1e-10


def test_covariance_of_bit_state():
    n = 3
    # occupation basis state |101> built from the number operator eigenbasis
    num = number_operator(n).toarray()
    occ_ops = []
    cs = majorana_matrices(n)
    for j in range(n):
        # n_j = (1 - i c_{2j} c_{2j+1}) / 2, matching <n_j> = (1 - Gamma_{2j,2j+1})/2
        occ_ops.append(0.5 * (np.eye(2**n) - 1j * cs[2 * j] @ cs[2 * j + 1]))
    # find the basis vector with occupations (1, 0, 1)
    target = None
    for k in range(2**n):
        v = np.zeros(2**n)
        v[k] = 1.0
        occs = [float(np.real(v @ op @ v)) for op in occ_ops]
        if np.allclose(occs, [1.0, 0.0, 1.0], atol=1e-12):
            target = v
            break
    assert target is not None
    gamma = covariance_of_state(target, n)
    expected = gaussian.covariance_from_bits((1, 0, 1))
    assert np.allclose(gamma, expected.matrix, atol=1e-12)


def test_covariance_antisymmetric_and_bounded():
    rng = np.random.default_rng(5)
    n = 3
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    v /= np.linalg.norm(v)
    gamma = covariance_of_state(v, n)
    assert np.allclose(gamma, -gamma.T, atol=1e-12)
    assert np.max(np.abs(np.linalg.eigvalsh(1j * gamma))) <= 1.0 + 1e-10


def test_gaussian_density_matrix_reproduces_wick_energy():
    rng = np.random.default_rng(17)
    n = 3
    inst = model.random_instance(n=n, seed=23, convention="traceless")
    h = jw_hamiltonian(inst).toarray()
    for _ in range(20):
        gamma = gaussian.random_covariance(n, rng)
        rho = gaussian_density_matrix(gamma.matrix, n)
        assert abs(np.trace(rho) - 1.0) < 1e-10
        assert np.min(np.linalg.eigvalsh(rho)) > -1e-10
        energy = float(np.real(np.trace(rho @ h)))
        assert energy == pytest.approx(gaussian.energy_total(gamma, inst), abs=1e-9)


def test_gaussian_density_matrix_round_trip():
    rng = np.random.default_rng(29)
    n = 3
    gamma = gaussian.random_covariance(n, rng)
    rho = gaussian_density_matrix(gamma.matrix, n)
    assert np.allclose(covariance_of_state(rho, n), gamma.matrix, atol=1e-9)


def test_mode_limit_refusal():
    inst = model.random_instance(n=ORACLE_MODE_LIMIT + 1, seed=1, convention="traceless")
    with pytest.raises(ValueError, match="at most"):
        exact_spectrum(inst)
