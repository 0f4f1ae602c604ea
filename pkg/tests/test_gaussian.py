"""Covariance-matrix machinery: Wick energies, blends, mediator, purify."""

import numpy as np
import pytest

from cifh.gaussian import (
    CovarianceMatrix,
    blend,
    clip_blocks,
    covariance_from_bits,
    energy_class,
    energy_quad,
    energy_total,
    local_refine,
    mediator,
    purify,
    purity,
    random_covariance,
    slater_check,
    slater_covariance,
    wick_quartic,
)
from cifh.model import CifhInstance, Convention, fmc_instance, random_instance
from cifh.oracle import gaussian_density_matrix, jw_hamiltonian, number_operator
from cifh.quad import solve_quad

RNG = np.random.default_rng(20240814)


def test_covariance_from_bits_occupations():
    gamma = covariance_from_bits([1, 0, 1])
    assert np.allclose(gamma.occupations(), [1.0, 0.0, 1.0])
    cert = purity(gamma)
    assert cert.is_pure and cert.defect <= 1e-12


def test_covariance_validation_rejects_garbage():
    with pytest.raises(ValueError):
        CovarianceMatrix(np.ones((4, 4)))  # not antisymmetric
    too_big = np.zeros((4, 4))
    too_big[0, 1] = 1.5
    too_big[1, 0] = -1.5
    with pytest.raises(ValueError):
        CovarianceMatrix(too_big)  # spectral norm above 1
    with pytest.raises(ValueError):
        CovarianceMatrix(np.zeros((3, 3)))  # odd dimension


def test_random_covariance_valid_and_seeded():
    rng = np.random.default_rng(11)
    for i in range(20):
        pure = i % 2 == 0
        gamma = random_covariance(4, rng, pure=pure)
        m = gamma.matrix
        assert np.allclose(m, -m.T, atol=1e-12)
        assert np.linalg.svd(m, compute_uv=False).max() <= 1.0 + 1e-9
        if pure:
            assert purity(gamma).defect <= 1e-9


def test_wick_quartic_against_dense_oracle():
    # <c_i c_j c_k c_l> on a Gaussian state, all distinct indices
    rng = np.random.default_rng(5)
    n = 3
    from cifh.oracle import majorana_matrices

    for trial in range(10):
        gamma = random_covariance(n, rng, pure=(trial % 2 == 0))
        rho = gaussian_density_matrix(gamma.matrix, n)
        cs = majorana_matrices(n)
        idx = rng.choice(2 * n, size=4, replace=False)
        i, j, k, l = (int(v) for v in idx)
        want = np.real(np.trace(rho @ cs[i] @ cs[j] @ cs[k] @ cs[l]))
        # wick_quartic computes the i<j<k<l correlator, signed by the
        # permutation parity of the requested order
        perm = np.argsort([i, j, k, l], kind="stable")
        sign = np.linalg.det(np.eye(4)[perm])
        got = sign * wick_quartic(gamma, *sorted((i, j, k, l)))
        assert abs(got - want) < 1e-9


def test_energy_matches_dense_trace_all_conventions():
    for i, conv in enumerate(3 * [Convention.TRACELESS, Convention.PSD, Convention.FMC]):
        inst = random_instance(n=4, seed=300 + i, convention=conv)
        gamma = random_covariance(4, RNG, pure=(i % 2 == 0))
        rho = gaussian_density_matrix(gamma.matrix, 4)
        h = jw_hamiltonian(inst).toarray()
        want = float(np.real(np.trace(rho @ h)))
        got = energy_total(gamma, inst)
        assert abs(got - want) < 1e-9 * (1.0 + np.linalg.norm(h, 2))
        assert abs(energy_class(gamma, inst) + energy_quad(gamma, inst) - got) < 1e-12


def test_blend_is_convex_combination():
    rng = np.random.default_rng(7)
    a = random_covariance(3, rng)
    b = random_covariance(3, rng)
    out = blend([(0.25, a), (0.75, b)])
    assert np.allclose(out.matrix, 0.25 * a.matrix + 0.75 * b.matrix)
    with pytest.raises(ValueError):
        blend([(0.6, a), (0.6, b)])  # weights must sum to 1
    with pytest.raises(ValueError):
        blend([(-0.2, a), (1.2, b)])


def test_blend_energy_linear_in_quadratic_part():
    inst = random_instance(n=4, seed=41, convention=Convention.TRACELESS)
    rng = np.random.default_rng(8)
    a, b = random_covariance(4, rng), random_covariance(4, rng)
    mix = blend([(0.3, a), (0.7, b)])
    ea, eb = energy_quad(a, inst), energy_quad(b, inst)
    assert abs(energy_quad(mix, inst) - (0.3 * ea + 0.7 * eb)) < 1e-10


def test_mediator_cancels_mode_blocks():
    inst = random_instance(n=5, seed=42, convention=Convention.TRACELESS, p_hop=0.9)
    quad = solve_quad(inst)
    med = mediator(quad.gamma)
    half = blend([(0.5, med), (0.5, quad.gamma)])
    for j in range(5):
        assert abs(half.matrix[2 * j, 2 * j + 1]) < 1e-12
    # the mediator leaves the quadratic energy unchanged in the half blend:
    # hopping terms are sign-flipped in exactly compensating positions
    assert energy_quad(half, inst) == pytest.approx(
        0.5 * (energy_quad(med, inst) + energy_quad(quad.gamma, inst))
    )


def test_slater_check_and_covariance():
    inst = random_instance(n=4, seed=43, convention=Convention.TRACELESS, p_hop=0.9)
    quad = solve_quad(inst)
    assert slater_check(quad.gamma)
    bits = covariance_from_bits([0, 1, 1, 0])
    assert slater_check(bits)
    rng = np.random.default_rng(9)
    generic = random_covariance(4, rng)  # a generic mixed state is not Slater
    assert not slater_check(generic, tol=1e-6)


def test_purify_raises_energy_and_purity():
    rng = np.random.default_rng(10)
    for i in range(15):
        conv = [Convention.TRACELESS, Convention.PSD, Convention.FMC][i % 3]
        inst = random_instance(n=4, seed=500 + i, convention=conv)
        gamma = random_covariance(4, rng)
        pure = purify(gamma, inst)
        assert purity(pure).defect <= 1e-8
        assert energy_total(pure, inst) >= energy_total(gamma, inst) - 1e-8


def test_clip_blocks_restores_validity():
    gamma = covariance_from_bits([1, 0])
    bad = gamma.matrix.copy()
    bad[0, 1] += 2e-7  # slightly out of [-1, 1], as solver output can be
    bad[1, 0] -= 2e-7
    fixed = clip_blocks(bad)
    assert np.linalg.svd(fixed.matrix, compute_uv=False).max() <= 1.0 + 1e-12


def test_local_refine_never_decreases_energy():
    for seed in range(6):
        inst = random_instance(n=4, seed=600 + seed, convention=Convention.TRACELESS)
        gamma = purify(random_covariance(4, np.random.default_rng(seed)), inst)
        before = energy_total(gamma, inst)
        after = local_refine(gamma, inst, budget=500)
        assert energy_total(after, inst) >= before - 1e-10


def test_fmc_zero_covariance_quarter_energy():
    # the maximally mixed state picks up exactly w/4 + w'/2 per edge pair
    inst = fmc_instance(2, [(0, 1, 1.0)])
    e = energy_total(np.zeros((4, 4)), inst)
    assert e == pytest.approx(0.25 + 0.0)


def test_particle_number_expectation_matches_occupations():
    rng = np.random.default_rng(12)
    gamma = random_covariance(3, rng)
    rho = gaussian_density_matrix(gamma.matrix, 3)
    nop = number_operator(3).toarray()
    want = float(np.real(np.trace(rho @ nop)))
    assert abs(sum(gamma.occupations()) - want) < 1e-10
