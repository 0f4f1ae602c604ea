"""Symmetric/antisymmetric matrix helpers."""

import numpy as np
import pytest

from cifh.linalg import (
    AntisymBlockForm,
    assemble_blocks,
    block_diagonalize_antisym,
    eig_sym,
    project_psd,
    project_psd_hermitian,
)


def random_antisym(m, rng):
    a = rng.normal(size=(2 * m, 2 * m))
    return a - a.T


def test_eig_sym_reconstruction():
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = int(rng.integers(1, 9))
        a = rng.normal(size=(d, d))
        a = a + a.T
        vals, vecs = eig_sym(a)
        assert np.all(np.diff(vals) >= -1e-12)
        assert np.allclose(vecs @ np.diag(vals) @ vecs.T, a, atol=1e-10)


def test_eig_sym_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        eig_sym(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eig_sym(np.zeros((2, 3)))


def test_block_diagonalize_antisym_reconstructs():
    rng = np.random.default_rng(1)
    for _ in range(30):
        m = int(rng.integers(1, 7))
        a = random_antisym(m, rng)
        form = block_diagonalize_antisym(a)
        assert np.all(form.values >= -1e-12)
        assert np.all(np.diff(form.values) <= 1e-12)  # descending
        r = form.rotation
        assert np.allclose(r @ r.T, np.eye(2 * m), atol=1e-10)
        assert np.allclose(form.reassemble(), a, atol=1e-9)
        assert np.allclose(
            r.T @ assemble_blocks(form.values) @ r, a, atol=1e-9
        )


def test_block_values_match_singular_values():
    # block values of an antisymmetric matrix are its singular values in pairs
    rng = np.random.default_rng(2)
    a = random_antisym(4, rng)
    form = block_diagonalize_antisym(a)
    sv = np.linalg.svd(a, compute_uv=False)
    assert np.allclose(np.repeat(form.values, 2), sv, atol=1e-9)


def test_block_diagonalize_rejects_bad_input():
    with pytest.raises(ValueError):
        block_diagonalize_antisym(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        block_diagonalize_antisym(np.eye(4))


def test_reassemble_with_replaced_values():
    rng = np.random.default_rng(3)
    a = random_antisym(3, rng)
    form = block_diagonalize_antisym(a)
    hard = form.reassemble(np.ones_like(form.values))
    back = block_diagonalize_antisym(hard)
    assert np.allclose(back.values, 1.0, atol=1e-9)


def test_project_psd():
    rng = np.random.default_rng(4)
    for _ in range(10):
        d = int(rng.integers(2, 8))
        s = rng.normal(size=(d, d))
        s = s + s.T
        p = project_psd(s)
        vals = np.linalg.eigvalsh(p)
        assert vals.min() >= -1e-10
        # projection is the identity on PSD inputs
        assert np.allclose(project_psd(p), p, atol=1e-9)


def test_project_psd_hermitian():
    rng = np.random.default_rng(5)
    s = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    s = s + s.conj().T
    p = project_psd_hermitian(s)
    assert np.linalg.eigvalsh(p).min() >= -1e-10
    assert np.allclose(p, p.conj().T)
