"""Bloch fibering: plane-wave fiber matrices, the finite Bloch transform,
and the periodic-truncation (union of fibers) oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochspec import assembly
from blochspec.fibering import (
    DiscreteCell,
    FiberTruncation,
    band_structure,
    band_sweep,
    build_fiber_matrix,
    dense_periodic_matrix,
    discrete_bloch_transform,
    discrete_fiber_matrix,
    fiber_spectrum,
    fiber_union_spectrum,
    periodic_truncation_spectrum,
)
from blochspec.model import FourierPotential, QuasiMomentum, eig_hermitian

# Lowest eigenvalue of -u'' + 2 cos(2 pi x) u at k = 0, frozen from an
# independent N=256 plane-wave run before the build.
COSINE_GROUND_STATE = -5.0603838232251855e-02

COSINE = FourierPotential.from_positive({1: 1.0})


def k1(value: float) -> QuasiMomentum:
    return QuasiMomentum((value,))


# ---------------------------------------------------------------- fiber matrices

def test_free_fiber_is_exact_diagonal():
    m = build_fiber_matrix(FourierPotential.zero(), k1(0.0), FiberTruncation(1))
    assert np.allclose(np.diag(m.data), [4 * np.pi**2, 0.0, 4 * np.pi**2])
    assert np.allclose(m.data - np.diag(np.diag(m.data)), 0.0)
    w = eig_hermitian(m)
    assert np.allclose(w, [0.0, 4 * np.pi**2, 4 * np.pi**2])


@settings(max_examples=30, deadline=None)
@given(kval=st.floats(0.0, 2 * np.pi, exclude_max=True), n=st.integers(1, 8))
def test_free_fiber_eigenvalues_closed_form(kval, n):
    w = eig_hermitian(build_fiber_matrix(FourierPotential.zero(), k1(kval), FiberTruncation(n)))
    expected = np.sort((2 * np.pi * np.arange(-n, n + 1) + kval) ** 2)
    assert np.allclose(w, expected, rtol=1e-10, atol=1e-12)


def test_cosine_ground_state_matches_high_cutoff_oracle():
    sample = fiber_spectrum(COSINE, k1(0.0), FiberTruncation(16), 1)
    assert abs(sample.eigenvalues[0] - COSINE_GROUND_STATE) <= 1e-8


def test_cutoff_must_cover_potential():
    with pytest.raises(ValueError):
        build_fiber_matrix(FourierPotential.from_positive({3: 1.0}), k1(0.0), FiberTruncation(2))


def test_fiber_matrix_rejects_2d_momentum():
    with pytest.raises(ValueError):
        build_fiber_matrix(COSINE, QuasiMomentum((0.0, 0.0)), FiberTruncation(4))


def test_fiber_spectrum_examples():
    s = fiber_spectrum(FourierPotential.zero(), k1(np.pi), FiberTruncation(2), 3)
    assert np.allclose(s.eigenvalues, [np.pi**2, np.pi**2, 9 * np.pi**2])
    s = fiber_spectrum(FourierPotential.zero(), k1(0.0), FiberTruncation(2), 1)
    assert np.allclose(s.eigenvalues, [0.0])
    with pytest.raises(ValueError):
        fiber_spectrum(FourierPotential.zero(), k1(0.0), FiberTruncation(2), 6)


def test_band_functions_are_continuous_in_k():
    # adjacent-grid jumps on a refined grid stay below an empirical Lipschitz bound
    ks, coarse = band_sweep(COSINE, FiberTruncation(8), bands=4, kpoints=100)
    lip = np.abs(np.diff(coarse, axis=0)).max() / (ks[1] - ks[0])
    ks_f, fine = band_sweep(COSINE, FiberTruncation(8), bands=4, kpoints=400)
    dk = ks_f[1] - ks_f[0]
    assert np.abs(np.diff(fine, axis=0)).max() <= 1.2 * lip * dk


def test_monotone_convergence_in_cutoff():
    # refine N in steps of 8 until the lowest bands move by less than 1e-9;
    # the change must shrink at every refinement up to that acceptance point
    potential = FourierPotential.from_positive({1: 2.0, 2: 1.0})
    n = 2
    prev = fiber_spectrum(potential, k1(1.0), FiberTruncation(n), 4).eigenvalues
    diffs = []
    while True:
        n += 8
        cur = fiber_spectrum(potential, k1(1.0), FiberTruncation(n), 4).eigenvalues
        diffs.append(np.abs(cur - prev).max())
        prev = cur
        if diffs[-1] < 1e-9:
            break
        assert n < 120  # refinement must terminate
    assert diffs[0] > 1e-9  # the starting cutoff was genuinely unconverged
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1e-9


def test_free_band_structure_has_no_gaps_up_to_40():
    bands = band_structure(FourierPotential.zero(), FiberTruncation(16), bands=8, kpoints=101)
    assert assembly.gaps(bands, (0.0, 40.0)) == []


# ---------------------------------------------------------------- Bloch transform

def test_transform_of_delta_is_flat():
    cell = DiscreteCell(q=1, M=4, onsite=(0.0,))
    f = np.zeros(4)
    f[0] = 1.0
    blocks = discrete_bloch_transform(f, cell)
    assert np.allclose(blocks, 0.5)


def test_transform_rejects_wrong_length():
    with pytest.raises(ValueError):
        discrete_bloch_transform(np.zeros(5), DiscreteCell(q=2, M=3, onsite=(0.0, 0.0)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), q=st.integers(1, 4), m=st.integers(1, 16))
def test_transform_is_unitary(seed, q, m):
    rng = np.random.default_rng(seed)
    cell = DiscreteCell(q=q, M=m, onsite=tuple(rng.uniform(-2, 2, q)))
    f = rng.normal(size=cell.sites) + 1j * rng.normal(size=cell.sites)
    blocks = discrete_bloch_transform(f, cell)
    norm_in = np.vdot(f, f).real
    norm_out = np.vdot(blocks, blocks).real
    assert abs(norm_out - norm_in) <= 1e-12 * norm_in


def test_transform_decomposes_periodic_eigenvectors():
    # blocks of a big-operator eigenvector are fiber eigenvectors (same eigenvalue)
    cell = DiscreteCell(q=2, M=6, onsite=(0.3, -0.7))
    big = dense_periodic_matrix(cell)
    w, v = eig_hermitian(big, vectors=True)
    fibers = [discrete_fiber_matrix(cell, 2 * np.pi * m / cell.M).data for m in range(cell.M)]
    for idx in range(cell.sites):
        blocks = discrete_bloch_transform(v[:, idx], cell)
        for m in range(cell.M):
            b = blocks[m]
            if np.linalg.norm(b) > 1e-8:
                assert np.linalg.norm(fibers[m] @ b - w[idx] * b) <= 1e-8


# ---------------------------------------------------------------- periodic truncation

def test_pure_laplacian_circulant_spectrum():
    cell = DiscreteCell(q=1, M=6, onsite=(0.0,))
    w = periodic_truncation_spectrum(cell)
    expected = np.sort(2 * np.cos(2 * np.pi * np.arange(6) / 6))
    assert np.allclose(w, expected, atol=1e-12)
    # each fiber is the 1x1 value 2 cos k
    assert np.allclose(fiber_union_spectrum(cell), expected, atol=1e-12)


def test_single_cell_reduces_to_zero_phase_fiber():
    cell = DiscreteCell(q=3, M=1, onsite=(0.1, 0.2, 0.3))
    w = periodic_truncation_spectrum(cell)
    assert np.allclose(w, eig_hermitian(discrete_fiber_matrix(cell, 0.0)), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-3, 3), m=st.integers(1, 10))
def test_two_site_cell_matches_fiber_union(a, m):
    cell = DiscreteCell(q=2, M=m, onsite=(a, -a))
    direct = periodic_truncation_spectrum(cell)
    union = fiber_union_spectrum(cell)
    assert np.abs(direct - union).max() <= 1e-10


def test_block_circulant_synthesis_agrees_with_real_space():
    cell = DiscreteCell(q=3, M=5, onsite=(0.4, -0.2, 1.1))
    direct = periodic_truncation_spectrum(cell)
    synthesized = periodic_truncation_spectrum(cell, fiber_matrix_builder=discrete_fiber_matrix)
    assert np.abs(direct - synthesized).max() <= 1e-10
    assert np.abs(direct - fiber_union_spectrum(cell)).max() <= 1e-10
