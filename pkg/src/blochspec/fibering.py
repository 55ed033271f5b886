"""Bloch decomposition of periodic operators on the line and on the integer lattice.

Two concrete settings share the same structure:

* 1d continuum Schroedinger operators -d^2/dx^2 + V with V given by Fourier
  coefficients: each quasimomentum k yields a plane-wave fiber matrix whose
  low eigenvalues are the band functions.
* period-q nearest-neighbor operators on Z with M cells and periodic
  boundary: a finite Bloch transform block-diagonalizes the q*M operator
  into M fibers of size q, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import assembly
from .model import (
    TWO_PI,
    FourierPotential,
    HermitianMatrix,
    QuasiMomentum,
    SpectrumSample,
    eig_hermitian,
    uniform_k_grid,
)

DEFAULT_CUTOFF = 32
DEFAULT_BANDS = 8
DEFAULT_KPOINTS = 101


@dataclass(frozen=True)
class FiberTruncation:
    """Plane-wave cutoff: basis frequencies -N..N, fiber dimension 2N+1."""

    N: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("cutoff must be non-negative")

    @property
    def dimension(self) -> int:
        return 2 * self.N + 1


@dataclass(frozen=True)
class DiscreteCell:
    """Period-q nearest-neighbor operator on q*M sites with unit hopping."""

    q: int
    M: int
    onsite: tuple

    def __post_init__(self):
        if self.q < 1 or self.M < 1:
            raise ValueError("need q >= 1 sites per cell and M >= 1 cells")
        onsite = tuple(float(v) for v in self.onsite)
        if len(onsite) != self.q:
            raise ValueError(f"expected {self.q} onsite energies, got {len(onsite)}")
        object.__setattr__(self, "onsite", onsite)

    @property
    def sites(self) -> int:
        return self.q * self.M


def _require_1d_k(k: QuasiMomentum) -> float:
    if k.dimension != 1:
        raise ValueError("continuum fibering is one-dimensional; pass a 1d quasimomentum")
    return k.k1


def build_fiber_matrix(potential: FourierPotential, k: QuasiMomentum,
                       trunc: FiberTruncation) -> HermitianMatrix:
    """Fiber operator at quasimomentum k in the plane-wave basis.

    Entry (m, n) = delta_mn (2*pi*m + k)^2 + v(m - n) for m, n in -N..N.
    The cutoff must cover every stored potential frequency.
    """
    kval = _require_1d_k(k)
    N = trunc.N
    if N < potential.max_frequency:
        raise ValueError(
            f"cutoff N={N} cannot represent the potential (max frequency "
            f"{potential.max_frequency})"
        )
    freqs = np.arange(-N, N + 1)
    # v-lookup table indexed by frequency difference m - n in [-2N, 2N]
    table = np.zeros(4 * N + 1, dtype=complex)
    for n, v in potential.coefficients.items():
        table[n + 2 * N] = v
    diff = freqs[:, None] - freqs[None, :]
    mat = table[diff + 2 * N] + np.diag((TWO_PI * freqs + kval) ** 2).astype(complex)
    return HermitianMatrix(mat)


def fiber_spectrum(potential: FourierPotential, k: QuasiMomentum,
                   trunc: FiberTruncation, bands: int) -> SpectrumSample:
    """The lowest ``bands`` eigenvalues of the fiber at k, ascending."""
    if bands < 1:
        raise ValueError("need at least one band")
    if bands > trunc.dimension:
        raise ValueError(f"requested {bands} bands from a {trunc.dimension}-dimensional fiber")
    w = eig_hermitian(build_fiber_matrix(potential, k, trunc))
    return SpectrumSample(k, w[:bands])


def band_sweep(potential: FourierPotential, trunc: FiberTruncation,
               bands: int = DEFAULT_BANDS, kpoints: int = DEFAULT_KPOINTS):
    """Band functions on the uniform k-grid.

    Returns (ks, energies) with energies[i, b] the b-th band at ks[i].
    """
    ks = uniform_k_grid(kpoints)
    energies = np.empty((kpoints, bands))
    for i, kval in enumerate(ks):
        sample = fiber_spectrum(potential, QuasiMomentum((kval,)), trunc, bands)
        energies[i] = sample.eigenvalues
    return ks, energies


def band_structure(potential: FourierPotential, trunc: FiberTruncation,
                   bands: int = DEFAULT_BANDS, kpoints: int = DEFAULT_KPOINTS,
                   eps: float | None = None) -> assembly.BandSet:
    """Assembled spectrum of the periodic operator: merged band intervals."""
    _, energies = band_sweep(potential, trunc, bands, kpoints)
    if eps is None:
        eps = assembly.sweep_merge_eps(energies)
    return assembly.coalesce_intervals(assembly.branch_ranges(energies), eps)


# ---------------------------------------------------------------------------
# discrete lattice: finite Bloch transform and the periodic-truncation oracle
# ---------------------------------------------------------------------------

def discrete_fiber_matrix(cell: DiscreteCell, k: float) -> HermitianMatrix:
    """q x q fiber of the periodic nearest-neighbor operator at phase k.

    Onsite energies on the diagonal, unit hopping on the off-diagonals, and
    the cell-wrapping bond carries the Bloch phase exp(+-ik).  Contributions
    add up, so small q (where the corner coincides with a bond or the
    diagonal) comes out right automatically.
    """
    if not (0.0 <= k < TWO_PI):
        raise ValueError(f"fiber phase {k} outside [0, 2*pi)")
    q = cell.q
    mat = np.diag(np.asarray(cell.onsite, dtype=complex))
    for j in range(q - 1):
        mat[j, j + 1] += 1.0
        mat[j + 1, j] += 1.0
    mat[q - 1, 0] += np.exp(1j * k)
    mat[0, q - 1] += np.exp(-1j * k)
    return HermitianMatrix(mat)


def discrete_bloch_transform(f, cell: DiscreteCell) -> np.ndarray:
    """Finite Bloch transform: M blocks of length q, unitarily.

    Block m, entry j is (1/sqrt(M)) * sum_g exp(2*pi*i*m*g/M) f[(j - q*g) mod q*M];
    the 1/sqrt(M) normalization makes the map an isometry (Parseval).
    """
    vec = np.asarray(f, dtype=complex)
    if vec.shape != (cell.sites,):
        raise ValueError(f"expected a vector of length {cell.sites}, got shape {vec.shape}")
    q, M = cell.q, cell.M
    shifts = np.empty((M, q), dtype=complex)
    idx = np.arange(q)
    for g in range(M):
        shifts[g] = vec[(idx - q * g) % (q * M)]
    phases = np.exp(2j * np.pi * np.outer(np.arange(M), np.arange(M)) / M)
    return phases @ shifts / np.sqrt(M)


def dense_periodic_matrix(cell: DiscreteCell) -> np.ndarray:
    """Real-space q*M operator with periodic boundary, built bond by bond."""
    n = cell.sites
    mat = np.diag(np.tile(np.asarray(cell.onsite, dtype=complex), cell.M))
    for x in range(n):
        y = (x + 1) % n
        mat[x, y] += 1.0
        mat[y, x] += 1.0
    return mat


def block_circulant_from_fibers(fibers: np.ndarray) -> np.ndarray:
    """Assemble the q*M block-circulant whose Bloch symbol is the fiber family.

    ``fibers[m]`` is the q x q fiber at phase 2*pi*m/M; the hopping blocks are
    its inverse discrete Fourier transform.
    """
    M, q = fibers.shape[0], fibers.shape[1]
    hop = np.fft.fft(fibers, axis=0) / M  # hop[d] = (1/M) sum_m e^{-2pi i m d / M} H_m
    big = np.zeros((q * M, q * M), dtype=complex)
    for g in range(M):
        for d in range(M):
            big[g * q:(g + 1) * q, ((g + d) % M) * q:((g + d) % M + 1) * q] += hop[d]
    return big


def periodic_truncation_spectrum(cell: DiscreteCell, fiber_matrix_builder=None) -> np.ndarray:
    """Ascending spectrum of the q*M periodic operator.

    With no builder the operator is assembled directly in real space.  With a
    builder (phase -> HermitianMatrix) the block circulant with that Bloch
    symbol is synthesized instead, so any finite fiber family can be checked
    against the union of its fiber spectra.
    """
    if fiber_matrix_builder is None:
        big = dense_periodic_matrix(cell)
    else:
        ks = uniform_k_grid(cell.M)
        fibers = np.stack([fiber_matrix_builder(cell, float(k)).data for k in ks])
        big = block_circulant_from_fibers(fibers)
    return eig_hermitian(HermitianMatrix(big))


def fiber_union_spectrum(cell: DiscreteCell) -> np.ndarray:
    """Sorted multiset union of fiber spectra over the M-point phase grid."""
    ks = uniform_k_grid(cell.M)
    all_w = [eig_hermitian(discrete_fiber_matrix(cell, float(k))) for k in ks]
    return np.sort(np.concatenate(all_w))
