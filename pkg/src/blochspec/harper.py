"""Harper (almost-Mathieu) operators at rational flux and Hofstadter butterflies.

At flux p/q the magnetic translations reduce the lattice operator to a q x q
Bloch matrix over the magnetic Brillouin zone; sweeping the zone and merging
the eigenvalue branches yields at most q bands.  A direct-space truncation on
a long open chain provides an independent oracle for the fibered spectrum.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import assembly
from .model import (
    TWO_PI,
    EigensolverError,
    HermitianMatrix,
    QuasiMomentum,
    RationalFlux,
    eig_hermitian,
    uniform_k_grid,
)

DEFAULT_KGRID = (64, 64)
THREADS_ENV_VAR = "BLOCHSPEC_THREADS"

# direct-space eigenvectors with more than half their mass in the outer 2q
# sites on either end are open-boundary artifacts, not bulk spectrum
EDGE_MASS_THRESHOLD = 0.5


@dataclass(frozen=True)
class HarperParams:
    """Almost-Mathieu parameters: flux p/q, coupling lam, phase offset theta.

    lam = 1 is the isotropic Hofstadter case.  theta shifts the cosine in the
    direct-space operator; the Bloch matrices absorb it into k2, so spectra
    over a full k-grid do not depend on it.
    """

    flux: RationalFlux
    lam: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("coupling lam must be positive")
        if not (0.0 <= self.theta < TWO_PI):
            raise ValueError(f"phase offset {self.theta} outside [0, 2*pi)")


@dataclass(frozen=True, eq=False)
class ButterflyData:
    """Hofstadter butterfly: one (flux, BandSet) row per reduced fraction."""

    rows: tuple

    def __post_init__(self):
        rows = tuple((flux, bands) for flux, bands in self.rows)
        values = [flux.value for flux, _ in rows]
        if any(v1 >= v2 for v1, v2 in zip(values, values[1:])):
            raise ValueError("butterfly rows must have strictly increasing flux")
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return len(self.rows)


def harper_bloch_matrix(params: HarperParams, k: QuasiMomentum) -> HermitianMatrix:
    """q x q Bloch matrix at 2d quasimomentum (k1, k2).

    Diagonal 2*lam*cos(k2 + 2*pi*j*p/q), unit super/sub-diagonal, and corner
    phases exp(+-i*k1) closing the cycle.  Terms add, so q = 1 collapses to
    the scalar 2*cos(k1) + 2*lam*cos(k2).
    """
    if k.dimension != 2:
        raise ValueError("Harper Bloch matrices live on a 2d Brillouin zone")
    p, q = params.flux.p, params.flux.q
    j = np.arange(q)
    mat = np.diag(2.0 * params.lam * np.cos(k.k2 + TWO_PI * p * j / q)).astype(complex)
    for i in range(q - 1):
        mat[i, i + 1] += 1.0
        mat[i + 1, i] += 1.0
    mat[q - 1, 0] += np.exp(1j * k.k1)
    mat[0, q - 1] += np.exp(-1j * k.k1)
    return HermitianMatrix(mat)


def _bloch_batch(params: HarperParams, k1: float, k2s: np.ndarray) -> np.ndarray:
    """Stack of Bloch matrices at fixed k1 over a row of k2 values."""
    p, q = params.flux.p, params.flux.q
    j = np.arange(q)
    batch = np.zeros((k2s.size, q, q), dtype=complex)
    batch[:, j, j] = 2.0 * params.lam * np.cos(k2s[:, None] + TWO_PI * p * j[None, :] / q)
    for i in range(q - 1):
        batch[:, i, i + 1] += 1.0
        batch[:, i + 1, i] += 1.0
    batch[:, q - 1, 0] += np.exp(1j * k1)
    batch[:, 0, q - 1] += np.exp(-1j * k1)
    return batch


def bloch_matrix_family(params: HarperParams, kgrid=DEFAULT_KGRID) -> np.ndarray:
    """All Bloch matrices on the k-grid, shape (n1, n2, q, q)."""
    n1, n2 = kgrid
    k1s, k2s = uniform_k_grid(n1), uniform_k_grid(n2)
    return np.stack([_bloch_batch(params, float(a), k2s) for a in k1s])


def eigenvalue_grid(params: HarperParams, kgrid=DEFAULT_KGRID) -> np.ndarray:
    """Eigenvalue branches over the k-grid, shape (n1, n2, q), ascending in q."""
    n1, n2 = kgrid
    k1s, k2s = uniform_k_grid(n1), uniform_k_grid(n2)
    out = np.empty((n1, n2, params.flux.q))
    for i, a in enumerate(k1s):
        try:
            out[i] = np.linalg.eigvalsh(_bloch_batch(params, float(a), k2s))
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(
                f"eigensolver failed at flux {params.flux}, k1={float(a)!r}: {exc}",
                flux=params.flux,
                k=float(a),
            ) from exc
    return out


def spectrum_from_eigenvalues(evals: np.ndarray, eps: float | None = None) -> assembly.BandSet:
    """Merge sampled eigenvalue branches into a BandSet."""
    if eps is None:
        eps = assembly.sweep_merge_eps(evals)
    return assembly.coalesce_intervals(assembly.branch_ranges(evals), eps)


def harper_spectrum(params: HarperParams, kgrid=DEFAULT_KGRID,
                    eps: float | None = None) -> assembly.BandSet:
    """Spectrum at rational flux: union of fiber spectra over the k-grid."""
    return spectrum_from_eigenvalues(eigenvalue_grid(params, kgrid), eps)


def direct_space_harper(params: HarperParams, sites: int, theta: float | None = None) -> np.ndarray:
    """Ascending eigenvalues of the open-boundary direct-space truncation.

    sites x sites tridiagonal matrix with diagonal 2*lam*cos(2*pi*n*p/q + theta)
    and unit hopping.
    """
    w, _ = _direct_space_eigh(params, sites, theta)
    return w


def _direct_space_eigh(params: HarperParams, sites: int, theta: float | None):
    if sites < params.flux.q:
        raise ValueError("direct-space truncation must cover at least one magnetic cell")
    if theta is None:
        theta = params.theta
    n = np.arange(sites)
    diag = 2.0 * params.lam * np.cos(TWO_PI * n * params.flux.p / params.flux.q + theta)
    mat = np.diag(diag).astype(complex)
    off = np.arange(sites - 1)
    mat[off, off + 1] = 1.0
    mat[off + 1, off] = 1.0
    return eig_hermitian(HermitianMatrix(mat), vectors=True)


def direct_space_bulk(params: HarperParams, sites: int, theta: float | None = None):
    """Split the direct-space spectrum into bulk and boundary eigenvalues.

    An eigenvalue counts as boundary-localized when its eigenvector carries
    more than EDGE_MASS_THRESHOLD of its mass in the outer 2q sites at either
    end; those are artifacts of the open boundary.
    """
    w, v = _direct_space_eigh(params, sites, theta)
    edge = min(2 * params.flux.q, sites)
    mass = (np.abs(v[:edge]) ** 2).sum(axis=0) + (np.abs(v[-edge:]) ** 2).sum(axis=0)
    is_edge = mass > EDGE_MASS_THRESHOLD
    return w[~is_edge], w[is_edge]


def farey_fractions(max_q: int) -> list:
    """All reduced fractions p/q in [0, 1) with q <= max_q, ascending.

    Stern-Brocot/Farey next-term recurrence; no unreduced duplicates, so the
    denominator of every row is the honest magnetic period.
    """
    if max_q < 1:
        raise ValueError("need a positive denominator bound")
    out = [RationalFlux(0, 1)]
    a, b, c, d = 0, 1, 1, max_q
    while True:
        step = (max_q + b) // d
        a, b, c, d = c, d, step * c - a, step * d - b
        if (a, b) == (1, 1):
            return out
        out.append(RationalFlux(a, b))


def worker_count(workers: int | None = None) -> int:
    """Resolve the sweep parallelism: explicit argument, else environment, else 1."""
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV_VAR, "1"))
    if workers < 1:
        raise ValueError("worker count must be at least 1")
    return workers


def butterfly(max_q: int, lam: float = 1.0, kgrid=DEFAULT_KGRID,
              workers: int | None = None) -> ButterflyData:
    """Hofstadter butterfly: merged band sets for every reduced flux q <= max_q.

    Rows are independent; with workers > 1 they are computed in a thread pool
    (the eigensolver releases the GIL).  Row order is by flux regardless of
    completion order.
    """
    fluxes = farey_fractions(max_q)

    def row(flux: RationalFlux):
        return flux, harper_spectrum(HarperParams(flux=flux, lam=lam), kgrid)

    n_workers = worker_count(workers)
    if n_workers == 1:
        rows = [row(f) for f in fluxes]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(row, fluxes))
    return ButterflyData(tuple(rows))
