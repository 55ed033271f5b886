"""Finite-dimensional checks of the operator-algebraic band-structure inputs.

At rational flux p/q the magnetic translation phases are generated by the
q x q clock and shift matrices, whose commutation defect is the scalar
omega = exp(2*pi*i*p/q).  The normalized k-averaged matrix trace realizes the
canonical trace; applied to spectral projections it quantizes in units of 1/q,
which is what caps the number of bands at q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import harper
from .model import RationalFlux

UNITARITY_TOL = 1e-12
COCYCLE_TOL = 1e-12
KADISON_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ProjectivePair:
    """Unitaries U, V with U V = omega V U, validated on construction."""

    U: np.ndarray
    V: np.ndarray
    omega: complex

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex)
        V = np.asarray(self.V, dtype=complex)
        if U.shape != V.shape or U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("U and V must be square matrices of equal size")
        eye = np.eye(U.shape[0])
        for name, mat in (("U", U), ("V", V)):
            if np.linalg.norm(mat @ mat.conj().T - eye) > UNITARITY_TOL:
                raise ValueError(f"{name} is not unitary within {UNITARITY_TOL}")
        if commutation_residual(U, V, self.omega) > COCYCLE_TOL:
            raise ValueError("U, V do not satisfy the commutation relation for omega")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "omega", complex(self.omega))

    @property
    def dimension(self) -> int:
        return self.U.shape[0]


def commutation_residual(U, V, omega) -> float:
    """Frobenius norm of U V - omega V U."""
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    return float(np.linalg.norm(U @ V - omega * (V @ U)))


def clock_shift(flux: RationalFlux) -> ProjectivePair:
    """Clock and shift matrices: the standard q-dimensional pair for flux p/q.

    U = diag(omega^j), V the cyclic shift, omega = exp(2*pi*i*p/q); for q = 1
    this degenerates to the commuting pair ([1], [1]).
    """
    q = flux.q
    omega = np.exp(2j * np.pi * flux.p / q)
    U = np.diag(omega ** np.arange(q))
    V = np.zeros((q, q), dtype=complex)
    V[(np.arange(q) + 1) % q, np.arange(q)] = 1.0
    return ProjectivePair(U, V, omega)


def _family_as_array(element) -> np.ndarray:
    """Normalize a k-indexed operator family to an array (..., q, q)."""
    if hasattr(element, "values") and callable(element.values):
        mats = list(element.values())
    else:
        mats = list(element)
    if not mats:
        raise ValueError("empty operator family")
    arrays = []
    for m in mats:
        a = np.asarray(getattr(m, "data", m), dtype=complex)
        if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
            raise ValueError("family entries must be square matrices")
        arrays.append(a)
    dims = {a.shape[-1] for a in arrays}
    if len(dims) != 1:
        raise ValueError("family entries disagree on matrix dimension")
    return np.concatenate([a.reshape(-1, a.shape[-1], a.shape[-1]) for a in arrays])


def canonical_trace(element) -> float:
    """Normalized trace of a k-indexed family: (1/q) * k-average of tr.

    Equals 1 on the identity family.  ``element`` may be a mapping from k to
    matrices, a sequence of matrices, or a stacked array (..., q, q).
    """
    fam = _family_as_array(element)
    q = fam.shape[-1]
    traces = np.trace(fam, axis1=-2, axis2=-1)
    return float(traces.mean().real) / q


def spectral_projection_trace(params: harper.HarperParams, energy: float,
                              kgrid=harper.DEFAULT_KGRID) -> float:
    """Normalized trace of the spectral projection below an energy in a gap.

    The energy must avoid the bands (inside a gap, below, or above the whole
    spectrum); inside a band the projection rank varies with k and the value
    would be grid-dependent, so that input is rejected.  Inside a true gap
    the per-k eigenvalue count is constant and the result lands on a multiple
    of 1/q; a deviation beyond KADISON_TOL means the gap was misclassified
    and is also rejected.
    """
    evals = harper.eigenvalue_grid(params, kgrid)
    bands = harper.spectrum_from_eigenvalues(evals)
    if bands.contains(energy):
        raise ValueError(f"energy {energy} lies inside a band; projection trace undefined there")
    q = params.flux.q
    counts = (evals <= energy).sum(axis=-1)
    value = float(counts.mean()) / q
    if abs(value * q - round(value * q)) > KADISON_TOL * q:
        raise ValueError(
            f"projection trace {value} is not quantized in units of 1/{q}; "
            "the requested energy does not sit in a genuine gap of the k-grid sweep"
        )
    return value


def kadison_band_bound(flux: RationalFlux) -> int:
    """Upper bound on the number of spectral bands at flux p/q: exactly q.

    Spectral projections have normalized trace at least 1/q, and traces of
    the projections onto the bands must sum to 1.
    """
    return flux.q
