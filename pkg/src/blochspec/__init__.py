"""Spectra of periodic and magnetic lattice operators via Bloch fibering.

Band structures of 1d periodic Schroedinger operators in a plane-wave basis,
Harper/almost-Mathieu spectra and Hofstadter butterflies at rational flux,
integrated density of states, and finite-dimensional verification of the
trace-quantization mechanism behind band structure.
"""

from .algebra import (
    KADISON_TOL,
    ProjectivePair,
    canonical_trace,
    clock_shift,
    commutation_residual,
    kadison_band_bound,
    spectral_projection_trace,
)
from .assembly import (
    BandSet,
    IDSCurve,
    cantor_proxy,
    coalesce_intervals,
    distance_to_bands,
    fibonacci_approximants,
    gaps,
    ids,
    interior_gaps,
    lebesgue_measure,
    merge_intervals,
    sweep_merge_eps,
)
from .cli import VERSION as __version__
from .cli import RunConfig, main, run
from .fibering import (
    DiscreteCell,
    FiberTruncation,
    band_structure,
    band_sweep,
    build_fiber_matrix,
    discrete_bloch_transform,
    discrete_fiber_matrix,
    fiber_spectrum,
    fiber_union_spectrum,
    periodic_truncation_spectrum,
)
from .harper import (
    ButterflyData,
    HarperParams,
    butterfly,
    direct_space_bulk,
    direct_space_harper,
    eigenvalue_grid,
    farey_fractions,
    harper_bloch_matrix,
    harper_spectrum,
)
from .model import (
    EIG_TOL,
    HERMITICITY_TOL,
    EigensolverError,
    FourierPotential,
    HermitianMatrix,
    QuasiMomentum,
    RationalFlux,
    SpectrumSample,
    eig_hermitian,
    uniform_k_grid,
)

__all__ = [
    "__version__",
    "BandSet",
    "ButterflyData",
    "DiscreteCell",
    "EIG_TOL",
    "EigensolverError",
    "FiberTruncation",
    "FourierPotential",
    "HERMITICITY_TOL",
    "HarperParams",
    "HermitianMatrix",
    "IDSCurve",
    "KADISON_TOL",
    "ProjectivePair",
    "QuasiMomentum",
    "RationalFlux",
    "RunConfig",
    "SpectrumSample",
    "band_structure",
    "band_sweep",
    "build_fiber_matrix",
    "butterfly",
    "canonical_trace",
    "cantor_proxy",
    "clock_shift",
    "coalesce_intervals",
    "commutation_residual",
    "direct_space_bulk",
    "direct_space_harper",
    "discrete_bloch_transform",
    "discrete_fiber_matrix",
    "distance_to_bands",
    "eig_hermitian",
    "eigenvalue_grid",
    "farey_fractions",
    "fiber_spectrum",
    "fiber_union_spectrum",
    "fibonacci_approximants",
    "gaps",
    "harper_bloch_matrix",
    "harper_spectrum",
    "ids",
    "interior_gaps",
    "kadison_band_bound",
    "lebesgue_measure",
    "main",
    "merge_intervals",
    "periodic_truncation_spectrum",
    "run",
    "spectral_projection_trace",
    "sweep_merge_eps",
    "uniform_k_grid",
]
