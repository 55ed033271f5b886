"""Band sets, gap detection, spectral measure, and the integrated density of states.

Sampled fiber spectra come in as per-quasimomentum eigenvalue branches; this
module turns them into finite unions of disjoint closed intervals, finds the
gaps, and evaluates the trace per unit volume of spectral projections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RationalFlux, SpectrumSample

# Coarse grids fragment bands where branches touch at conical points; the
# merge tolerance must swallow those fake gaps.  An adjacent-grid-point
# eigenvalue jump is exactly that fragmentation scale.
MERGE_EPS_FACTOR = 3.0
MERGE_EPS_FLOOR = 1e-9

IDS_DEFAULT_POINTS = 512
IDS_HULL_PADDING = 0.05


@dataclass(frozen=True)
class BandSet:
    """Finite union of disjoint closed intervals [a_i, b_i], sorted."""

    intervals: tuple

    def __post_init__(self):
        clean = []
        for iv in self.intervals:
            a, b = float(iv[0]), float(iv[1])
            if a > b:
                raise ValueError(f"interval [{a}, {b}] is reversed")
            clean.append((a, b))
        for (a0, b0), (a1, b1) in zip(clean, clean[1:]):
            if a1 <= b0:
                raise ValueError(
                    f"intervals [{a0}, {b0}] and [{a1}, {b1}] are not strictly disjoint"
                )
        object.__setattr__(self, "intervals", tuple(clean))

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def hull(self) -> tuple:
        if not self.intervals:
            raise ValueError("empty band set has no hull")
        return (self.intervals[0][0], self.intervals[-1][1])

    def contains(self, energy: float) -> bool:
        return any(a <= energy <= b for a, b in self.intervals)


@dataclass(frozen=True, eq=False)
class IDSCurve:
    """Integrated density of states on an energy grid, values in [0, 1]."""

    energies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float).copy()
        v = np.asarray(self.values, dtype=float).copy()
        if e.shape != v.shape or e.ndim != 1:
            raise ValueError("energies and values must be flat arrays of equal length")
        if np.any(np.diff(e) < 0):
            raise ValueError("energy grid must be ascending")
        if np.any(np.diff(v) < 0):
            raise ValueError("IDS values must be non-decreasing")
        if e.size and (v[0] < 0.0 or v[-1] > 1.0):
            raise ValueError("IDS values must lie in [0, 1]")
        e.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "values", v)

    def at(self, energy: float) -> float:
        """Value of the step curve at an energy inside the grid range."""
        i = int(np.searchsorted(self.energies, energy, side="right")) - 1
        if i < 0:
            return 0.0
        return float(self.values[i])


def coalesce_intervals(intervals, eps: float) -> BandSet:
    """Merge overlapping or eps-close closed intervals into a BandSet."""
    if eps <= 0:
        raise ValueError("merge tolerance must be positive")
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    merged = []
    for a, b in ivs:
        if merged and a - merged[-1][1] <= eps:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return BandSet(tuple((a, b) for a, b in merged))


def branch_ranges(energies: np.ndarray) -> list:
    """Per-branch (min, max) over all sampled quasimomenta.

    ``energies`` has branch index last; any leading axes enumerate the k-grid.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim < 2:
        raise ValueError("expected an array of eigenvalue branches over a k-grid")
    flat = e.reshape(-1, e.shape[-1])
    if flat.shape[0] == 0:
        raise ValueError("cannot assemble bands from an empty sweep")
    return list(zip(flat.min(axis=0).tolist(), flat.max(axis=0).tolist()))


def sweep_merge_eps(energies: np.ndarray) -> float:
    """Default merge tolerance for a sweep: 3x the largest adjacent-k jump.

    The grid axes lead, the branch axis is last; jumps are taken along every
    grid axis including the periodic wrap-around.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim < 2:
        raise ValueError("expected an array of eigenvalue branches over a k-grid")
    jump = 0.0
    for axis in range(e.ndim - 1):
        if e.shape[axis] > 1:
            jump = max(jump, float(np.abs(e - np.roll(e, 1, axis=axis)).max()))
    return max(MERGE_EPS_FACTOR * jump, MERGE_EPS_FLOOR)


def merge_intervals(samples, eps: float) -> BandSet:
    """Union of sampled fiber spectra as a BandSet.

    Each eigenvalue branch contributes the interval [min over k, max over k];
    overlapping or eps-close branch intervals coalesce.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("cannot merge an empty list of spectrum samples")
    arrays = []
    for s in samples:
        w = s.eigenvalues if isinstance(s, SpectrumSample) else np.asarray(s, dtype=float)
        arrays.append(w)
    sizes = {a.shape[0] for a in arrays}
    if len(sizes) != 1:
        raise ValueError("samples disagree on the number of eigenvalue branches")
    stacked = np.stack(arrays)
    return coalesce_intervals(branch_ranges(stacked), eps)


def gaps(bands: BandSet, window) -> list:
    """Maximal open subintervals of the window disjoint from all bands."""
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError(f"window [{lo}, {hi}] is empty")
    out = []
    cursor = lo
    for a, b in bands.intervals:
        if b <= cursor:
            continue
        if a >= hi:
            break
        if a > cursor:
            out.append((cursor, min(a, hi)))
        cursor = max(cursor, b)
        if cursor >= hi:
            break
    if cursor < hi:
        out.append((cursor, hi))
    return out


def interior_gaps(bands: BandSet) -> list:
    """Open gaps strictly between the first and last band."""
    if len(bands) < 2:
        return []
    return gaps(bands, bands.hull)


def lebesgue_measure(bands: BandSet) -> float:
    return float(sum(b - a for a, b in bands.intervals))


def distance_to_bands(bands: BandSet, values) -> np.ndarray:
    """Distance from each value to the band set (0 inside a band)."""
    x = np.asarray(values, dtype=float)
    if not bands.intervals:
        return np.full_like(x, np.inf)
    d = np.full_like(x, np.inf)
    for a, b in bands.intervals:
        d = np.minimum(d, np.where((x >= a) & (x <= b), 0.0, np.minimum(np.abs(x - a), np.abs(x - b))))
    return d


def ids(params, egrid=None, kgrid=(64, 64), points: int = IDS_DEFAULT_POINTS) -> IDSCurve:
    """Integrated density of states for a Harper family at rational flux.

    IDS(E) is the normalized trace of the spectral projection below E:
    the k-averaged eigenvalue count up to E divided by the fiber dimension q.
    With ``egrid=None`` a uniform grid of ``points`` energies spans the band
    hull padded by IDS_HULL_PADDING on each side.
    """
    from . import harper  # deferred: harper uses this module's merge helpers

    evals = harper.eigenvalue_grid(params, kgrid)
    q = params.flux.q
    pooled = np.sort(evals.reshape(-1))
    n_k = pooled.size // q
    if egrid is None:
        lo, hi = float(pooled[0]), float(pooled[-1])
        pad = IDS_HULL_PADDING * (hi - lo if hi > lo else 1.0)
        egrid = np.linspace(lo - pad, hi + pad, points)
    egrid = np.asarray(egrid, dtype=float)
    counts = np.searchsorted(pooled, egrid, side="right")
    return IDSCurve(egrid, counts / (q * n_k))


def cantor_proxy(approximants, lam: float = 1.0, kgrid=(128, 128)) -> list:
    """Total band measure along a sequence of rational flux approximants.

    The approximants must come in order of increasing denominator; the
    returned list pairs each flux with the Lebesgue measure of its spectrum.
    No monotonicity of the sequence is implied, only the overall shrinking
    that a measure-zero limiting spectrum would force.
    """
    from . import harper

    fluxes = list(approximants)
    qs = [f.q for f in fluxes]
    if any(q1 >= q2 for q1, q2 in zip(qs, qs[1:])):
        raise ValueError("approximants must be ordered by strictly increasing denominator")
    out = []
    for flux in fluxes:
        bands = harper.harper_spectrum(harper.HarperParams(flux=flux, lam=lam), kgrid)
        out.append((flux, lebesgue_measure(bands)))
    return out


def fibonacci_approximants(count: int = 6) -> list:
    """Successive ratios F(n)/F(n+1): rational approximants of the golden mean."""
    if count < 1:
        raise ValueError("need at least one approximant")
    fib = [1, 2]
    while len(fib) < count + 1:
        fib.append(fib[-1] + fib[-2])
    return [RationalFlux(fib[i], fib[i + 1]) for i in range(count)]
