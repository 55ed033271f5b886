"""Command-line surface: band structures, butterflies, IDS curves, algebra and
oracle checks, and the band-measure sweep along rational approximants.

Every output file starts with a metadata header (schema, tool version, config
echo) and is byte-identical across re-runs with the same config and seed.
Exit codes: 0 success, 1 failed verification check, 2 invalid usage,
3 eigensolver failure (offending flux/k in the error record on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import algebra, assembly, fibering, harper, svgplot
from .model import EigensolverError, FourierPotential, RationalFlux

VERSION = "0.1.0"
SCHEMA = 1

DEFAULT_APPROXIMANTS = "1/2,2/3,3/5,5/8,8/13,13/21"
ORACLE_DISTANCE_TOL = 1e-2
ORACLE_BULK_FRACTION = 0.99
ORACLE_UNITARITY_TOL = 1e-12
ORACLE_UNION_TOL = 1e-10


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command plus its numeric parameters."""

    command: str
    potential: str | None = None
    cutoff: int | None = None
    kpoints: int | None = None
    bands: int | None = None
    max_q: int | None = None
    lam: float | None = None
    kgrid: int | None = None
    flux: str | None = None
    epoints: int | None = None
    which: str | None = None
    sites: int | None = None
    theta: float | None = None
    trials: int | None = None
    vectors: int | None = None
    approximants: str | None = None
    fmt: str = "json"
    output: str | None = None
    seed: int = 0

    def echo(self) -> dict:
        """Config as echoed into output headers; the output path is omitted
        so identical computations produce identical bytes anywhere."""
        out = {}
        for f in fields(self):
            if f.name == "output":
                continue
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        return out


def parse_potential(text: str) -> FourierPotential:
    """Parse 'n:re[,im]' pairs, comma separated; conjugate frequencies are
    filled in automatically so the potential is real."""
    coeffs = {}
    current = None
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise UsageError(f"empty entry in potential spec {text!r}")
        if ":" in token:
            head, value = token.split(":", 1)
            try:
                n = int(head)
                re = float(value)
            except ValueError:
                raise UsageError(f"bad potential entry {token!r}") from None
            if n in coeffs:
                raise UsageError(f"duplicate frequency {n} in potential spec")
            coeffs[n] = complex(re, 0.0)
            current = n
        else:
            if current is None:
                raise UsageError(f"imaginary part {token!r} without a preceding n:re pair")
            try:
                im = float(token)
            except ValueError:
                raise UsageError(f"bad potential entry {token!r}") from None
            coeffs[current] = complex(coeffs[current].real, im)
            current = None
    for n in list(coeffs):
        if -n not in coeffs:
            coeffs[-n] = coeffs[n].conjugate()
    try:
        return FourierPotential(coeffs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_flux(text: str) -> RationalFlux:
    try:
        return RationalFlux.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _plain(value):
    """Recursively convert numpy scalars/arrays so json sees builtin types."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def render_json(config: RunConfig, payload: dict) -> str:
    doc = {"schema": SCHEMA, "version": VERSION, "config": config.echo()}
    doc.update(_plain(payload))
    return json.dumps(doc, indent=2) + "\n"


def render_csv(config: RunConfig, header: list, rows: list) -> str:
    lines = [
        f"# schema={SCHEMA}",
        f"# version={VERSION}",
        f"# config={json.dumps(_plain(config.echo()))}",
        ",".join(header),
    ]
    lines.extend(",".join(_fmt_cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _svg_metadata(config: RunConfig) -> str:
    return f"schema={SCHEMA} version={VERSION} config={json.dumps(_plain(config.echo()))}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_bands(config: RunConfig):
    potential = parse_potential(config.potential)
    trunc = fibering.FiberTruncation(config.cutoff)
    ks, energies = fibering.band_sweep(potential, trunc, config.bands, config.kpoints)
    ranges = assembly.branch_ranges(energies)
    gap_list = [
        (float(hi), float(lo_next))
        for (_, hi), (lo_next, _) in zip(ranges, ranges[1:])
        if lo_next > hi
    ]
    payload = {
        "k": ks,
        "band_energies": energies.T,  # one row per band
        "band_intervals": [[a, b] for a, b in ranges],
        "gaps": [[a, b] for a, b in gap_list],
    }
    ecols = [f"e{b}" for b in range(energies.shape[1])]
    header = ["kind", "i", "k"] + ecols + ["lo", "hi"]
    rows = []
    for i, k in enumerate(ks):
        rows.append(["sample", i, float(k)] + [float(e) for e in energies[i]] + ["", ""])
    for b, (a, bb) in enumerate(ranges):
        rows.append(["interval", b, ""] + [""] * len(ecols) + [a, bb])
    for g, (a, bb) in enumerate(gap_list):
        rows.append(["gap", g, ""] + [""] * len(ecols) + [a, bb])
    svg = svgplot.render_bands_svg(ks, energies, _svg_metadata(config))
    return payload, header, rows, svg


def _cmd_butterfly(config: RunConfig):
    data = harper.butterfly(config.max_q, config.lam, (config.kgrid, config.kgrid))
    payload_rows = []
    csv_rows = []
    for flux, bands in data.rows:
        payload_rows.append({
            "p": flux.p,
            "q": flux.q,
            "flux": flux.value,
            "bands": [[a, b] for a, b in bands.intervals],
        })
        for b, (a, bb) in enumerate(bands.intervals):
            csv_rows.append([flux.p, flux.q, flux.value, b, a, bb])
    payload = {"rows": payload_rows}
    header = ["p", "q", "flux", "band", "lo", "hi"]
    svg = svgplot.render_butterfly_svg(data.rows, _svg_metadata(config))
    return payload, header, csv_rows, svg


def _cmd_ids(config: RunConfig):
    params = harper.HarperParams(flux=parse_flux(config.flux), lam=config.lam)
    curve = assembly.ids(params, kgrid=(config.kgrid, config.kgrid), points=config.epoints)
    payload = {
        "flux": str(params.flux),
        "lam": params.lam,
        "energies": curve.energies,
        "values": curve.values,
    }
    header = ["i", "energy", "ids"]
    rows = [[i, float(e), float(v)] for i, (e, v) in enumerate(zip(curve.energies, curve.values))]
    return payload, header, rows, None


def _cmd_algebra_check(config: RunConfig):
    flux = parse_flux(config.flux)
    pair = algebra.clock_shift(flux)
    eye = np.eye(pair.dimension)
    res_u = float(np.linalg.norm(pair.U @ pair.U.conj().T - eye))
    res_v = float(np.linalg.norm(pair.V @ pair.V.conj().T - eye))
    res_c = algebra.commutation_residual(pair.U, pair.V, pair.omega)
    payload = {
        "p": flux.p,
        "q": flux.q,
        "omega_re": pair.omega.real,
        "omega_im": pair.omega.imag,
        "unitarity_residual_u": res_u,
        "unitarity_residual_v": res_v,
        "cocycle_residual": res_c,
        "band_count_bound": algebra.kadison_band_bound(flux),
    }
    header = ["key", "value"]
    rows = [[k, v] for k, v in payload.items()]
    return payload, header, rows, None


def _oracle_unitarity(rng, vectors: int) -> dict:
    worst = 0.0
    for _ in range(vectors):
        q = int(rng.integers(1, 5))
        m = int(rng.integers(1, 17))
        cell = fibering.DiscreteCell(q=q, M=m, onsite=tuple(rng.uniform(-2, 2, q)))
        f = rng.normal(size=cell.sites) + 1j * rng.normal(size=cell.sites)
        blocks = fibering.discrete_bloch_transform(f, cell)
        n_in = float(np.vdot(f, f).real)
        n_out = float(np.vdot(blocks, blocks).real)
        worst = max(worst, abs(n_out - n_in) / n_in)
    return {"vectors": vectors, "max_relative_defect": worst,
            "pass": worst <= ORACLE_UNITARITY_TOL}


def _oracle_union(rng, trials: int) -> dict:
    worst = 0.0
    for _ in range(trials):
        q = int(rng.integers(1, 5))
        m = int(rng.integers(1, 13))
        cell = fibering.DiscreteCell(q=q, M=m, onsite=tuple(rng.uniform(-2, 2, q)))
        direct = fibering.periodic_truncation_spectrum(cell)
        union = fibering.fiber_union_spectrum(cell)
        worst = max(worst, float(np.abs(direct - union).max()))
    return {"trials": trials, "max_deviation": worst, "pass": worst <= ORACLE_UNION_TOL}


def _oracle_direct_space(config: RunConfig) -> dict:
    params = harper.HarperParams(flux=parse_flux(config.flux), lam=config.lam,
                                 theta=config.theta)
    bands = harper.harper_spectrum(params, (config.kgrid, config.kgrid))
    bulk, edge = harper.direct_space_bulk(params, config.sites)
    dist = assembly.distance_to_bands(bands, bulk)
    frac = float((dist <= ORACLE_DISTANCE_TOL).mean()) if bulk.size else 0.0
    return {
        "flux": str(params.flux),
        "sites": config.sites,
        "bulk_states": int(bulk.size),
        "edge_states": int(edge.size),
        "max_distance": float(dist.max()) if bulk.size else float("nan"),
        "fraction_within_tol": frac,
        "pass": frac >= ORACLE_BULK_FRACTION,
    }


def _cmd_oracle_check(config: RunConfig):
    rng = np.random.default_rng(config.seed)
    checks = {}
    if config.which in ("all", "unitarity"):
        checks["unitarity"] = _oracle_unitarity(rng, config.vectors)
    if config.which in ("all", "union"):
        checks["union"] = _oracle_union(rng, config.trials)
    if config.which in ("all", "direct-space"):
        checks["direct_space"] = _oracle_direct_space(config)
    payload = {"checks": checks, "pass": all(c["pass"] for c in checks.values())}
    header = ["check", "key", "value"]
    rows = []
    for name, stats in checks.items():
        for k, v in stats.items():
            rows.append([name, k, v])
    rows.append(["overall", "pass", payload["pass"]])
    return payload, header, rows, None


def _cmd_cantor(config: RunConfig):
    fluxes = [parse_flux(t) for t in config.approximants.split(",")]
    try:
        measures = assembly.cantor_proxy(fluxes, config.lam, (config.kgrid, config.kgrid))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "rows": [{"p": f.p, "q": f.q, "flux": f.value, "measure": m} for f, m in measures]
    }
    header = ["i", "p", "q", "measure"]
    rows = [[i, f.p, f.q, m] for i, (f, m) in enumerate(measures)]
    return payload, header, rows, None


_COMMANDS = {
    "bands": _cmd_bands,
    "butterfly": _cmd_butterfly,
    "ids": _cmd_ids,
    "algebra-check": _cmd_algebra_check,
    "oracle-check": _cmd_oracle_check,
    "cantor": _cmd_cantor,
}

_SVG_COMMANDS = {"bands", "butterfly"}


def run(config: RunConfig) -> int:
    """Execute a validated config: compute, then write the report in one shot."""
    if config.command not in _COMMANDS:
        raise UsageError(f"unknown command {config.command!r}")
    if config.fmt == "svg" and config.command not in _SVG_COMMANDS:
        raise UsageError(f"svg output is not defined for {config.command!r}")
    payload, header, rows, svg = _COMMANDS[config.command](config)
    if config.fmt == "json":
        text = render_json(config, payload)
    elif config.fmt == "csv":
        text = render_csv(config, header, rows)
    elif config.fmt == "svg":
        text = svg
    else:
        raise UsageError(f"unknown format {config.fmt!r}")
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.command == "oracle-check" and not payload["pass"]:
        _emit_error("verification", "one or more oracle checks failed")
        return 1
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits; we want the JSON record
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blochspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--format", dest="fmt", default="json",
                       choices=["csv", "json", "svg"], help="output format")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized property checks")

    p = sub.add_parser("bands", help="1d periodic band structure from Fourier coefficients")
    p.add_argument("--potential", required=True,
                   help="Fourier coefficients as n:re[,im] pairs, e.g. '1:1' or '0:0.5,1:1'")
    p.add_argument("--cutoff", type=int, default=fibering.DEFAULT_CUTOFF,
                   help="plane-wave cutoff N")
    p.add_argument("--kpoints", type=int, default=fibering.DEFAULT_KPOINTS)
    p.add_argument("--bands", type=int, default=fibering.DEFAULT_BANDS)
    common(p)

    p = sub.add_parser("butterfly", help="Hofstadter butterfly over all reduced fluxes")
    p.add_argument("--max-q", dest="max_q", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--kgrid", type=int, default=64, help="k-grid points per direction")
    common(p)

    p = sub.add_parser("ids", help="integrated density of states at rational flux")
    p.add_argument("--flux", required=True, help="reduced fraction p/q")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--kgrid", type=int, default=64)
    p.add_argument("--epoints", type=int, default=assembly.IDS_DEFAULT_POINTS)
    common(p)

    p = sub.add_parser("algebra-check", help="clock/shift commutation relation report")
    p.add_argument("--flux", required=True)
    common(p)

    p = sub.add_parser("oracle-check", help="independent verification oracles")
    p.add_argument("--which", default="all",
                   choices=["all", "unitarity", "union", "direct-space"])
    p.add_argument("--flux", default="1/3")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--sites", type=int, default=600)
    p.add_argument("--kgrid", type=int, default=64)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--vectors", type=int, default=100)
    common(p)

    p = sub.add_parser("cantor", help="band measure along rational approximants")
    p.add_argument("--approximants", default=DEFAULT_APPROXIMANTS,
                   help="comma-separated reduced fractions, increasing denominator")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--kgrid", type=int, default=128)
    common(p)

    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    known = {f.name for f in fields(RunConfig)}
    values = {k: v for k, v in vars(ns).items() if k in known}
    return RunConfig(**values)


def _emit_error(kind: str, message: str, **context):
    record = {"schema": SCHEMA, "error": kind, "message": message}
    record.update({k: v for k, v in context.items() if v is not None})
    sys.stderr.write(json.dumps(record) + "\n")


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    try:
        return run(config)
    except EigensolverError as exc:
        _emit_error("numerical", str(exc),
                    flux=str(exc.flux) if exc.flux is not None else None, k=exc.k)
        return 3
    except ValueError as exc:
        _emit_error("usage", str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
