"""Command-line interface.

Subcommands map one-to-one onto the artifacts of the analysis:

  characteristics — the per-distribution headline numbers (kappa,
                    theta_0, scaled sigma_m, exp(pi^2/ln E))
  exact           — phi_n table by the coefficient recurrence
  approx          — one approximation variant on an n-grid
  compare         — exact values, approximants and differences side by
                    side (the data behind difference plots)
  spectrum        — the Fourier data as JSON
  julia           — escape-time grid for the offspring polynomial

Every CSV starts with a `# {json}` provenance comment carrying the
distribution's derived constants, the full parameter set, and spectrum
convergence flags; float cells use 17 significant digits so identical
configurations produce byte-identical files. JSON output wraps the same
provenance as {"meta": ..., "data": ...}.

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, approx, exact, fourier, pgf as pgf_mod
from .dynamics import IterationConfig
from .errors import BranchingError, InvalidDistribution, DegenerateDegree
from .pgf import OffspringPGF, build_pgf

_INPUT_ERRORS = (InvalidDistribution, DegenerateDegree, ValueError)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def parse_pgf_spec(text: str) -> OffspringPGF:
    """Accept '0.2,0.6,0.2' or a JSON array '[0.2,0.6,0.2]'."""
    text = text.strip()
    if text.startswith("["):
        probs = json.loads(text)
    else:
        probs = [float(tok) for tok in text.split(",") if tok.strip()]
    return build_pgf(probs)


def _meta(args, pgf: OffspringPGF, command: str, params: dict, spectrum=None) -> dict:
    meta = {
        "tool": "gwdensity",
        "version": __version__,
        "command": command,
        "params": params,
        "pgf": pgf_mod.to_metadata(pgf),
        "approx_reliable": not pgf.lattice,
    }
    if spectrum is not None:
        meta["spectrum"] = spectrum.to_metadata()
    return meta


def _write_output(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(meta: dict, header: list[str], rows) -> str:
    lines = ["# " + json.dumps(meta, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _json_doc(meta: dict, data) -> str:
    return json.dumps({"meta": meta, "data": data}, sort_keys=True, indent=2) + "\n"


def _iteration_config(args) -> IterationConfig:
    return IterationConfig(tol=args.tol, max_iter=args.max_iter)


def _spectrum(args, pgf: OffspringPGF, m_max: int):
    return fourier.compute_spectrum(
        pgf,
        m_max,
        shift_fraction=args.shift_fraction,
        cfg=_iteration_config(args),
        sample_budget=args.samples,
    )


def cmd_characteristics(args) -> None:
    p = parse_pgf_spec(args.pgf)
    spec = _spectrum(args, p, args.m_max)
    exp_pi2 = float(np.exp(np.pi**2 / p.log_mean))
    params = {
        "m_max": args.m_max,
        "shift_fraction": args.shift_fraction,
        "samples": args.samples,
        "seed": args.seed,
    }
    meta = _meta(args, p, "characteristics", params, spectrum=spec)
    if args.format == "json":
        data = {
            "kappa": p.kappa,
            "theta0": spec.theta0,
            "sigma": [
                {"m": m, "re": s.real, "im": s.imag}
                for m, s in enumerate(spec.scaled, start=1)
            ],
            "exp_pi2_over_log_mean": exp_pi2,
        }
        _write_output(args, _json_doc(meta, data))
    else:
        rows = [
            ["kappa", _fmt(p.kappa), _fmt(0.0)],
            ["theta0", _fmt(spec.theta0), _fmt(0.0)],
        ]
        for m, s in enumerate(spec.scaled, start=1):
            rows.append([f"sigma_{m}", _fmt(s.real), _fmt(s.imag)])
        rows.append(["exp_pi2_over_log_mean", _fmt(exp_pi2), _fmt(0.0)])
        _write_output(args, _csv(meta, ["quantity", "re", "im"], rows))


def cmd_exact(args) -> None:
    p = parse_pgf_spec(args.pgf)
    table = exact.exact_coeffs(p, args.n_max)
    params = {"n_max": args.n_max, "seed": args.seed}
    meta = _meta(args, p, "exact", params)
    meta["method"] = table.method
    if args.format == "json":
        data = [{"n": n, "phi": float(v)} for n, v in enumerate(table.values, start=1)]
        _write_output(args, _json_doc(meta, data))
    else:
        rows = ([str(n), _fmt(v)] for n, v in enumerate(table.values, start=1))
        _write_output(args, _csv(meta, ["n", "phi_n"], rows))


_APPROX_DISPATCH = {
    "plain": lambda spec, p, M, ns: approx.approx_plain(spec, p, M, ns),
    "corrected": lambda spec, p, M, ns: approx.approx_corrected(spec, p, M, ns),
    "gamma_plain": lambda spec, p, M, ns: approx.approx_gamma(spec, p, M, ns, corrected=False),
    "gamma_corrected": lambda spec, p, M, ns: approx.approx_gamma(spec, p, M, ns, corrected=True),
    "asymptotic": lambda spec, p, M, ns: approx.approx_asymptotic(spec, p, M, ns),
}


def cmd_approx(args) -> None:
    p = parse_pgf_spec(args.pgf)
    m_values = _parse_int_list(args.M)
    if len(m_values) != 1:
        raise ValueError("approx takes a single --M value; use compare for sweeps")
    m_trunc = m_values[0]
    spec = _spectrum(args, p, max(m_trunc, args.m_max))
    ns = list(range(1, args.n_max + 1))
    result = _APPROX_DISPATCH[args.variant](spec, p, m_trunc, ns)
    params = {
        "n_max": args.n_max,
        "M": m_trunc,
        "variant": args.variant,
        "m_max": spec.m_max,
        "shift_fraction": args.shift_fraction,
        "samples": args.samples,
        "seed": args.seed,
    }
    meta = _meta(args, p, "approx", params, spectrum=spec)
    if args.format == "json":
        data = [{"n": n, "value": float(v)} for n, v in zip(result.n_values, result.values)]
        _write_output(args, _json_doc(meta, data))
    else:
        rows = ([str(n), _fmt(v)] for n, v in zip(result.n_values, result.values))
        _write_output(args, _csv(meta, ["n", "value"], rows))


def cmd_compare(args) -> None:
    p = parse_pgf_spec(args.pgf)
    m_values = _parse_int_list(args.M)
    variants = [v.strip() for v in args.variant.split(",") if v.strip()]
    for v in variants:
        if v not in _APPROX_DISPATCH:
            raise ValueError(f"unknown variant {v!r}")
    table = exact.exact_coeffs(p, args.n_max)
    spec = _spectrum(args, p, max([*m_values, args.m_max]))
    ns = list(range(1, args.n_max + 1))
    columns = {}
    for variant in variants:
        for m_trunc in m_values:
            res = _APPROX_DISPATCH[variant](spec, p, m_trunc, ns)
            columns[f"{variant}_M{m_trunc}"] = res.values
    params = {
        "n_max": args.n_max,
        "M": m_values,
        "variants": variants,
        "m_max": spec.m_max,
        "shift_fraction": args.shift_fraction,
        "samples": args.samples,
        "seed": args.seed,
    }
    meta = _meta(args, p, "compare", params, spectrum=spec)
    names = list(columns)
    header = ["n", "phi_exact", *names, *(f"diff_{c}" for c in names)]
    if args.format == "json":
        data = []
        for i, n in enumerate(ns):
            entry = {"n": n, "phi_exact": float(table.values[i])}
            for c in names:
                entry[c] = float(columns[c][i])
                entry[f"diff_{c}"] = float(columns[c][i] - table.values[i])
            data.append(entry)
        _write_output(args, _json_doc(meta, data))
    else:
        rows = []
        for i, n in enumerate(ns):
            row = [str(n), _fmt(table.values[i])]
            row += [_fmt(columns[c][i]) for c in names]
            row += [_fmt(columns[c][i] - table.values[i]) for c in names]
            rows.append(row)
        _write_output(args, _csv(meta, header, rows))


def cmd_spectrum(args) -> None:
    p = parse_pgf_spec(args.pgf)
    spec = _spectrum(args, p, args.m_max)
    params = {
        "m_max": args.m_max,
        "shift_fraction": args.shift_fraction,
        "samples": args.samples,
        "seed": args.seed,
    }
    meta = _meta(args, p, "spectrum", params)
    if args.format == "csv":
        rows = [["0", _fmt(spec.theta0), _fmt(0.0)]]
        for m, s in enumerate(spec.scaled, start=1):
            rows.append([str(m), _fmt(s.real), _fmt(s.imag)])
        meta["spectrum"] = spec.to_metadata()
        _write_output(args, _csv(meta, ["m", "re", "im"], rows))
    else:
        _write_output(args, _json_doc(meta, spec.to_metadata()))


def cmd_julia(args) -> None:
    p = parse_pgf_spec(args.pgf)
    xmin, xmax, ymin, ymax = (float(t) for t in args.bounds.split(","))
    res = args.resolution
    xs = np.linspace(xmin, xmax, res)
    ys = np.linspace(ymin, ymax, res)
    w = xs[np.newaxis, :] + 1j * ys[:, np.newaxis]
    steps = np.zeros(w.shape, dtype=int)  # >0 escaped, <0 interior, 0 undecided
    active = np.ones(w.shape, dtype=bool)
    coeffs = list(p.coeffs)
    for t in range(1, args.max_iter + 1):
        acc = np.zeros_like(w)
        for c in reversed(coeffs):
            acc = acc * w + c
        w = acc * w
        mag = np.abs(w)
        escaped = active & (mag > args.escape_radius)
        settled = active & (mag < args.inner_radius)
        steps[escaped] = t
        steps[settled] = -t
        active &= ~(escaped | settled)
        w[~active] = 0.0  # park finished points so later iterations cannot overflow
        if not active.any():
            break
    params = {
        "bounds": [xmin, xmax, ymin, ymax],
        "resolution": res,
        "max_iter": args.max_iter,
        "escape_radius": args.escape_radius,
        "inner_radius": args.inner_radius,
        "seed": args.seed,
    }
    meta = _meta(args, p, "julia", params)
    meta["legend"] = "steps>0 escape time, steps<0 basin entry time, 0 undecided"
    if args.format == "pgm":
        # grayscale: escape time scaled to 1..255, interior/undecided black
        img = np.zeros(steps.shape, dtype=int)
        esc = steps > 0
        if esc.any():
            img[esc] = 1 + (254 * (args.max_iter - steps[esc])) // args.max_iter
        lines = ["P2", f"# {json.dumps(meta, sort_keys=True)}", f"{res} {res}", "255"]
        lines += [" ".join(str(v) for v in row) for row in img]
        _write_output(args, "\n".join(lines) + "\n")
    else:
        rows = []
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                rows.append([_fmt(x), _fmt(y), str(steps[iy, ix])])
        _write_output(args, _csv(meta, ["x", "y", "steps"], rows))


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pgf", required=True,
                        help="offspring probabilities p1..pN: '0.2,0.6,0.2' or JSON array")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0,
                        help="recorded in provenance; commands are deterministic")

    iteration = argparse.ArgumentParser(add_help=False)
    iteration.add_argument("--tol", type=float, default=1e-13,
                           help="iteration stopping tolerance")
    iteration.add_argument("--max-iter", type=int, default=10_000,
                           help="iteration budget for the conjugacy evaluations")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--m-max", type=int, default=2,
                          help="number of Fourier coefficients to extract")
    sampling.add_argument("--shift-fraction", type=float,
                          default=fourier.DEFAULT_SHIFT_FRACTION,
                          help="fraction of the nominal line offset pi/(2 ln E)")
    sampling.add_argument("--samples", type=int, default=fourier.DEFAULT_SAMPLE_BUDGET,
                          help="per-line sample budget for the spectral quadrature")

    parser = argparse.ArgumentParser(
        prog="gwdensity",
        description="Descendant-count limit densities of Galton-Watson processes: "
                    "exact recurrence and spectral approximations.",
    )
    parser.add_argument("--version", action="version", version=f"gwdensity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("characteristics", parents=[common, iteration, sampling],
                        help="headline constants of one distribution")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_characteristics)

    sp = sub.add_parser("exact", parents=[common],
                        help="exact phi_n table by the coefficient recurrence")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("approx", parents=[common, iteration, sampling],
                        help="one approximation variant over n = 1..n_max")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--M", default="2", help="mode truncation (single integer)")
    sp.add_argument("--variant", choices=sorted(_APPROX_DISPATCH), default="corrected")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("compare", parents=[common, iteration, sampling],
                        help="exact vs approximations with difference columns")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--M", default="0,1,2", help="comma-separated mode truncations")
    sp.add_argument("--variant", default="corrected",
                    help="comma-separated variants "
                         f"({', '.join(sorted(_APPROX_DISPATCH))})")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("spectrum", parents=[common, iteration, sampling],
                        help="Fourier data of K* as JSON (or CSV rows)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("julia", parents=[common],
                        help="escape-time grid of the offspring polynomial")
    sp.add_argument("--bounds", default="-2,2,-2,2",
                    help="xmin,xmax,ymin,ymax of the sampling window")
    sp.add_argument("--resolution", type=int, default=256, help="grid points per axis")
    sp.add_argument("--max-iter", dest="max_iter", type=int, default=100)
    sp.add_argument("--escape-radius", type=float, default=1e3)
    sp.add_argument("--inner-radius", type=float, default=1e-3)
    sp.add_argument("--format", choices=["csv", "pgm"], default="csv")
    sp.set_defaults(func=cmd_julia)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except BranchingError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
