"""Command-line front end.

::

    gsd decompose w3 0.5 0.5 0.5 0.5
    gsd decompose --state psi.json --json --verify-oracle
    gsd classify ghz-ext 0.7071 0 0 0.7071
    gsd enumerate w3 0.6 0.5 0.4 0.3
    gsd sweep w3 --grid 10 --out sweep.csv

Exit codes: 0 success, 2 bad input, 3 solver failure.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from .exceptions import GSDError, SolverDiverged
from .families import W3Params, w3_classify, w3_coefficients, w3_stationary_solutions
from .decomposition import build_gsd
from .report import analyze, family_params
from .serialize import fmt, state_from_dict
from .solver import SolverConfig, enumerate_stationary

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVER = 3

FAMILIES = ("w3", "wn", "ghz-ext")
SWEEP_COLUMNS = ("a", "b", "c", "d", "g", "t1", "t2", "t3", "h", "phi", "region")
SWEEP_VERSION = 1


class InputError(Exception):
    pass


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GSD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"GSD_SEED must be an integer, got {env!r}") from exc
    return 0


def _config(args):
    kwargs = {"restarts": args.restarts, "rng_seed": _seed(args)}
    if args.tol is not None:
        kwargs["residual_tol"] = args.tol
    try:
        return SolverConfig(**kwargs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_target(args):
    """Return ``(state, params, source)`` from ``--state`` or a family spec."""
    if args.state:
        if args.target:
            raise InputError("give either --state or a family, not both")
        try:
            with open(args.state) as fh:
                data = json.load(fh)
            return state_from_dict(data), None, "state"
        except (OSError, json.JSONDecodeError, ValueError, GSDError) as exc:
            raise InputError(f"cannot read state from {args.state}: {exc}") from exc
    if not args.target:
        raise InputError("missing input: pass --state FILE or a family (w3, wn, ghz-ext) with parameters")
    family, *rest = args.target
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    try:
        params = family_params(family, [float(x) for x in rest])
    except (ValueError, GSDError) as exc:
        raise InputError(str(exc)) from exc
    return params.state(), params, family


def _emit(text, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_decompose(args):
    state, params, source = _load_target(args)
    rep = analyze(
        state,
        params=params,
        source=source,
        numeric=args.numeric,
        cfg=_config(args),
        verify_oracle=args.verify_oracle,
    )
    _emit(json.dumps(rep.to_dict(), indent=2) if args.json else rep.to_text(), args)


def cmd_classify(args):
    state, params, source = _load_target(args)
    rep = analyze(
        state,
        params=params,
        source=source,
        numeric=args.numeric,
        cfg=_config(args),
        verify_oracle=args.verify_oracle,
    )
    d = rep.decomposition
    out = {
        "classification": rep.classification,
        "g": fmt(d.g),
        "h": fmt(d.h),
        "teleportation_applicable": rep.teleportation_applicable,
        "teleportation_receivers": rep.teleportation_receivers,
    }
    if rep.oracle_g is not None:
        out["oracle_g"] = fmt(rep.oracle_g)
    if args.json:
        _emit(json.dumps(out, indent=2), args)
    else:
        lines = [f"region: {rep.classification['label']}"]
        if "highly_entangled_region" in rep.classification:
            lines.append(f"highly_entangled_region: {rep.classification['highly_entangled_region']}")
        lines += [f"g: {d.g:.12g}", f"h: {d.h:.12g}"]
        lines.append(f"teleportation_applicable: {rep.teleportation_applicable}")
        if rep.oracle_g is not None:
            lines.append(f"oracle_g: {rep.oracle_g:.12g}")
        _emit("\n".join(lines), args)


def _pair_dict(pair):
    return {
        "g": fmt(pair.g),
        "residual": fmt(pair.residual),
        "factors": [[[fmt(z.real), fmt(z.imag)] for z in v] for v in pair.product.factors],
        **{k: v for k, v in pair.info.items() if k in ("restart", "solution")},
    }


def cmd_enumerate(args):
    state, params, _ = _load_target(args)
    pairs = enumerate_stationary(state, _config(args))
    out = {"numeric": [_pair_dict(p) for p in pairs]}
    if isinstance(params, W3Params):
        sols, omitted = w3_stationary_solutions(params, return_omitted=True)
        out["analytic"] = [_pair_dict(p) for p in sols]
        out["analytic_omitted"] = {str(k): v for k, v in omitted.items()}
    if args.json:
        _emit(json.dumps(out, indent=2), args)
        return
    lines = [f"{len(pairs)} stationary point(s) found numerically"]
    lines += [f"  g={p.g:.12g} residual={p.residual:.3g}" for p in pairs]
    if "analytic" in out:
        lines.append("analytic solutions:")
        lines += [f"  #{p.info['solution']} g={p.g:.12g}" for p in sols]
        lines += [f"  #{k} omitted: {why}" for k, why in omitted.items()]
    _emit("\n".join(lines), args)


def sweep_points(grid):
    """Normalized ``(a, b, c, d)`` over the product grid ``linspace(0, 1, grid)**4`` minus the origin."""
    axis = np.linspace(0.0, 1.0, grid)
    pts = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 4)
    pts = pts[np.linalg.norm(pts, axis=1) > 0]
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def cmd_sweep(args):
    if args.family != "w3":
        raise InputError("sweep supports the w3 family only")
    if args.grid < 2:
        raise InputError("--grid must be >= 2")
    cfg = _config(args)
    buf = io.StringIO()
    buf.write(f"# gsd-sweep v{SWEEP_VERSION} columns: {','.join(SWEEP_COLUMNS)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for pt in sweep_points(args.grid):
        params = W3Params(*(float(x) for x in pt))
        region = w3_classify(params).label.value
        if args.numeric:
            d = build_gsd(params.state(), cfg)
            g, t, h, phi = d.g, d.t, d.h, d.phi
        else:
            c = w3_coefficients(params)
            g, t, h, phi = c.g, c.t, c.h, c.phi
        writer.writerow([f"{x:.12g}" for x in (*pt, g, *t, h, phi)] + [region])
    _emit(buf.getvalue(), args)


def _common(parser):
    parser.add_argument("--restarts", type=int, default=64, help="solver restarts (default 64)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $GSD_SEED, then 0)")
    parser.add_argument("--tol", type=float, default=None, help="solver residual tolerance (default 1e-10)")
    parser.add_argument("--verify-oracle", action="store_true", help="append a brute-force check of g")
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    parser.add_argument("--numeric", action="store_true", help="use the solver even for named families")


def build_parser():
    parser = argparse.ArgumentParser(prog="gsd", description="Generalized Schmidt decomposition of multi-qubit states")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_ in (
        ("decompose", cmd_decompose, "full decomposition report"),
        ("classify", cmd_classify, "region and teleportation predicates"),
        ("enumerate", cmd_enumerate, "list stationary product states"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--state", metavar="FILE", help='JSON state {"n": int, "amps": [[re, im], ...]}')
        p.add_argument("target", nargs="*", help="family and parameters, e.g. w3 a b c d | wn n a [b] | ghz-ext a b c d")
        _common(p)
        p.set_defaults(func=func)
    p = sub.add_parser("sweep", help="CSV sweep over a W3 parameter grid")
    p.add_argument("family", choices=["w3"])
    p.add_argument("--grid", type=int, default=10, help="grid points per parameter")
    _common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverDiverged as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
