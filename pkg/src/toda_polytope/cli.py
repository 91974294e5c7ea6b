"""``toda-polytope`` command line front end.

All index sets and permutations in the JSON output are 1-based. Floats are
written with 17 significant digits and keys in a fixed order, so identical
invocations give byte-identical output.

Exit codes
----------
0 success; 2 input/parse error; 3 non-symmetric input or degenerate
spectrum; 4 dimension or size problem (including ``render`` with n != 3);
5 inversion failure (target not interior, no convergence); 6 other
numerical failure (rank deficiency, singular input, breakdown).
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import linalg
from .bfr import bfr, forward, invert_bfr
from .builtin import EXAMPLES, example_pair
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NoConvergence,
    NotInterior,
    NotSymmetric,
    TodaPolytopeError,
    TooLarge,
)
from .flow import toda_trajectory
from .linalg import SpectralPair, reconstruct, sym_eig
from .polytope import (
    facets,
    is_spectrally_complete,
    minor_diagnostics,
    non_permutohedral,
    spectral_polytope,
    vertex_diagonal,
)
from .sieve import TIE_TOL, boundary_limit, flow_limit, partition_from_direction, sieve
from .svg import render_svg


class InputError(Exception):
    pass


def dumps(obj, indent=2, _level=0):
    """JSON with ``%.17g`` floats and insertion-ordered keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return format(x + 0.0, ".17g")
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def one_based(idx):
    return [int(i) + 1 for i in idx]


def load_input(args, orth_tol, gap_tol):
    """Return ``(pair, echo)`` from ``--example`` or ``--input``."""
    if args.example:
        if args.example not in EXAMPLES:
            raise InputError(f"unknown example {args.example!r}; choose from {sorted(EXAMPLES)}")
        return example_pair(args.example), {"example": args.example}
    try:
        data = json.loads(Path(args.input).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("input JSON must be an object")
    if "example" in data:
        if data["example"] not in EXAMPLES:
            raise InputError(f"unknown example {data['example']!r}")
        return example_pair(data["example"]), {"example": data["example"]}
    try:
        if "matrix" in data:
            m = np.array(data["matrix"], dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
                raise InputError(f"matrix must be square, got shape {m.shape}")
            return sym_eig(m, gap_tol=gap_tol), {"matrix": m}
        if "lambda" in data and "q" in data:
            lam = np.array(data["lambda"], dtype=float)
            q = np.array(data["q"], dtype=float)
            try:
                pair = SpectralPair(lam, q)
            except DimensionMismatch as exc:
                raise InputError(str(exc)) from exc
            gaps = -np.diff(pair.lam)
            if gaps.size and gaps.min() < gap_tol:
                raise DegenerateSpectrum(f"lambda must be strictly descending with gap >= {gap_tol}")
            try:
                pair.validate(orth_tol=orth_tol, gap_tol=gap_tol)
            except DimensionMismatch as exc:
                raise InputError(str(exc)) from exc
            return pair, {"lambda": lam, "q": q}
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed input: {exc}") from exc
    raise InputError('input must contain "matrix", "lambda" and "q", or "example"')


def _vector(values, n, name):
    if values is None:
        return None
    v = np.array(values, dtype=float)
    if v.size != n:
        raise DimensionMismatch(f"--{name} needs {n} values, got {v.size}")
    return v


def pair_json(pair):
    return {"lambda": pair.lam, "q": pair.q, "matrix": reconstruct(pair), "bfr": bfr(pair)}


def run_analyze(pair, echo, tol):
    poly = spectral_polytope(pair, rank_tol=tol.rank)
    complete = is_spectrally_complete(pair.q, rank_tol=tol.rank)
    facet_keys = {h.i_set for h in facets(poly)}
    tight = {h.i_set for h in non_permutohedral(poly)}
    return {
        "command": "analyze",
        "input": echo,
        "n": pair.n,
        "spectrum": pair.lam,
        "q": pair.q,
        "matrix": reconstruct(pair),
        "bfr": bfr(pair),
        "accessible_count": len(poly.accessible_perms),
        "accessible_permutations": [one_based(pi) for pi in poly.accessible_perms],
        "accessible_vertex_diagonals": [vertex_diagonal(pi, pair.lam) for pi in poly.accessible_perms],
        "spectrally_complete": complete,
        "polytope": {
            "trace": poly.trace,
            "vertices": poly.extremal_vertices,
            "halfspaces": [
                {
                    "I": one_based(h.i_set),
                    "J": one_based(h.j_set),
                    "bound": h.bound,
                    "facet": h.i_set in facet_keys,
                    "permutohedral": h.i_set not in tight,
                }
                for h in poly.halfspaces
            ],
        },
        "minors": [
            {"rows": one_based(rows), "cols": list(range(1, len(rows) + 1)), "abs_det": det, "status": st}
            for rows, det, st in minor_diagnostics(pair.q, rank_tol=tol.rank)
        ],
    }


def run_flow(pair, echo, tau, samples):
    traj = toda_trajectory(pair, tau, samples)
    return {
        "command": "flow",
        "input": echo,
        "tau": tau,
        "samples": [
            {"t": pt.t, "q": pt.pair.q, "matrix": reconstruct(pt.pair), "bfr": pt.x} for pt in traj
        ],
    }


def run_limit(pair, echo, sigma, weights, tol):
    part = partition_from_direction(sigma, tol.tie)
    report = {
        "command": "limit",
        "input": echo,
        "sigma": sigma,
        "weights": weights if weights is not None else np.ones(pair.n),
        "i_partition": [one_based(b) for b in part.blocks],
        "proper": part.is_proper,
    }
    if part.is_proper:
        dec = sieve(pair.q, part, tol.rank)
        limit = boundary_limit(pair, part, weights, tol.rank)
        report["j_partition"] = [one_based(b) for b in dec.j_partition.blocks]
    else:
        limit = flow_limit(pair, sigma, weights, tol.tie, tol.rank)
        report["j_partition"] = [list(range(1, pair.n + 1))]
    report["limit"] = pair_json(limit)
    return report


def run_invert(pair, echo, target, tol):
    res = invert_bfr(pair, target, tol=tol.newton, max_iter=tol.max_iter, full_output=True)
    check = forward(pair, res.tau)
    return {
        "command": "invert",
        "input": echo,
        "target": target,
        "tau": res.tau,
        "residual": res.residual,
        "iterations": res.iterations,
        "forward": check,
    }


def run_render(pair, tol, out_path, tau=None, samples=None, title=None):
    if pair.n != 3:
        raise DimensionMismatch(f"render needs n = 3, got n = {pair.n}")
    poly = spectral_polytope(pair, rank_tol=tol.rank)
    trajs = []
    if tau is not None:
        ts = samples if samples is not None else np.linspace(-6.0, 6.0, 121)
        trajs.append([pt.x for pt in toda_trajectory(pair, tau, ts)])
    svg = render_svg(poly, trajs, title=title)
    Path(out_path).write_text(svg)
    return svg


def build_parser():
    ap = argparse.ArgumentParser(prog="toda-polytope", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--example", help=f"built-in example: {', '.join(sorted(EXAMPLES))}")
        src.add_argument("--input", help="JSON file with matrix, lambda+q, or example")
        p.add_argument("--tol-rank", type=float, default=linalg.RANK_TOL)
        p.add_argument("--tol-gap", type=float, default=linalg.GAP_TOL)
        p.add_argument("--tol-orth", type=float, default=linalg.ORTH_TOL)
        p.add_argument("--tol-tie", type=float, default=TIE_TOL)
        p.add_argument("--tol-newton", type=float, default=1e-11)
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("-o", "--output", help="write output here instead of stdout")
        return p

    common(sub.add_parser("analyze", help="accessible vertices and spectral polytope"))
    p = common(sub.add_parser("flow", help="Toda trajectory t -> toda_action(S, t * tau)"))
    p.add_argument("--tau", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=float, nargs="+", default=[1.0])
    p = common(sub.add_parser("limit", help="boundary limit along exp(t * sigma)"))
    p.add_argument("--sigma", type=float, nargs="+", required=True)
    p.add_argument("--weights", type=float, nargs="+")
    p = common(sub.add_parser("invert", help="Toda time reaching a BFR target"))
    p.add_argument("--target", type=float, nargs="+", required=True)
    p = common(sub.add_parser("render", help="SVG of a 3x3 slice image"))
    p.add_argument("--tau", type=float, nargs="+", help="optional trajectory direction")
    p.add_argument("--samples", type=float, nargs="+")
    p.add_argument("--title")
    return ap


class _Tol:
    def __init__(self, args):
        self.rank = args.tol_rank
        self.gap = args.tol_gap
        self.orth = args.tol_orth
        self.tie = args.tol_tie
        self.newton = args.tol_newton
        self.max_iter = args.max_iter


def _fail(code, exc):
    print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
    return code


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    tol = _Tol(args)
    try:
        pair, echo = load_input(args, tol.orth, tol.gap)
        n = pair.n
        if args.command == "analyze":
            report = run_analyze(pair, echo, tol)
        elif args.command == "flow":
            report = run_flow(pair, echo, _vector(args.tau, n, "tau"), args.samples)
        elif args.command == "limit":
            report = run_limit(
                pair, echo, _vector(args.sigma, n, "sigma"), _vector(args.weights, n, "weights"), tol
            )
        elif args.command == "invert":
            report = run_invert(pair, echo, _vector(args.target, n, "target"), tol)
        else:
            if not args.output:
                raise InputError("render needs -o/--output")
            tau = _vector(args.tau, n, "tau") if args.tau else None
            run_render(pair, tol, args.output, tau, args.samples, args.title)
            return 0
    except InputError as exc:
        return _fail(2, exc)
    except (DegenerateSpectrum, NotSymmetric) as exc:
        return _fail(3, exc)
    except (DimensionMismatch, TooLarge) as exc:
        return _fail(4, exc)
    except (NotInterior, NoConvergence) as exc:
        return _fail(5, exc)
    except (TodaPolytopeError, ValueError) as exc:
        return _fail(6, exc)

    text = dumps(report) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
