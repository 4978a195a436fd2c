"""Command-line front end.

Every command reads JSON inputs (see :mod:`symsector.io`) and writes a
report. Exit status is 0 on success, 2 on validation or I/O errors (an
error object goes to stderr) and 3 when a sequence analysis stops on
conditioning.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, io
from .errors import NotSymplectic, SymsectorError
from .expansion import mc_inf_beta, sigma
from .lagrangian import distance, mobius
from .linalg import DEF_TOL
from .monotone import canonical_form, factor_qpr, monotonicity_class
from .sequences import (
    MapSequence,
    analyze_sequence,
    build_example69,
    check_criterion69,
)
from .symplectic import is_symplectic

EXIT_OK, EXIT_INVALID, EXIT_CONDITIONING = 0, 2, 3
COMMANDS = ("check", "factor", "canon", "sigma", "dist", "mobius", "analyze", "gen69", "oracle")


class ConditioningStop(Exception):
    def __init__(self, report: dict):
        self.report = report


def _def_obj(cls) -> dict:
    return {"class": cls.cls.value, "min_eig": cls.min_eig, "max_eig": cls.max_eig}


def _single_map(args):
    return io.read_map(io.load(args.input[0]))


def cmd_check(args) -> dict:
    L = _single_map(args)
    symp = is_symplectic(L)
    return {
        "symplectic": symp,
        "class": monotonicity_class(L, args.tol).label if symp else None,
    }


def cmd_factor(args) -> dict:
    f = factor_qpr(_single_map(args), args.tol)
    return {
        "A": f.a,
        "P": f.p,
        "R": f.r,
        "P_definiteness": _def_obj(f.p_class),
        "R_definiteness": _def_obj(f.r_class),
        "cond_A": f.cond_a,
    }


def cmd_canon(args) -> dict:
    cf = canonical_form(_single_map(args), args.tol)
    return {
        "t": cf.t,
        "left_iso": io.matrix_obj(cf.left_iso.full),
        "right_iso": io.matrix_obj(cf.right_iso.full),
        "core": io.matrix_obj(cf.core.full),
    }


def _oracle_band(L, args, sig: float) -> dict:
    est = mc_inf_beta(L, samples=args.samples, seed=args.seed, tol=args.tol)
    return {
        "mc_inf_beta": est,
        "samples": args.samples,
        "seed": args.seed,
        "band": [sig, 1.01 * sig],
        "within_band": bool(sig - 1e-9 <= est <= 1.01 * sig),
    }


def cmd_sigma(args) -> dict:
    L = _single_map(args)
    res = sigma(L, args.tol)
    out = {"t1": res.t1, "sigma": res.sigma, "witness": res.witness}
    if args.samples:
        out["oracle"] = _oracle_band(L, args, res.sigma)
    return out


def cmd_oracle(args) -> dict:
    L = _single_map(args)
    args.samples = args.samples or 100_000
    res = sigma(L, args.tol)
    return {"sigma": res.sigma, **_oracle_band(L, args, res.sigma)}


def cmd_dist(args) -> dict:
    subs = []
    for path in args.input:
        subs.extend(io.read_subspaces(io.load(path)))
    n = len(subs)
    table = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            table[i, j] = table[j, i] = distance(subs[i], subs[j], args.tol)
    return {"distances": table}


def cmd_mobius(args) -> dict:
    if len(args.input) < 2:
        raise io.SchemaError("mobius needs a map and a subspace list (--input twice)")
    L = _single_map(args)
    subs = io.read_subspaces(io.load(args.input[1]))
    return io.subspaces_obj([mobius(L, e) for e in subs])


def _probes(args, d: int) -> list[np.ndarray]:
    if args.probe:
        probes = [np.array([float(x) for x in p.split(",")]) for p in args.probe]
        for p in probes:
            if p.size != 2 * d:
                raise io.SchemaError(f"probe {p.tolist()} does not have length {2 * d}")
        return probes
    eye = np.eye(d)
    return [np.concatenate([eye[i], eye[i]]) for i in range(d)]


def cmd_analyze(args) -> dict:
    seq = io.read_sequence(io.load(args.input[0]))
    if len(seq) == 1:
        seq = MapSequence.constant(seq.maps[0], args.n_max)
    probes = _probes(args, seq.maps[0].dim)
    rep = analyze_sequence(seq, args.n_max, probes, tol=args.tol)
    rows = []
    for s in rep.steps:
        row = {"n": s.n, "sigma_n": s.sigma, "t1_n": s.t1, "diameter_n": s.diameter}
        row.update({f"q_{k}": v for k, v in s.q.items()})
        rows.append(row)
    out = {
        "steps": rows,
        "images": [
            {"n": s.n, "image_v1": s.image_v1.graph(), "image_v2": s.image_v2.basis()} for s in rep.steps
        ],
        "flags": {
            "strict_at_step": rep.strict_at_step,
            "certified_growth": rep.certified_growth,
            "verdict": rep.verdict,
            "growth_threshold": rep.growth_threshold,
            "limit_estimate": None if rep.limit_estimate is None else rep.limit_estimate.graph(),
            "limit_diameter_bound": rep.limit_diameter_bound,
            "conditioning_stop": rep.conditioning_stop,
        },
    }
    if rep.conditioning_stop is not None:
        raise ConditioningStop(out)
    return out


def cmd_gen69(args) -> dict:
    spec = io.read_example69(io.load(args.input[0]))
    seq = build_example69(spec, args.tol)
    horizon = min(args.n_max, len(spec)) if args.n_max else len(spec)
    probe = _probes(args, spec.dim)[0]
    rep = check_criterion69(spec, horizon, probe, tol=args.tol)
    out = io.sequence_obj(seq)
    out["criterion"] = {
        "horizon": horizon,
        "probe": probe,
        "series_partial": rep.series_partial,
        "verdict": rep.verdict,
        "certified_at": rep.certified_at,
        "nondecreasing": rep.nondecreasing,
        "ratio_bound_holds": rep.ratio_bound_holds,
        "prefix_ratio_sum": rep.prefix_ratio_sum,
        "q_trajectory": rep.q_trajectory,
    }
    return out


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def to_csv(command: str, report: dict) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    fmt = io._fmt_float
    if command == "analyze":
        rows = report["steps"]
        header = list(rows[0]) if rows else ["n", "sigma_n", "t1_n", "diameter_n"]
        writer.writerow(header)
        for r in rows:
            writer.writerow([r[h] if h == "n" else fmt(r[h]) for h in header])
    elif command == "gen69":
        writer.writerow(["n", "q"])
        for n, q in enumerate(report["criterion"]["q_trajectory"], start=1):
            writer.writerow([n, fmt(float(q))])
    else:
        writer.writerow(["key", "value"])
        for k, v in report.items():
            if isinstance(v, (float, int, np.floating)) and not isinstance(v, bool):
                writer.writerow([k, fmt(float(v))])
            elif isinstance(v, (str, bool)) or v is None:
                writer.writerow([k, v])
            else:
                writer.writerow([k, io.dumps(v, indent=0).replace("\n", "")])
    return buf.getvalue().rstrip("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symsector", description="Sector calculus for linear symplectic maps."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", action="append", required=True, help="input JSON (repeatable)")
    parser.add_argument("--output", "-o", help="report path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n-max", type=int, default=20)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--tol", type=float, default=DEF_TOL)
    parser.add_argument("--probe", action="append", help="comma-separated phase vector (repeatable)")
    parser.add_argument("--no-timestamp", action="store_true")
    return parser


def _emit(args, report: dict) -> None:
    if args.format == "csv":
        text = to_csv(args.command, report)
    else:
        body = {"command": args.command}
        if not args.no_timestamp:
            body["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        body.update(report)
        text = io.dumps(body)
    io.write_text(text, args.output)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = HANDLERS[args.command](args)
    except ConditioningStop as stop:
        _emit(args, stop.report)
        return EXIT_CONDITIONING
    except (SymsectorError, NotSymplectic, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_INVALID
    _emit(args, report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
