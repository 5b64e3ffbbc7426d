"""``designmoments`` command line: design certificates, moments, criteria and
the data behind the standard plots, written as CSV or JSON.

Exit codes: 0 success, 2 invalid input, 3 a design failed certification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import core, figures
from .criteria import (
    bell_diagonal_separability,
    pure_bisep_fourth_moment_bound,
    three_qubit_bisep_conjecture,
    w_class_linear,
    w_class_r2_bound,
)
from .designs import (
    BUILTIN_SPHERICAL,
    CERT_TOL,
    CertificationError,
    UnitaryDesign,
    builtin_spherical,
    catalan,
    load_design,
    regular_snub_cube,
    resolve_spherical,
    smallest_design,
    unitary_design,
    verify_spherical,
)
from .moments import moment_design, moment_monte_carlo

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3

DEFAULT_VERIFY = BUILTIN_SPHERICAL + ("snub_cube", "clifford", "sl2f5")
STATE_KINDS = ("product", "ghz", "w", "bell", "bell_diagonal", "noisy_ghz", "werner", "mixed", "w_marginal")


# ------------------------------------------------------------------ output


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (dict, list)):
        return json.dumps(_json_safe(value), sort_keys=True)
    return str(value)


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_json_safe(rows), indent=1) + "\n"
    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def emit(rows: list[dict], args) -> None:
    text = render(rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ inputs


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _complex_array(raw) -> np.ndarray:
    arr = np.asarray(raw, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_state(path: str):
    """State from JSON ``{"amplitudes": [[re, im], ...]}`` or ``{"matrix": [[[re, im], ...], ...]}``."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "amplitudes" in data:
        return core.PureState(_complex_array(data["amplitudes"]))
    if "matrix" in data:
        return core.DensityMatrix(_complex_array(data["matrix"]))
    raise ValueError("state file needs an 'amplitudes' or 'matrix' entry")


def build_state(args):
    if args.state_file:
        return load_state(args.state_file)
    kind = args.state
    if kind == "w_marginal":
        return figures.histogram_state("w_marginal")
    if kind in ("bell", "bell_diagonal", "werner"):
        n = 2
    else:
        n = args.n
    if kind == "bell_diagonal":
        if args.c is None:
            raise ValueError("bell_diagonal needs --c CX CY CZ")
        return core.standard_state(kind, n, c=args.c)
    if kind == "noisy_ghz":
        return core.standard_state(kind, n, p=args.p)
    if kind == "werner":
        return core.standard_state(kind, n, q=args.q)
    return core.standard_state(kind, n)


# ------------------------------------------------------------------ subcommands


def _verify_target(name: str):
    if name in BUILTIN_SPHERICAL:
        return builtin_spherical(name)
    if name == "snub_cube":
        return regular_snub_cube()
    if name in ("clifford", "sl2f5"):
        return unitary_design(name)
    return load_design(name)


def verify_rows(design, t_max: int) -> list[dict]:
    rows = []
    for t in range(1, t_max + 1):
        if isinstance(design, UnitaryDesign):
            kind, target = "unitary", float(catalan(t))
            value = design.frame_potential(t)
        else:
            kind, target = "spherical", 0.0
            value = verify_spherical(design.points, t)
        residual = abs(value - target)
        rows.append({
            "design": design.name,
            "kind": kind,
            "size": len(design),
            "strength": design.strength,
            "t": t,
            "value": value,
            "target": target,
            "residual": residual,
            "pass": residual <= CERT_TOL,
        })
    return rows


def cmd_designs_verify(args) -> int:
    names = args.design or list(DEFAULT_VERIFY)
    t_max = args.t if args.t is not None else 8
    rows = []
    for name in names:
        rows.extend(verify_rows(_verify_target(name), t_max))
    emit(rows, args)
    failed = [r for r in rows if r["t"] <= r["strength"] and not r["pass"]]
    return EXIT_UNCERTIFIED if failed else EXIT_OK


def cmd_histogram(args) -> int:
    state = figures.histogram_state(args.state, args.q)
    result = figures.histogram(state, args.samples, args.seed)
    rows = [{"row": "E", "index": i, "value": v, "stderr": None} for i, v in enumerate(result["values"])]
    for key in ("R2", "R4"):
        rec = result[key]
        rows.append({"row": key, "index": None, "value": rec.value, "stderr": rec.detail["standard_error"]})
    emit(rows, args)
    return EXIT_OK


def cmd_scan(args) -> int:
    core._check_num_qubits(args.n)
    rows = [
        {"class": args.cls, "N": args.n, "R2": r2, "R4": r4, "seed": args.seed, "label": None}
        for r2, r4 in figures.scan_moments(args.cls, args.n, args.samples, args.seed)
    ]
    for lm in figures.landmark_rows(args.n):
        rows.append({"class": "landmark", "N": args.n, "R2": lm["R2"], "R4": lm["R4"],
                     "seed": None, "label": lm["label"]})
    emit(rows, args)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    emit(figures.threshold_rows(args.n if args.n is not None else 10), args)
    return EXIT_OK


def cmd_boundary(args) -> int:
    if args.family == "bell_diagonal":
        rows = figures.bell_diagonal_boundary(args.points)
    else:
        rows = figures.three_qubit_boundary(args.points)
    emit(rows, args)
    return EXIT_OK


def cmd_moment(args) -> int:
    state = build_state(args)
    if args.samples is not None:
        if args.seed is None:
            raise ValueError("Monte-Carlo estimation needs --seed")
        rec = moment_monte_carlo(state, args.t, args.samples, args.seed)
    else:
        design = resolve_spherical(args.design) if args.design else smallest_design(args.t)
        rec = moment_design(state, args.t, design)
    emit([rec.to_dict()], args)
    return EXIT_OK


def cmd_criteria(args) -> int:
    state = build_state(args)
    n = core.as_density(state).num_qubits
    r2 = moment_design(state, 2, builtin_spherical("octahedron")).value
    r4 = moment_design(state, 4, builtin_spherical("icosahedron")).value
    verdicts = []
    if n == 2:
        verdicts.append(bell_diagonal_separability(r2, r4))
    if n == 3:
        verdicts.append(three_qubit_bisep_conjecture(r2, r4))
        verdicts.append(pure_bisep_fourth_moment_bound(r2, r4))
    if n >= 3:
        verdicts.append(w_class_r2_bound(r2, n))
        verdicts.append(w_class_linear(r2, r4, n))
    emit([v.to_dict() for v in verdicts], args)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _add_io(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_state(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", choices=STATE_KINDS, default="ghz")
    p.add_argument("--state-file", help="JSON file with 'amplitudes' or 'matrix'")
    p.add_argument("--n", type=int, default=2, help="number of qubits")
    p.add_argument("--p", type=float, default=0.0, help="noise level of noisy_ghz")
    p.add_argument("--q", type=float, default=1 / math.sqrt(3), help="Werner weight")
    p.add_argument("--c", type=float, nargs=3, metavar=("CX", "CY", "CZ"),
                   help="Bell-diagonal correlations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designmoments",
        description="Moments of randomly measured qubit correlations via spherical and unitary designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("designs-verify", help="certify designs up to --t")
    p.add_argument("--design", action="append",
                   help=f"design name or JSON file; repeatable (default: {', '.join(DEFAULT_VERIFY)})")
    p.add_argument("--t", type=_positive, help="largest order checked (default 8)")
    _add_io(p)
    p.set_defaults(func=cmd_designs_verify)

    p = sub.add_parser("histogram", help="sampled correlations of a two-qubit state")
    p.add_argument("--state", choices=figures.HISTOGRAM_STATES, default="product")
    p.add_argument("--q", type=float, help="Werner weight (default 1/sqrt(3))")
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--seed", type=_u64, required=True)
    _add_io(p)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("scan", help="(R2, R4) of random states of one class, plus landmarks")
    p.add_argument("--class", dest="cls", choices=figures.SCAN_CLASSES, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_u64, required=True)
    _add_io(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("thresholds", help="noisy-GHZ detection thresholds for N = 3..--n")
    p.add_argument("--n", type=int, help="largest N (default 10)")
    _add_io(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("boundary", help="boundary curves in the (R2, R4) plane")
    p.add_argument("--family", choices=("bell_diagonal", "three_qubit_bisep"), required=True)
    p.add_argument("--points", type=_positive, default=201)
    _add_io(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("moment", help="R^(t) of a state by design sum or Monte Carlo")
    _add_state(p)
    p.add_argument("--t", type=_positive, default=2)
    p.add_argument("--design", help="spherical design name or JSON file")
    p.add_argument("--samples", type=_positive, help="use Monte Carlo with this many samples")
    p.add_argument("--seed", type=_u64)
    _add_io(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("criteria", help="evaluate the moment criteria that apply to a state")
    _add_state(p)
    _add_io(p)
    p.set_defaults(func=cmd_criteria)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CertificationError as exc:
        print(f"designmoments: certification failed: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"designmoments: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
