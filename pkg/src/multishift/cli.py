"""Batch front end: JSON configs in, CSV/JSON reports out.

Every report embeds the exact resolved configuration that produced it,
and identical configurations (seed included) produce byte-identical
output. Exit codes encode the verdict so shell pipelines can branch:
0 bounded/ok, 2 divergent (or unbalanced), 3 inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .balanced import (
    ReinhardtMeasure,
    RadialWeights,
    SliceRepresentation,
    is_spherically_balanced,
    rn_bound_sample,
    szego_similarity_check,
)
from .combinatorics import DegreeCapError
from .criteria import (
    BOUNDED,
    DIVERGENT,
    Thresholds,
    cu_restricted_norm,
    level_b,
    weak_homogeneity_diagnosis,
)
from .renorm import homogenize
from .unitary import UnitaryMatrix
from .weights import WeightFamily, shift_bound

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGENT = 2
EXIT_INCONCLUSIVE = 3

# refuse families whose empirical shift bound exceeds this unless the
# config overrides; a finite truncation cannot prove boundedness, but a
# huge ratio means the diagnostics would be about an unbounded tuple
DEFAULT_SHIFT_BOUND_LIMIT = 100.0

_FLOAT_FMT = ".17g"


class CliError(Exception):
    """Configuration or validation failure; message names the field."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, _FLOAT_FMT)
    return str(x)


def _load_config(args) -> dict:
    config: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except FileNotFoundError:
            raise CliError(f"config: file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise CliError(f"config: malformed JSON: {exc}") from None
        if not isinstance(config, dict):
            raise CliError("config: top level must be an object")
    for key in ("seed", "levels", "samples"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    return config


def _family_from(config: dict) -> WeightFamily:
    if "weights" not in config:
        raise CliError("weights: missing descriptor")
    try:
        return WeightFamily.from_descriptor(config["weights"])
    except (ValueError, DegreeCapError) as exc:
        raise CliError(str(exc)) from None


def _unitary_from(config: dict, d: int) -> UnitaryMatrix:
    if "unitary" not in config:
        raise CliError("unitary: missing descriptor")
    try:
        u = UnitaryMatrix.from_descriptor(config["unitary"], d=d)
    except (ValueError, DegreeCapError) as exc:
        raise CliError(str(exc)) from None
    if u.d != d:
        raise CliError(f"unitary: dimension {u.d} != weights dimension {d}")
    return u


def _measure_from(config: dict) -> ReinhardtMeasure:
    if "measure" not in config:
        raise CliError("measure: missing descriptor")
    try:
        return ReinhardtMeasure.from_descriptor(config["measure"])
    except (ValueError, DegreeCapError) as exc:
        raise CliError(str(exc)) from None


def _levels_from(config: dict, cap: int, default: int = 20, headroom: int = 0) -> int:
    n = int(config.get("levels", default))
    if n < 1:
        raise CliError(f"N: levels must be >= 1, got {n}")
    if n + headroom > cap:
        raise CliError(
            f"N: levels = {n} needs degree {n + headroom} <= cap {cap}"
        )
    return n


def _thresholds_from(config: dict) -> Thresholds:
    t = config.get("thresholds", {})
    try:
        return Thresholds(
            slope_min=float(t.get("slope_min", 0.05)),
            growth_factor=float(t.get("growth_factor", 10.0)),
            plateau_tol=float(t.get("plateau_tol", 1.5)),
        )
    except (TypeError, ValueError, AttributeError):
        raise CliError("thresholds: must map names to numbers") from None


def _check_shift_policy(config: dict, family: WeightFamily, N: int) -> tuple[float, ...]:
    limit = float(config.get("shift_bound_limit", DEFAULT_SHIFT_BOUND_LIMIT))
    horizon = min(N, family.cap - 1)
    bounds = shift_bound(family, horizon)
    if max(bounds) > limit:
        raise CliError(
            "weights: empirical shift bound "
            f"{max(bounds):.6g} exceeds limit {limit:.6g}; "
            "the multiplication tuple looks unbounded (override with "
            "shift_bound_limit)"
        )
    return bounds


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _verdict_exit(classification: str) -> int:
    if classification == BOUNDED:
        return EXIT_OK
    if classification == DIVERGENT:
        return EXIT_DIVERGENT
    return EXIT_INCONCLUSIVE


# -- subcommands ----------------------------------------------------------


def cmd_analyze(args) -> int:
    config = _load_config(args)
    family = _family_from(config)
    N = _levels_from(config, family.cap)
    thresholds = _thresholds_from(config)
    bounds = _check_shift_policy(config, family, N)
    diagnostics = [level_b(family, n) for n in range(N + 1)]
    verdict = weak_homogeneity_diagnosis(family, N, thresholds)
    config_out = dict(config)
    config_out["levels"] = N
    report = {
        "command": "analyze",
        "config": config_out,
        "shift_bound": list(bounds),
        "levels": [
            {
                "n": ld.n,
                "max_up": ld.max_up,
                "argmax_up": list(ld.argmax_up),
                "max_down": ld.max_down,
                "argmax_down": list(ld.argmax_down),
                "b_n": ld.b,
            }
            for ld in diagnostics
        ],
        "verdict": verdict.to_dict(),
    }
    if args.format == "csv":
        text = _csv_text(
            ["n", "max_up", "argmax_up", "max_down", "argmax_down", "b_n"],
            [
                (ld.n, ld.max_up, tuple(ld.argmax_up), ld.max_down,
                 tuple(ld.argmax_down), ld.b)
                for ld in diagnostics
            ],
        )
        text += f"# verdict,{verdict.classification}\n"
    else:
        text = _json_report(report)
    _emit(args, text)
    return _verdict_exit(verdict.classification)


def cmd_cu_norm(args) -> int:
    config = _load_config(args)
    family = _family_from(config)
    N = _levels_from(config, family.cap, default=8)
    u = _unitary_from(config, family.d)
    rows = []
    for n in range(N + 1):
        norm = cu_restricted_norm(u, family, n)
        bound = level_b(family, n).b
        rows.append((n, norm, bound, norm <= bound + 1e-9))
    config_out = dict(config)
    config_out["levels"] = N
    report = {
        "command": "cu-norm",
        "config": config_out,
        "rows": [
            {"n": n, "cu_norm": v, "b_n": b, "bound_ok": ok}
            for n, v, b, ok in rows
        ],
    }
    if args.format == "csv":
        text = _csv_text(["n", "cu_norm", "b_n", "bound_ok"], rows)
    else:
        text = _json_report(report)
    _emit(args, text)
    return EXIT_OK if all(ok for *_, ok in rows) else EXIT_INCONCLUSIVE


def cmd_homogenize(args) -> int:
    config = _load_config(args)
    family = _family_from(config)
    N = _levels_from(config, family.cap, default=12)
    samples = int(config.get("samples", 500))
    seed = int(config.get("seed", 0))
    result = homogenize(family, N, samples=samples, seed=seed)
    config_out = dict(config)
    config_out.update({"levels": N, "samples": samples, "seed": seed})
    body = result.to_dict()
    report = {"command": "homogenize", "config": config_out, **body}
    if args.format == "csv":
        rows = [
            (n, result.constants[n], result.ratio_bounds[n][0],
             result.ratio_bounds[n][1],
             result.mc_residuals[n] if result.mc_residuals else "")
            for n in range(N + 1)
        ]
        text = _csv_text(["n", "c_n", "ratio_lo", "ratio_hi", "mc_residual"], rows)
    else:
        text = _json_report(report)
    _emit(args, text)
    return EXIT_OK


def cmd_balanced(args) -> int:
    config = _load_config(args)
    family = _family_from(config)
    N = _levels_from(config, family.cap, default=10, headroom=2)
    tol = float(config.get("tol", 1e-10))
    result = is_spherically_balanced(family, N, tol)
    config_out = dict(config)
    config_out["levels"] = N
    report = {
        "command": "balanced",
        "config": config_out,
        "balanced": result.is_balanced,
    }
    if not result.is_balanced:
        report["witness"] = {
            "alpha": list(result.alpha),
            "i": result.i,
            "j": result.j,
            "sum_i": result.sum_i,
            "sum_j": result.sum_j,
        }
    _emit(args, _json_report(report))
    return EXIT_OK if result.is_balanced else EXIT_DIVERGENT


def cmd_sphere(args) -> int:
    config = _load_config(args)
    measure = _measure_from(config)
    N = _levels_from(config, measure.cap, default=15)
    thresholds = _thresholds_from(config)
    report_body = szego_similarity_check(measure, N, thresholds)
    config_out = dict(config)
    config_out["levels"] = N
    report = {
        "command": "sphere",
        "config": config_out,
        "szego": report_body.to_dict(),
    }
    if "unitary" in config and not measure.is_formal:
        u = _unitary_from(config, measure.d)
        samples = int(config.get("samples", 10000))
        seed = int(config.get("seed", 0))
        lo, hi = rn_bound_sample(measure, u, samples, seed)
        config_out.update({"samples": samples, "seed": seed})
        report["rn_bounds"] = {"k_est": lo, "K_est": hi}
    _emit(args, _json_report(report))
    return _verdict_exit(report_body.verdict.classification)


def cmd_families(args) -> int:
    listing = {
        "families": [
            {
                "family": "radial",
                "descriptor": {"d": "int", "family": "radial", "a": "[a_0..a_N]"},
                "note": "level-radial; rotation-homogeneous by construction",
            },
            {
                "family": "drury_arveson",
                "descriptor": {"d": "int", "family": "drury_arveson", "cap": "int"},
                "note": "beta = sqrt(alpha!/|alpha|!)",
            },
            {
                "family": "polydisc_hardy",
                "descriptor": {"d": "int", "family": "polydisc_hardy", "cap": "int"},
                "note": "beta = 1",
            },
            {
                "family": "fock",
                "descriptor": {"d": "int", "family": "fock", "cap": "int"},
                "note": "beta = sqrt(alpha!)",
            },
            {
                "family": "table",
                "descriptor": {
                    "d": "int",
                    "family": "table",
                    "cap": "int",
                    "entries": [{"alpha": "[..]", "beta": "float"}],
                },
                "note": "explicit positive entries covering every level <= cap",
            },
        ]
    }
    _emit(args, _json_report(listing))
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "cu-norm": cmd_cu_norm,
    "homogenize": cmd_homogenize,
    "balanced": cmd_balanced,
    "sphere": cmd_sphere,
    "families": cmd_families,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multishift",
        description="Finite-truncation diagnostics for weighted multishifts",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("analyze", "level diagnostics b_n and boundedness verdict"),
        ("cu-norm", "composition-operator norms per level with the b_n bound"),
        ("homogenize", "rotation-averaged constants and the similar radial family"),
        ("balanced", "spherically-balanced test"),
        ("sphere", "sphere-measure comparison against the invariant measure"),
        ("families", "list built-in weight families"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument(
            "--format", choices=("csv", "json"), default="json",
            help="report format where applicable",
        )
        p.add_argument("--seed", type=int, help="override config seed")
        p.add_argument("--levels", type=int, help="override config levels N")
        p.add_argument("--samples", type=int, help="override config samples")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, DegreeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
