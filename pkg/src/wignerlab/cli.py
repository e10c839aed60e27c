"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 a classical
(hidden-variable) model violated an inequality.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Callable

from . import __version__, kernels
from .meson import MesonParams, dynamic_inequality, static_inequality, static_probabilities
from .qft import QftParams, decay_rate, rate_bracket, ratio_inequality, violation_region_fraction
from .scan import (
    AxisRange,
    grid_scan,
    maximize_violation,
    meson_dynamic_target,
    qft_ratio_target,
    spin_family_target,
    spin_target,
)
from .spin import delta_threshold, kappa
from .wigner import DEFAULT_TOL, fuzz_lhv

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- value parsing ---------------------------------------------------------

def parse_range(text: str) -> tuple[float, float, int]:
    """'lo:hi:n' with lo < hi and n >= 2."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None
    if not lo < hi or n < 2:
        raise argparse.ArgumentTypeError(f"degenerate range {text!r}")
    return lo, hi, n


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_assignment(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    name, value = text.split("=", 1)
    return name.strip(), value.strip()


def fmt(x: Any) -> str:
    """Shortest round-trip text for floats; integral values lose the '.0'."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        r = repr(x)
        return r[:-2] if r.endswith(".0") else r
    return str(x)


# --- option tables -----------------------------------------------------------
# name -> (converter, default, help); converters double as config-file parsers

Option = tuple[Callable[[str], Any], Any, str]

COMMON: dict[str, Option] = {
    "out": (str, None, "output path (default stdout)"),
    "format": (str, None, "csv or json"),
    "seed": (int, 0, "random seed"),
    "tol": (float, DEFAULT_TOL, "violation tolerance"),
    "degrees": (bool, False, "angles given in degrees"),
}

COMMANDS: dict[str, dict[str, Any]] = {
    "spin-curve": {
        "help": "violation rate K(delta) versus detector resolution",
        "format": "csv",
        "options": {"range": (parse_range, (0.0, 2.0, 401), "delta range lo:hi:n")},
    },
    "spin-max": {
        "help": "maximise the precessing-pair violation",
        "format": "json",
        "options": {
            "family": (str, "symmetric", "symmetric | static | free"),
            "steps": (int, 51, "coarse grid steps per axis"),
            "refine": (int, 50, "coordinate-descent cycles"),
        },
    },
    "meson-static": {
        "help": "static meson inequality for given p, q, alpha",
        "format": "json",
        "options": {
            "p": (complex, complex(2 ** -0.5), "complex p"),
            "q": (complex, complex(2 ** -0.5), "complex q"),
            "alpha": (float, 0.0, "unphysical CP phase (radians)"),
        },
    },
    "meson-dynamic": {
        "help": "dynamical meson inequality (q/p = exp(i alpha))",
        "format": "json",
        "options": {
            "gamma": (float, 1.0, "mean width"),
            "dgamma": (float, 0.1, "width difference Gamma_H - Gamma_L"),
            "dm": (float, 0.5, "mass difference"),
            "alpha": (float, 0.0, "unphysical CP phase (radians)"),
            "t": (float, 1.0, "time"),
            "t_range": (parse_range, None, "time range lo:hi:n (csv rows)"),
        },
    },
    "qft-curve": {
        "help": "finite-time decay rate bracket versus M tau",
        "format": "csv",
        "options": {
            "range": (parse_range, (0.1, 1000.0, 200), "M tau range lo:hi:n"),
            "log": (bool, True, "log spacing"),
            "M": (float, 1.0, "pseudoscalar mass"),
            "gamma0": (float, 1e-6, "asymptotic width"),
            "theta": (float, math.pi, "analyser angle theta_ab"),
        },
    },
    "qft-region": {
        "help": "ratio inequality and its violated share of angle space",
        "format": "json",
        "options": {
            "ratio": (parse_floats, [1.0, 2.0, 4.0], "comma-separated t/t0 values"),
            "angles": (parse_floats, None, "theta_ba,theta_ca,theta_bc"),
            "samples": (int, 1_000_000, "Monte Carlo samples"),
        },
    },
    "lhv-fuzz": {
        "help": "certify that hidden-variable models never violate",
        "format": "json",
        "options": {
            "n": (int, 100_000, "random trials"),
            "workers": (int, None, "worker threads"),
        },
    },
    "scan": {
        "help": "grid scan or maximisation of a target inequality",
        "format": "csv",
        "options": {
            "target": (str, "spin", "spin | meson-dynamic | qft-ratio"),
            "axis": (parse_assignment, [], "name=lo:hi:n (repeatable)"),
            "fixed": (parse_assignment, [], "name=value (repeatable)"),
            "maximize": (bool, False, "refine the best grid point"),
            "refine": (int, 50, "coordinate-descent cycles"),
        },
    },
}

REPEATABLE = {"axis", "fixed"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wignerlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, info in COMMANDS.items():
        p = sub.add_parser(name, help=info["help"])
        p.add_argument("--config", default=None, help="flat JSON config (flags win)")
        for opt, (conv, _default, help_) in {**COMMON, **info["options"]}.items():
            flag = "--" + opt.replace("_", "-")
            if conv is bool:
                p.add_argument(flag, dest=opt, action=argparse.BooleanOptionalAction,
                               default=None, help=help_)
            elif opt in REPEATABLE:
                p.add_argument(flag, dest=opt, type=conv, action="append", default=None, help=help_)
            else:
                p.add_argument(flag, dest=opt, type=conv, default=None, help=help_)
    return parser


def _from_config(conv, value, repeatable: bool):
    if repeatable:
        return [parse_assignment(v) if isinstance(v, str) else tuple(v) for v in value]
    if conv is bool:
        if not isinstance(value, bool):
            raise UsageError(f"expected a boolean, got {value!r}")
        return value
    if isinstance(value, str):
        try:
            return conv(value)
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    if conv is parse_range:
        lo, hi, n = value
        return parse_range(f"{lo}:{hi}:{n}")
    if conv is complex and isinstance(value, list):
        return complex(*value)
    return value


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults < config file < explicit flags; unknown config keys are errors."""
    info = COMMANDS[args.command]
    options = {**COMMON, **info["options"]}
    resolved = {k: v[1] for k, v in options.items()}
    resolved["format"] = info["format"]
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a flat JSON object")
        unknown = sorted(set(cfg) - set(options))
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {unknown}")
        for k, v in cfg.items():
            resolved[k] = _from_config(options[k][0], v, k in REPEATABLE)
    for k in options:
        v = getattr(args, k)
        if v is not None:
            resolved[k] = v
    if resolved["format"] not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {resolved['format']!r}")
    return resolved


def _angle(cfg: dict, value: float) -> float:
    return math.radians(value) if cfg["degrees"] else value


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, tuple):
        return list(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _jsonable(obj)


# --- commands ----------------------------------------------------------------
# each returns (result, csv_header, csv_rows, exit_code)

def cmd_spin_curve(cfg):
    lo, hi, n = cfg["range"]
    rows = []
    for i in range(n):
        d = lo + (hi - lo) * i / (n - 1)
        rows.append((d, kappa(d)))
    root = delta_threshold()
    sys.stderr.write(f"delta_threshold={fmt(root)}\n")
    result = {"delta_threshold": root, "rows": [list(r) for r in rows]}
    return result, ("delta", "kappa"), rows, EXIT_OK


def cmd_spin_max(cfg):
    steps, refine = cfg["steps"], cfg["refine"]
    family = cfg["family"]
    if family == "symmetric":
        target = spin_family_target()
        ranges = [AxisRange("theta", 0.0, math.pi / 2, steps)]
    elif family == "static":
        target = spin_family_target(omega_t=0.0)
        ranges = [AxisRange("theta", 0.0, math.pi / 2, steps)]
    elif family == "free":
        target = spin_target()
        ranges = [
            AxisRange("theta_ba", 0.0, 2 * math.pi, steps),
            AxisRange("theta_ca", 0.0, 2 * math.pi, steps),
            AxisRange("theta_bc", 0.0, 2 * math.pi, steps),
            AxisRange("omega_t", 0.0, math.pi, steps),
        ]
    else:
        raise UsageError(f"unknown family {family!r}")
    res = maximize_violation(target, ranges, refine)
    result = res.as_dict()
    rows = [tuple(res.params.values()) + (res.margin,)]
    return result, tuple(res.params) + ("margin",), rows, EXIT_OK


def cmd_meson_static(cfg):
    # widths and masses do not enter the static probabilities
    mp = MesonParams(1.0, 1.0, 0.0, 0.0, cfg["p"], cfg["q"], _angle(cfg, cfg["alpha"]))
    reports = {o: static_inequality(mp, o, cfg["tol"]) for o in ("Bbar-plus", "B-plus")}
    result = {
        "probabilities": static_probabilities(mp).as_dict(),
        "reports": {o: r.as_dict() for o, r in reports.items()},
    }
    rows = [(o, r.lhs, r.rhs, r.margin, r.violated) for o, r in reports.items()]
    return result, ("orientation", "lhs", "rhs", "margin", "violated"), rows, EXIT_OK


def cmd_meson_dynamic(cfg):
    mp = MesonParams.from_widths(cfg["gamma"], cfg["dgamma"], cfg["dm"], _angle(cfg, cfg["alpha"]))
    if cfg["t_range"] is not None:
        lo, hi, n = cfg["t_range"]
        times = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    else:
        times = [cfg["t"]]
    reports = [dynamic_inequality(t, mp, cfg["tol"]) for t in times]
    rows = [
        (t, r.lhs, r.rhs, r.margin, r.violated, r.params["ratio"], r.params["ratio_closed_form"])
        for t, r in zip(times, reports)
    ]
    header = ("t", "lhs", "rhs", "margin", "violated", "ratio", "ratio_closed_form")
    result = reports[0].as_dict() if len(reports) == 1 else {"reports": [r.as_dict() for r in reports]}
    return result, header, rows, EXIT_OK


def cmd_qft_curve(cfg):
    lo, hi, n = cfg["range"]
    if cfg["log"] and lo <= 0:
        raise UsageError("log spacing needs lo > 0")
    qp = QftParams(cfg["M"], cfg["gamma0"])
    theta = _angle(cfg, cfg["theta"])
    rows = []
    for i in range(n):
        if cfg["log"]:
            x = 10.0 ** (math.log10(lo) + (math.log10(hi) - math.log10(lo)) * i / (n - 1))
        else:
            x = lo + (hi - lo) * i / (n - 1)
        rows.append((x, rate_bracket(x), decay_rate(theta, x / qp.M, qp)))
    return {"rows": [list(r) for r in rows]}, ("m_tau", "bracket", "rate"), rows, EXIT_OK


def cmd_qft_region(cfg):
    result: dict[str, Any] = {}
    header, rows = ("ratio", "fraction", "stderr", "samples"), []
    if cfg["angles"] is not None:
        if len(cfg["angles"]) != 3:
            raise UsageError("--angles needs three values")
        angles = [_angle(cfg, a) for a in cfg["angles"]]
        result["inequalities"] = [
            ratio_inequality(r, *angles, tol=cfg["tol"]).as_dict() for r in cfg["ratio"]
        ]
    fractions = []
    for r in cfg["ratio"]:
        fr = violation_region_fraction(r, cfg["samples"], cfg["seed"], cfg["tol"])
        fractions.append(fr.as_dict())
        rows.append((fr.ratio, fr.fraction, fr.stderr, fr.samples))
    result["fractions"] = fractions
    if "inequalities" in result and len(result["inequalities"]) == 1:
        result["margin"] = result["inequalities"][0]["margin"]
    return result, header, rows, EXIT_OK


def cmd_lhv_fuzz(cfg):
    if cfg["n"] < 1:
        raise UsageError("--n must be >= 1")
    summary = fuzz_lhv(cfg["n"], cfg["seed"], cfg["workers"])
    code = EXIT_BREACH if summary.breached(cfg["tol"]) else EXIT_OK
    result = summary.as_dict()
    result["breached"] = code == EXIT_BREACH
    rows = [(summary.n, summary.seed, summary.max_static_margin, summary.max_dynamic_margin,
             summary.corner_max_margin, summary.max_margin)]
    header = ("n", "seed", "max_static_margin", "max_dynamic_margin", "corner_max_margin", "max_margin")
    return result, header, rows, code


def _make_target(cfg, fixed: dict[str, float]):
    name = cfg["target"]
    if name == "spin":
        return spin_target(**fixed)
    if name == "meson-dynamic":
        base = meson_dynamic_target(**{k: v for k, v in fixed.items() if k != "t"})
        if "t" in fixed:
            return base.__class__(base.name, base.axes, lambda **p: base.evaluate(**{"t": fixed["t"], **p}))
        return base
    if name == "qft-ratio":
        base = qft_ratio_target(fixed.pop("t_over_t0", 1.0))
        return base.__class__(base.name, base.axes, lambda **p: base.evaluate(**{**fixed, **p}))
    raise UsageError(f"unknown target {name!r}")


ANGLE_PREFIXES = ("theta", "alpha")


def cmd_scan(cfg):
    fixed = {}
    for k, v in cfg["fixed"]:
        val = float(v)
        fixed[k] = _angle(cfg, val) if k.startswith(ANGLE_PREFIXES) else val
    ranges = []
    for k, v in cfg["axis"]:
        try:
            lo, hi, n = parse_range(v)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from None
        if k.startswith(ANGLE_PREFIXES):
            lo, hi = _angle(cfg, lo), _angle(cfg, hi)
        ranges.append(AxisRange(k, lo, hi, n))
    if not ranges:
        raise UsageError("scan needs at least one --axis")
    target = _make_target(cfg, fixed)
    if cfg["maximize"]:
        res = maximize_violation(target, ranges, cfg["refine"])
        rows = [tuple(res.params.values()) + (res.margin,)]
        return res.as_dict(), tuple(res.params) + ("margin",), rows, EXIT_OK
    names = [r.name for r in ranges]
    rows = [
        tuple(rec.params[n] for n in names) + (rec.lhs, rec.rhs, rec.margin, rec.violated)
        for rec in grid_scan(target, ranges)
    ]
    result = {"records": [dict(zip(names + ["lhs", "rhs", "margin", "violated"], r)) for r in rows]}
    return result, tuple(names) + ("lhs", "rhs", "margin", "violated"), rows, EXIT_OK


HANDLERS = {
    "spin-curve": cmd_spin_curve,
    "spin-max": cmd_spin_max,
    "meson-static": cmd_meson_static,
    "meson-dynamic": cmd_meson_dynamic,
    "qft-curve": cmd_qft_curve,
    "qft-region": cmd_qft_region,
    "lhv-fuzz": cmd_lhv_fuzz,
    "scan": cmd_scan,
}


def render(cfg, command, result, header, rows) -> str:
    if cfg["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "version": __version__,
        "backend": kernels.BACKEND,
        "config": _clean({k: v for k, v in cfg.items() if k != "out"}),
        "result": _clean(result),
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        result, header, rows, code = HANDLERS[args.command](cfg)
        text = render(cfg, args.command, result, header, rows)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"wignerlab {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"wignerlab {args.command}: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
