"""
Command-line front end.  Inputs are SI (m, m/s^2, rad/s, s) and are converted
to natural units once, here.

Exit status: 0 on success, 2 on bad arguments or unusable input/output,
3 when a quadrature failed to converge (partial output is still written with
the ``flag`` column set).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import units
from .entangle import build_state, entropy, schmidt, success_probability
from .errors import BracketError, DomainError
from .experiments import SweepResult, evaluate, sweep_acceleration, sweep_length, tune_length
from .interaction import DEFAULT_MODE_CAP, ProtocolParams, compute_amplitudes

CSV_HEADER = ["param", "entropy_bits", "p_alice", "p_rob", "p_success", "n_modes",
              "quad_err", "flag"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

# flag name -> (type, default)
SHARED = {
    "accel_si": (float, None),
    "aL": (float, None),
    "length_m": (float, None),
    "W_s": (float, None),
    "omega_rad_s": (float, None),
    "eps": (float, 1e-3),
    "modes_max": (int, DEFAULT_MODE_CAP),
    "tol": (float, 1e-8),
    "out": (str, None),
    "format": (str, None),
    "gnuplot": (str, None),
}
COMMAND_FLAGS = {
    "sweep-a": {"aL_min": (float, 1e-2), "aL_max": (float, 1e16), "points": (int, 40),
                "include_zero": (bool, False)},
    "sweep-l": {"L_min_m": (float, None), "L_max_m": (float, None), "points": (int, 40)},
    "tune-l": {"L_lo_m": (float, None), "L_hi_m": (float, None)},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """Locale-independent 12-significant-digit rendering."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rindler-cavities",
                     description="Entangle an inertial and an accelerated cavity.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ["geometry", "amplitudes", "entangle", "sweep-a", "sweep-l", "tune-l"]:
        p = sub.add_parser(name)
        p.error = parser.error
        accel = p.add_mutually_exclusive_group()
        accel.add_argument("--accel-si", type=float, help="Rob's proper acceleration [m/s^2]")
        accel.add_argument("--aL", type=float, help="dimensionless a*L (natural units)")
        p.add_argument("--length-m", type=float, help="cavity length at t = 0 [m]")
        p.add_argument("--W-s", dest="W_s", type=float, help="switching width W [s]")
        p.add_argument("--omega-rad-s", type=float, help="atom gap [rad/s], default pi c / L")
        p.add_argument("--eps", type=float, help="coupling strength (default 1e-3)")
        p.add_argument("--modes-max", type=int, help="hard cap on the mode count (default 4096)")
        p.add_argument("--tol", type=float, help="quadrature relative tolerance (default 1e-8)")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--config", help="JSON file with the same keys; flags win")
        p.add_argument("--gnuplot", help="also write a gnuplot script for the sweep")
        if name == "sweep-a":
            p.add_argument("--aL-min", dest="aL_min", type=float)
            p.add_argument("--aL-max", dest="aL_max", type=float)
            p.add_argument("--points", type=int)
            p.add_argument("--include-zero", action="store_true", default=None,
                           help="prepend the inertial point a = 0")
        elif name == "sweep-l":
            p.add_argument("--L-min-m", dest="L_min_m", type=float)
            p.add_argument("--L-max-m", dest="L_max_m", type=float)
            p.add_argument("--points", type=int)
        elif name == "tune-l":
            p.add_argument("--L-lo-m", dest="L_lo_m", type=float)
            p.add_argument("--L-hi-m", dest="L_hi_m", type=float)
    return parser


def resolve_config(ns: argparse.Namespace) -> dict:
    """Merge defaults, the optional JSON config and explicit flags (flags win)."""
    known = dict(SHARED)
    known.update(COMMAND_FLAGS.get(ns.command, {}))
    cfg = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                raw = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in raw.items():
            norm = key.lstrip("-").replace("-", "_")
            norm = {"W_s": "W_s", "w_s": "W_s", "al": "aL"}.get(norm, norm)
            match = next((k for k in known if k.lower() == norm.lower()), None)
            if match is None:
                raise UsageError(f"unknown config key {key!r}")
            cfg[match] = val
    merged = {}
    for key, (typ, default) in known.items():
        flag = getattr(ns, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in cfg:
            try:
                merged[key] = typ(cfg[key])
            except (TypeError, ValueError):
                raise UsageError(f"config key {key!r} has a bad value") from None
        else:
            merged[key] = default
    if merged["accel_si"] is not None and merged["aL"] is not None:
        raise UsageError("give either --accel-si or --aL, not both")
    for key in ("out", "gnuplot"):
        if merged[key] is not None:
            _check_writable(merged[key])
    for key in ("length_m", "W_s"):
        if merged[key] is None:
            raise UsageError(f"--{key.replace('_', '-')} is required")
    return merged


def _check_writable(path: str):
    folder = os.path.dirname(os.path.abspath(path))
    if os.path.isdir(path) or not os.path.isdir(folder) or not os.access(folder, os.W_OK):
        raise UsageError(f"output path {path} is not writable")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise UsageError(f"output path {path} is not writable")


def params_from_config(cfg: dict) -> ProtocolParams:
    L = units.length_to_natural(cfg["length_m"])
    if cfg["aL"] is not None:
        a = cfg["aL"] / L
    elif cfg["accel_si"] is not None:
        a = units.accel_to_natural(cfg["accel_si"])
    else:
        a = 0.0
    modes_cap = cfg["modes_max"]
    return ProtocolParams(a=a, L=L, W=cfg["W_s"], Omega=cfg["omega_rad_s"], eps=cfg["eps"],
                          tol=cfg["tol"], n_cap=modes_cap, n_max=min(8, modes_cap))


def sweep_csv(result: SweepResult, param_of) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow([fmt(param_of(r)), fmt(r.entropy_bits), fmt(r.p_alice), fmt(r.p_rob),
                    fmt(r.p_success), fmt(r.n_modes), fmt(r.quad_err), r.flag])
    return buf.getvalue()


def sweep_json(result: SweepResult) -> str:
    doc = {"rows": [r.as_dict() for r in result.rows], "metadata": result.metadata}
    return json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n"


def gnuplot_script(data_path: str, xlabel: str, logx: bool) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        "set ylabel 'entanglement [bits]'",
        "set yrange [0:1.05]",
    ]
    if logx:
        lines.append("set logscale x")
    lines.append(f"plot '{data_path}' using 1:2 with linespoints title 'E'")
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _cmd_geometry(params, cfg):
    g = params.geometry
    doc = {
        "a": g.a, "L": g.L, "X1": g.X1, "X2": g.X2, "X": g.X, "Lp": g.Lp, "t_a": g.t_a,
        "inertial": g.inertial, "aL": g.aL,
        "a_si": units.accel_to_si(g.a), "L_si": units.length_to_si(g.L),
        "Lp_si": units.length_to_si(g.Lp),
    }
    doc = {k: (None if isinstance(v, float) and math.isinf(v) else v) for k, v in doc.items()}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg["out"])
    return EXIT_OK


def _cmd_amplitudes(params, cfg):
    amps = compute_amplitudes(params)
    if cfg["format"] == "json":
        doc = {
            "n": amps.modes.tolist(),
            "I_A": [[v.real, v.imag] for v in amps.I_A],
            "I_R": [[v.real, v.imag] for v in amps.I_R],
            "truncation_error": amps.truncation_error,
            "quad_err": amps.quad_err,
            "converged": amps.converged,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_I_alice", "im_I_alice", "re_I_rob", "im_I_rob"])
        for n, ia, ir in zip(amps.modes, amps.I_A, amps.I_R):
            w.writerow([n, fmt(ia.real), fmt(ia.imag), fmt(ir.real), fmt(ir.imag)])
        text = buf.getvalue()
    _emit(text, cfg["out"])
    return EXIT_OK if amps.converged else EXIT_NUMERIC


def _cmd_entangle(params, cfg):
    amps = compute_amplitudes(params)
    state = build_state(amps)
    split = schmidt(state)
    E = entropy(split)
    p_succ = success_probability(state)
    print(f"entropy {E:.6f}")
    print(f"p_A {split.p_A:.6f}")
    print(f"p_R {split.p_R:.6f}")
    print(f"p_success {p_succ:.6e}")
    print(f"n_modes {amps.n_max}")
    if cfg["out"]:
        doc = {"entropy_bits": E, "p_alice": split.p_A, "p_rob": split.p_R,
               "p_success": p_succ, "n_modes": amps.n_max, "quad_err": amps.quad_err,
               "truncation_error": amps.truncation_error, "converged": amps.converged}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg["out"])
    return EXIT_OK if amps.converged else EXIT_NUMERIC


def _write_sweep(result, cfg, param_of, xlabel, logx):
    if cfg["format"] == "json":
        text = sweep_json(result)
    else:
        text = sweep_csv(result, param_of)
    _emit(text, cfg["out"])
    if cfg["gnuplot"]:
        data = cfg["out"] or "sweep.csv"
        _emit(gnuplot_script(data, xlabel, logx), cfg["gnuplot"])
    return EXIT_NUMERIC if result.partial else EXIT_OK


def _cmd_sweep_a(params, cfg):
    if cfg["points"] < 1 or not 0 < cfg["aL_min"] <= cfg["aL_max"]:
        raise UsageError("need points >= 1 and 0 < aL-min <= aL-max")
    aL = np.logspace(math.log10(cfg["aL_min"]), math.log10(cfg["aL_max"]), cfg["points"])
    a_grid = list(aL / params.L)
    if cfg["include_zero"]:
        a_grid.insert(0, 0.0)
    result = sweep_acceleration(params, a_grid)
    return _write_sweep(result, cfg, lambda r: r.aL, "a L (dimensionless)", True)


def _cmd_sweep_l(params, cfg):
    L0_m = cfg["length_m"]
    lo = cfg["L_min_m"] if cfg["L_min_m"] is not None else L0_m
    hi = cfg["L_max_m"] if cfg["L_max_m"] is not None else 2.0 * L0_m
    if cfg["points"] < 1 or not 0 < lo <= hi:
        raise UsageError("need points >= 1 and 0 < L-min <= L-max")
    L_grid = np.linspace(units.length_to_natural(lo), units.length_to_natural(hi), cfg["points"])
    result = sweep_length(params, params.a, L_grid)
    return _write_sweep(result, cfg, lambda r: r.L_si, "L [m]", False)


def _cmd_tune_l(params, cfg):
    lo = cfg["L_lo_m"] if cfg["L_lo_m"] is not None else cfg["length_m"]
    hi = cfg["L_hi_m"] if cfg["L_hi_m"] is not None else 2.0 * cfg["length_m"]
    bracket = (units.length_to_natural(lo), units.length_to_natural(hi))
    try:
        res = tune_length(params, params.a, bracket)
    except BracketError as exc:
        doc = {"error": str(exc), "scan": exc.scan}
        _emit(json.dumps(doc, indent=2) + "\n", cfg["out"])
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    doc = asdict(res)
    doc["L_star_si"] = units.length_to_si(res.L_star)
    doc["bracket_si"] = [units.length_to_si(x) for x in res.bracket]
    doc["a"] = params.a
    doc["a_si"] = units.accel_to_si(params.a)
    if cfg["format"] == "csv":
        row, _ = evaluate(params.with_(L=res.L_star))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerow([fmt(doc["L_star_si"]), fmt(row.entropy_bits), fmt(row.p_alice),
                    fmt(row.p_rob), fmt(row.p_success), fmt(row.n_modes), fmt(row.quad_err),
                    row.flag])
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _emit(text, cfg["out"])
    return EXIT_OK


COMMANDS = {
    "geometry": _cmd_geometry,
    "amplitudes": _cmd_amplitudes,
    "entangle": _cmd_entangle,
    "sweep-a": _cmd_sweep_a,
    "sweep-l": _cmd_sweep_l,
    "tune-l": _cmd_tune_l,
}


def run(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = resolve_config(ns)
        params = params_from_config(cfg)
        return COMMANDS[ns.command](params, cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
