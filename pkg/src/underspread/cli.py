"""Command-line front end.

Subcommands: pulse (sample the prototype in time, frequency, or over the
ambiguity plane), coeffs (small-spread expansion coefficients), bound (one
bound evaluation), interval (threshold-crossing snr range), sweep (grid of
intervals as CSV or JSON).

Exit codes: 0 success, 2 usage or config conflict, 3 invalid parameter
value, 4 computation failure.  JSON outputs embed the resolved parameters
under "params"; feeding such a file back via --config reproduces the run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .ambiguity import ambiguity, interference_sum, taylor_coeffs
from .capacity import lb_square
from .operating_range import solve_interval, sweep
from .pulses import eval_freq, eval_time, make_rrc_pulse, square_lattice

_LN2 = math.log(2.0)

_DEFAULTS = {
    "format": "json",
    "base": "nats",
    "threshold": 0.75,
    "bandwidth": 1.0,
    "bound_mode": "auto",
    "range_mode": "taylor",
}


class _UsageError(Exception):
    pass


def parse_snr(text: str) -> float:
    """'20dB' / '20 dB' -> linear power ratio; plain number -> as-is."""
    s = text.strip()
    if s.lower().endswith("db"):
        return 10.0 ** (float(s[:-2].strip()) / 10.0)
    return float(s)


def parse_grid(text: str) -> np.ndarray:
    """Grid spec 'start:stop:log|lin:count' -> 1-d array of floats."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(
            f"grid {text!r} must have the form start:stop:log|lin:count")
    start, stop = float(parts[0]), float(parts[1])
    scale = parts[2].lower()
    count = int(parts[3])
    if count < 1:
        raise ValueError(f"grid {text!r}: count must be at least 1")
    if count == 1:
        return np.array([start])
    if scale == "lin":
        return np.linspace(start, stop, count)
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ValueError(
                f"grid {text!r}: log scale needs positive endpoints")
        return np.logspace(math.log10(start), math.log10(stop), count)
    raise ValueError(f"grid {text!r}: scale must be 'log' or 'lin'")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(command: str, params: dict, results) -> str:
    doc = {"command": command, "params": params, "results": results}
    return json.dumps(_json_safe(doc), sort_keys=True, indent=2) + "\n"


def _kv_csv(results: dict) -> str:
    lines = ["key,value"]
    for key in sorted(results):
        val = results[key]
        if isinstance(val, float):
            val = f"{val:.12g}"
        lines.append(f"{key},{val}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="underspread",
        description="Noncoherent capacity bounds for underspread fading "
                    "channels with pulse-shaped signaling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tf", type=float, default=None,
                       help="time-frequency grid density TF in (1, 2)")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--config", default=None,
                       help="JSON file with params (a previous JSON output "
                            "works); explicit flags must not contradict it")

    p = sub.add_parser("pulse", help="sample the prototype pulse")
    common(p)
    p.add_argument("--domain", choices=["time", "freq", "ambiguity"],
                   default=None)
    p.add_argument("--grid", default=None,
                   help="start:stop:log|lin:count (time or freq domain)")
    p.add_argument("--doppler-grid", dest="doppler_grid", default=None)
    p.add_argument("--delay-grid", dest="delay_grid", default=None)

    p = sub.add_parser("coeffs", help="small-spread expansion coefficients")
    common(p)

    p = sub.add_parser("bound", help="evaluate the capacity lower bound")
    common(p)
    p.add_argument("--spread", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--snr", default=None, help="linear ('100') or dB ('20dB')")
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--mode", choices=["auto", "exact", "taylor"],
                   default=None)
    p.add_argument("--base", choices=["nats", "bits"], default=None)

    p = sub.add_parser("interval", help="solve the snr operating interval")
    common(p)
    p.add_argument("--spread", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--mode", choices=["auto", "exact", "taylor"],
                   default=None)

    p = sub.add_parser("sweep", help="interval solve over a (spread, eps) grid")
    common(p)
    p.add_argument("--spread-grid", dest="spread_grid", default=None)
    p.add_argument("--eps-grid", dest="eps_grid", default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--mode", choices=["auto", "exact", "taylor"],
                   default=None)
    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    """Resolve params from explicit flags plus an optional config file.

    A flag given on the command line that differs from the config value is
    a conflict (exit 2): the caller must drop one of the two sources.
    """
    explicit = {k: v for k, v in vars(args).items()
                if v is not None and k not in ("command", "config", "out")}
    if not args.config:
        return explicit
    try:
        with open(args.config) as fh:
            loaded = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read config {args.config!r}: {exc}")
    if not isinstance(loaded, dict):
        raise _UsageError("config must be a JSON object")
    params = loaded.get("params", loaded)
    if "command" in loaded and loaded["command"] != args.command:
        raise _UsageError(
            f"config is for command {loaded['command']!r}, not "
            f"{args.command!r}")
    if not isinstance(params, dict):
        raise _UsageError("config 'params' must be a JSON object")
    merged = dict(params)
    for key, val in explicit.items():
        if key in merged and merged[key] != val:
            raise _UsageError(
                f"--{key.replace('_', '-')} {val!r} conflicts with config "
                f"value {merged[key]!r}")
        merged[key] = val
    return merged


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise _UsageError(
            "missing required parameter(s): "
            + ", ".join("--" + n.replace("_", "-") for n in missing))


def _run_pulse(params: dict) -> tuple[dict, dict, str | None]:
    _require(params, "tf", "domain")
    tf = float(params["tf"])
    domain = params["domain"]
    pulse = make_rrc_pulse(tf)
    fmt = params.get("format", _DEFAULTS["format"])
    if domain in ("time", "freq"):
        _require(params, "grid")
        grid = parse_grid(str(params["grid"]))
        values = (eval_time(pulse, grid) if domain == "time"
                  else eval_freq(pulse, grid))
        cols = ("t", "g") if domain == "time" else ("f", "G")
        resolved = {"tf": tf, "domain": domain, "grid": str(params["grid"]),
                    "format": fmt}
        results = {cols[0]: [float(x) for x in grid],
                   cols[1]: [float(v) for v in values]}
        if fmt == "csv":
            lines = [",".join(cols)]
            lines += [f"{x:.12g},{v:.12g}"
                      for x, v in zip(grid, values)]
            return resolved, results, "\n".join(lines) + "\n"
        return resolved, results, None
    _require(params, "doppler_grid", "delay_grid")
    dop = parse_grid(str(params["doppler_grid"]))
    dly = parse_grid(str(params["delay_grid"]))
    lattice = square_lattice(pulse)
    rows = []
    for nu in dop:
        amb = ambiguity(pulse, float(nu), dly)
        amb_sq = np.abs(np.atleast_1d(amb)) ** 2
        for tau, a2 in zip(dly, amb_sq):
            isum = interference_sum(pulse, lattice, float(nu), float(tau))
            rows.append((float(nu), float(tau), float(a2), float(isum)))
    resolved = {"tf": tf, "domain": domain,
                "doppler_grid": str(params["doppler_grid"]),
                "delay_grid": str(params["delay_grid"]), "format": fmt}
    results = {"points": [
        {"doppler": r[0], "delay": r[1], "ambiguity_sq": r[2],
         "interference_sum": r[3]} for r in rows]}
    if fmt == "csv":
        lines = ["doppler,delay,ambiguity_sq,interference_sum"]
        lines += [f"{r[0]:.12g},{r[1]:.12g},{r[2]:.12g},{r[3]:.12g}"
                  for r in rows]
        return resolved, results, "\n".join(lines) + "\n"
    return resolved, results, None


def _run_coeffs(params: dict) -> tuple[dict, dict, str | None]:
    _require(params, "tf")
    tf = float(params["tf"])
    fmt = params.get("format", _DEFAULTS["format"])
    coeffs = taylor_coeffs(make_rrc_pulse(tf))
    resolved = {"tf": tf, "format": fmt}
    results = {
        "gain_curvature": coeffs.gain_curvature,
        "interference_slope": coeffs.interference_slope,
        "time_dispersion_sq": coeffs.time_dispersion_sq,
        "freq_dispersion_sq": coeffs.freq_dispersion_sq,
    }
    return resolved, results, _kv_csv(results) if fmt == "csv" else None


def _run_bound(params: dict) -> tuple[dict, dict, str | None]:
    _require(params, "tf", "spread", "eps", "snr")
    tf = float(params["tf"])
    spread = float(params["spread"])
    eps = float(params["eps"])
    snr = parse_snr(str(params["snr"]))
    bandwidth = float(params.get("bandwidth") or _DEFAULTS["bandwidth"])
    mode = params.get("mode") or _DEFAULTS["bound_mode"]
    base = params.get("base") or _DEFAULTS["base"]
    fmt = params.get("format", _DEFAULTS["format"])
    res = lb_square(snr, tf, spread, eps, bandwidth=bandwidth, mode=mode)
    scale = 1.0 if base == "nats" else 1.0 / _LN2
    resolved = {"tf": tf, "spread": spread, "eps": eps, "snr": snr,
                "bandwidth": bandwidth, "mode": mode, "base": base,
                "format": fmt}
    results = {
        "value": res.value * scale,
        "value_clamped": res.value_clamped * scale,
        "vacuous": res.vacuous,
        "units": "nats/s" if base == "nats" else "bits/s",
        "snr": snr,
        "snr_db": 10.0 * math.log10(snr) if snr > 0 else None,
        "alpha_star": res.alpha_star,
        "term_fading": res.term_fading * scale,
        "term_doppler": res.term_doppler * scale,
        "term_leakage": res.term_leakage * scale,
        "term_interference": res.term_interference * scale,
        "gain_min": res.gain_min,
        "interference_max": res.interference_max,
        "doppler_time_product": res.doppler_time_product,
    }
    return resolved, results, _kv_csv(results) if fmt == "csv" else None


def _run_interval(params: dict) -> tuple[dict, dict, str | None]:
    _require(params, "tf", "spread", "eps")
    tf = float(params["tf"])
    spread = float(params["spread"])
    eps = float(params["eps"])
    threshold = float(params.get("threshold") or _DEFAULTS["threshold"])
    mode = params.get("mode") or _DEFAULTS["range_mode"]
    fmt = params.get("format", _DEFAULTS["format"])
    res = solve_interval(tf, spread, eps, threshold=threshold, mode=mode)
    resolved = {"tf": tf, "spread": spread, "eps": eps,
                "threshold": threshold, "mode": mode, "format": fmt}
    results = {
        "snr_min": res.snr_min, "snr_max": res.snr_max,
        "snr_min_db": res.snr_min_db, "snr_max_db": res.snr_max_db,
        "threshold": res.threshold,
        "ratio_at_min": res.ratio_at_min, "ratio_at_max": res.ratio_at_max,
        "converged": res.converged, "empty": res.empty,
    }
    return resolved, results, _kv_csv(results) if fmt == "csv" else None


def _run_sweep(params: dict) -> tuple[dict, dict, str | None]:
    _require(params, "tf", "spread_grid", "eps_grid")
    tf = float(params["tf"])
    threshold = float(params.get("threshold") or _DEFAULTS["threshold"])
    mode = params.get("mode") or _DEFAULTS["range_mode"]
    fmt = params.get("format", _DEFAULTS["format"])
    spread_grid = parse_grid(str(params["spread_grid"]))
    eps_grid = parse_grid(str(params["eps_grid"]))
    table = sweep(tf, spread_grid, eps_grid, threshold=threshold, mode=mode)
    resolved = {"tf": tf, "spread_grid": str(params["spread_grid"]),
                "eps_grid": str(params["eps_grid"]), "threshold": threshold,
                "mode": mode, "format": fmt}
    results = table.to_jsonable()
    return resolved, results, table.to_csv() if fmt == "csv" else None


_RUNNERS = {
    "pulse": _run_pulse,
    "coeffs": _run_coeffs,
    "bound": _run_bound,
    "interval": _run_interval,
    "sweep": _run_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = _merge_config(args)
        resolved, results, rendered = _RUNNERS[args.command](params)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid-parameter: {exc}", file=sys.stderr)
        return 3
    except (RuntimeError, ArithmeticError) as exc:
        print(f"error: computation: {exc}", file=sys.stderr)
        return 4
    if rendered is None:
        rendered = _json_doc(args.command, resolved, results)
    _emit(rendered, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
