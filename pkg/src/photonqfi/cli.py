"""Command-line front end: data files for plots and machine-readable QFI reports.

Subcommands ``wigner``, ``sweep`` and ``herald`` write CSV (or JSON with
``--format json``); ``qfi`` and ``effective`` write JSON reports. Every flag may
also come from a JSON file given with ``--config``; flags on the command line
win over the file.

Exit codes: 0 success, 2 bad arguments, 3 numerical-domain error,
4 conformance residual above tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import HeraldingError, PhotonQfiError
from .fock import (
    SqueezeParams,
    apply_beam_splitter,
    effective_qfi,
    herald_probability,
    herald_probability_closed,
    herald_single_photon,
    qfi_fock,
    squeezed_coherent,
)
from .phase_space import GaussianSpec, ParamJet, evaluate, normalize_kind, wigner
from .qfi_closed import cramer_rao_bound, qfi_added, qfi_coherent, qfi_gaussian, qfi_subtracted
from .qfi_numeric import qfi_moment

__all__ = ["main", "parse_range", "Range", "EXIT_OK", "EXIT_USAGE", "EXIT_DOMAIN", "EXIT_RESIDUAL"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RESIDUAL = 0, 2, 3, 4

DEFAULT_TOLERANCE = 1e-5
HERALD_TOLERANCE = 1e-8
HERALD_MAX_CUTOFF = 4096
HERALD_TAIL = 1e-12

_RANGE_FLAGS = ("--range", "--prange", "--xbar-range", "--gamma-range", "--r-range", "--delta-range")


class UsageError(Exception):
    """Invalid option values that argparse itself cannot catch."""


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


def parse_range(text: Any) -> Range:
    """Parse ``start:stop:count`` (or a ``[start, stop, count]`` list from a config file)."""
    if isinstance(text, Range):
        return text
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must look like start:stop:count")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"range {text!r} must look like start:stop:count") from None
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"range {text!r} must be finite")
    if count < 1:
        raise UsageError(f"range {text!r} needs count >= 1")
    return Range(start, stop, count)


# command -> {option: default}
_DEFAULTS: dict[str, dict[str, Any]] = {
    "wigner": {"kind": "gaussian", "xbar": 0.0, "pbar": 0.0, "gamma": 1.0,
               "range": "-4:4:81", "prange": None, "format": "csv", "output": None},
    "qfi": {"kind": "gaussian", "xbar": 0.0, "pbar": 0.0, "gamma": 1.0,
            "dxbar": 0.0, "dpbar": 0.0, "dgamma": 0.0, "method": "closed",
            "shots": 1.0, "tolerance": DEFAULT_TOLERANCE, "output": None},
    "sweep": {"kind": "subtracted", "pbar": 0.0, "dxbar": 1.0, "dpbar": 0.0, "dgamma": 0.0,
              "xbar_range": "0.01:1:25", "gamma_range": "1.001:2:25", "format": "csv", "output": None},
    "herald": {"r_range": "0:2.5:10", "delta_range": f"0:{math.pi / 2!r}:10",
               "max_cutoff": HERALD_MAX_CUTOFF, "format": "csv", "output": None},
    "effective": {"r": 1e-3, "delta": math.pi / 4, "xbar": 0.0, "pbar": 0.0,
                  "dxbar": 1.0, "dpbar": 0.0, "dgamma": 0.0, "output": None},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonqfi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=True, jet=False, grid_output=False, kind=True):
        p.add_argument("--config", help="JSON file with default values for any option")
        p.add_argument("--output", "-o", help="output path (default: stdout)")
        if kind:
            p.add_argument("--kind", help="gaussian | subtracted (sub) | added (add)")
        if state:
            p.add_argument("--xbar", type=float)
            p.add_argument("--pbar", type=float)
            p.add_argument("--gamma", type=float)
        if jet:
            p.add_argument("--dxbar", type=float)
            p.add_argument("--dpbar", type=float)
            p.add_argument("--dgamma", type=float)
        if grid_output:
            p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("wigner", help="Wigner function on a square grid (CSV x,p,w)")
    common(p, grid_output=True)
    p.add_argument("--range", help="x grid start:stop:count (also used for p unless --prange)")
    p.add_argument("--prange", help="p grid start:stop:count")

    p = sub.add_parser("qfi", help="QFI report for one parameter jet (JSON)")
    common(p, jet=True)
    p.add_argument("--method", choices=("closed", "moment", "fock", "all"))
    p.add_argument("--shots", type=float, help="number of repetitions Q for the Cramér-Rao bound")
    p.add_argument("--tolerance", type=float, help="relative tolerance on pairwise residuals")

    p = sub.add_parser("sweep", help="closed-form QFI over an (xbar, gamma) grid (CSV)")
    common(p, state=False, jet=True, grid_output=True)
    p.add_argument("--pbar", type=float)
    p.add_argument("--xbar-range", dest="xbar_range")
    p.add_argument("--gamma-range", dest="gamma_range")

    p = sub.add_parser("herald", help="single-photon heralding probability over (r, delta) (CSV)")
    common(p, state=False, grid_output=True, kind=False)
    p.add_argument("--r-range", dest="r_range")
    p.add_argument("--delta-range", dest="delta_range")
    p.add_argument("--max-cutoff", dest="max_cutoff", type=int)

    p = sub.add_parser("effective", help="heralding-weighted QFI of subtracted squeezed states (JSON)")
    common(p, state=False, jet=True, kind=False)
    p.add_argument("--r", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--xbar", type=float)
    p.add_argument("--pbar", type=float)
    return parser


def _join_range_flags(argv: Sequence[str]) -> list[str]:
    # "--range -4:4:9" would otherwise be read as an unknown option "-4:4:9"
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _resolve(args: argparse.Namespace) -> dict[str, Any]:
    cfg = dict(_DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        command = loaded.pop("command", args.command)
        if command != args.command:
            raise UsageError(f"config is for command {command!r}, not {args.command!r}")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r} for {args.command}")
            cfg[key] = value
    for key, value in vars(args).items():
        if key in cfg and value is not None:
            cfg[key] = value
    if "kind" in cfg:
        try:
            cfg["kind"] = normalize_kind(cfg["kind"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return cfg


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def _json_number(value: float | None):
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _write(cfg: dict[str, Any], text: str) -> None:
    if cfg.get("output"):
        with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(cfg: dict[str, Any], header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    if cfg.get("format", "csv") == "json":
        payload = {"columns": list(header), "rows": [[_json_number(v) for v in row] for row in rows]}
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jet(cfg: dict[str, Any], gamma: float | None = None, xbar: float | None = None) -> ParamJet:
    return ParamJet.make(
        cfg.get("xbar", 0.0) if xbar is None else xbar,
        cfg.get("pbar", 0.0),
        cfg.get("gamma", 1.0) if gamma is None else gamma,
        cfg.get("dxbar", 0.0),
        cfg.get("dpbar", 0.0),
        cfg.get("dgamma", 0.0),
    )


def _closed(jet: ParamJet, kind: str):
    if kind == "gaussian":
        return qfi_gaussian(jet)
    if kind == "subtracted":
        return qfi_subtracted(jet)
    return qfi_added(jet)


_METHODS: dict[str, Callable] = {"closed": _closed, "moment": qfi_moment, "fock": qfi_fock}


def cmd_wigner(cfg: dict[str, Any]) -> int:
    xs = parse_range(cfg["range"]).values()
    ps = parse_range(cfg["prange"] if cfg["prange"] is not None else cfg["range"]).values()
    w = wigner(GaussianSpec(cfg["xbar"], cfg["pbar"], cfg["gamma"]), cfg["kind"])
    xx, pp = np.meshgrid(xs, ps, indexing="ij")
    values = evaluate(w, xx, pp)
    rows = [(x, p, values[i, j]) for i, x in enumerate(xs) for j, p in enumerate(ps)]
    _write(cfg, _table(cfg, ("x", "p", "w"), rows))
    return EXIT_OK


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def cmd_qfi(cfg: dict[str, Any]) -> int:
    jet = _jet(cfg)
    kind = cfg["kind"]
    names = list(_METHODS) if cfg["method"] == "all" else [cfg["method"]]
    reports = {name: _METHODS[name](jet, kind) for name in names}
    values = {name: rep.value for name, rep in reports.items()}
    residuals = {
        f"{a}-{b}": _relative(values[a], values[b]) for a, b in itertools.combinations(names, 2)
    }
    primary = values[names[0]]
    notes = sorted({note for rep in reports.values() for note in rep.notes})
    tolerance = float(cfg["tolerance"])
    failed = [k for k, v in residuals.items() if not v <= tolerance]
    report = {
        "kind": kind,
        "jet": {"xbar": jet.state.xbar, "pbar": jet.state.pbar, "gamma": jet.state.gamma,
                "dxbar": jet.dxbar, "dpbar": jet.dpbar, "dgamma": jet.dgamma},
        "values": {k: _json_number(v) for k, v in values.items()},
        "residuals": {k: _json_number(v) for k, v in residuals.items()},
        "tolerance": tolerance,
        "conditioning": _json_number(min(rep.conditioning for rep in reports.values())),
        "shots": float(cfg["shots"]),
        "dtheta_min": _json_number(cramer_rao_bound(primary, float(cfg["shots"]))),
        "notes": notes,
        "failed_residuals": failed,
    }
    _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
    if failed:
        print(f"photonqfi: residual above tolerance {tolerance:g}: {', '.join(failed)}", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_sweep(cfg: dict[str, Any]) -> int:
    kind = cfg["kind"]
    xs = parse_range(cfg["xbar_range"]).values()
    gs = parse_range(cfg["gamma_range"]).values()
    coherent = qfi_coherent(cfg["dxbar"], cfg["dpbar"])
    rows = []
    for x in xs:
        for g in gs:
            try:
                value = _closed(_jet(cfg, gamma=float(g), xbar=float(x)), kind).value
            except PhotonQfiError:
                value = math.inf
            ratio = value / coherent if coherent else math.inf
            rows.append((x, g, value, ratio))
    _write(cfg, _table(cfg, ("xbar", "gamma", "qfi", "qfi_over_coherent"), rows))
    return EXIT_OK


def cmd_herald(cfg: dict[str, Any]) -> int:
    rs = parse_range(cfg["r_range"]).values()
    deltas = parse_range(cfg["delta_range"]).values()
    if np.any(rs < 0):
        raise UsageError("squeeze magnitudes r must be non-negative")
    rows, worst = [], 0.0
    for r in rs:
        two_mode = squeezed_coherent(
            SqueezeParams(0j, float(r)), tail_tol=HERALD_TAIL, max_cutoff=int(cfg["max_cutoff"])
        ).tensor_vacuum()
        for d in deltas:
            closed = herald_probability_closed(float(r), float(d))
            try:
                _, simulated = herald_single_photon(apply_beam_splitter(two_mode, float(d)))
            except HeraldingError:
                simulated = 0.0
            worst = max(worst, abs(closed - simulated))
            rows.append((r, d, closed, simulated))
    _write(cfg, _table(cfg, ("r", "delta", "p1_closed", "p1_fock"), rows))
    if not worst < HERALD_TOLERANCE:
        print(f"photonqfi: closed form and simulation differ by {worst:.3g}", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_effective(cfg: dict[str, Any]) -> int:
    r, delta = float(cfg["r"]), float(cfg["delta"])
    if r < 0:
        raise UsageError("squeeze magnitude r must be non-negative")
    jet = _jet(cfg, gamma=math.exp(2 * r))
    raw = qfi_subtracted(jet)
    effective = effective_qfi(jet, r, delta)
    p1 = herald_probability(jet.state, delta)
    report = {
        "r": r,
        "delta": delta,
        "jet": {"xbar": jet.state.xbar, "pbar": jet.state.pbar, "gamma": jet.state.gamma,
                "dxbar": jet.dxbar, "dpbar": jet.dpbar, "dgamma": jet.dgamma},
        "p1": p1,
        "qfi_raw": _json_number(raw.value),
        "qfi_effective": _json_number(effective),
        "small_r_limit": 0.5 * jet.dxbar**2 * math.sin(2 * delta) ** 2,
        "notes": list(raw.notes),
    }
    _write(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "wigner": cmd_wigner,
    "qfi": cmd_qfi,
    "sweep": cmd_sweep,
    "herald": cmd_herald,
    "effective": cmd_effective,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    argv = _join_range_flags(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"photonqfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PhotonQfiError, ValueError, ArithmeticError) as exc:
        print(f"photonqfi {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
