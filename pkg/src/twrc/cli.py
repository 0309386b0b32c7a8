"""Command-line front end: ``twrc {rate,region,sweep,map}``.

Data goes to stdout (or ``--out``); diagnostics go to stderr as one line.
Exit status is 0 on success, 2 for bad arguments or parameters, 1 for I/O
failures.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .channel import ChannelParams, Downlink, ValidationError, validate
from .experiments import (
    ConfigError,
    MapSpec,
    OutputError,
    Range,
    SweepSpec,
    emit_csv,
    emit_json,
    spec_from_dict,
    sum_rate_sweep,
    winner_map,
)
from .optimizer import SearchConfig, optimize_sum_rate, pareto_frontier
from .schemes import Scheme


class UsageError(Exception):
    pass


class ConfigReadError(OSError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_config(path, kind: Optional[str] = None):
    """Read a JSON sweep/map description; unknown keys are rejected."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigReadError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return spec_from_dict(doc, kind)


def _from_db(x: float) -> float:
    return 10.0 ** (x / 10.0)


def _channel_from_args(args) -> ChannelParams:
    vals = {k: getattr(args, k) for k in ("p1", "p2", "n0", "p0", "n1", "n2")}
    dl_given = [vals[k] is not None for k in ("p0", "n1", "n2")]
    if any(dl_given) and not all(dl_given):
        raise UsageError("--p0, --n1 and --n2 must be given together")
    if args.db:
        vals = {k: (None if v is None else _from_db(v)) for k, v in vals.items()}
    dl = Downlink(vals["p0"], vals["n1"], vals["n2"]) if all(dl_given) else None
    return validate(ChannelParams(vals["p1"], vals["p2"], vals["n0"], dl))


def _search_from_args(args, base: Optional[SearchConfig] = None) -> SearchConfig:
    base = base or SearchConfig()
    return SearchConfig(
        coarse_grid=args.grid if args.grid is not None else base.coarse_grid,
        refine_iters=args.refine_iters if args.refine_iters is not None else base.refine_iters,
        refine_shrink=base.refine_shrink,
        tol=args.tol if args.tol is not None else base.tol,
    )


def _add_channel(p, required=True):
    g = p.add_argument_group("channel")
    g.add_argument("--p1", type=float, required=required, help="user 1 uplink power")
    g.add_argument("--p2", type=float, required=required, help="user 2 uplink power")
    g.add_argument("--n0", type=float, required=required, help="uplink noise power at the relay")
    g.add_argument("--p0", type=float, help="relay downlink power (enables the downlink)")
    g.add_argument("--n1", type=float, help="downlink noise power at user 1")
    g.add_argument("--n2", type=float, help="downlink noise power at user 2")
    g.add_argument("--db", action="store_true", help="read powers and noises in dB")


def _add_search(p):
    g = p.add_argument_group("search")
    g.add_argument("--grid", type=int, help="grid points per parameter axis (default 201)")
    g.add_argument("--refine-iters", type=int, help="local refinement passes (default 3)")
    g.add_argument("--tol", type=float, help="stop refining below this gain (default 1e-6)")


def _add_output(p):
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    g.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twrc", description="AWGN two-way relay channel rate regions")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="{rate,region,sweep,map}")
    sub.required = True
    schemes = [s.slug for s in Scheme]

    rate = sub.add_parser("rate", help="maximum sum rate of one scheme")
    rate.add_argument("--scheme", required=True, choices=schemes)
    _add_channel(rate)
    _add_search(rate)
    rate.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")

    region = sub.add_parser("region", help="Pareto frontier of one scheme")
    region.add_argument("--scheme", required=True, choices=schemes)
    region.add_argument("--points", type=int, default=21, help="number of frontier points")
    _add_channel(region)
    _add_search(region)
    _add_output(region)

    sweep = sub.add_parser("sweep", help="sum rate of every scheme while P1 varies")
    sweep.add_argument("--config", metavar="FILE", help="JSON sweep description")
    sweep.add_argument("--n0", type=float, help="uplink noise power")
    sweep.add_argument("--p2", type=float, help="fixed user 2 power")
    sweep.add_argument("--p1-start", type=float)
    sweep.add_argument("--p1-stop", type=float)
    sweep.add_argument("--p1-count", type=int)
    sweep.add_argument("--p0", type=float, help="relay downlink power (enables the downlink)")
    sweep.add_argument("--n1", type=float)
    sweep.add_argument("--n2", type=float)
    _add_search(sweep)
    _add_output(sweep)

    mp = sub.add_parser("map", help="best scheme over an (SNR1, SNR2) grid")
    mp.add_argument("--config", metavar="FILE", help="JSON map description")
    mp.add_argument("--snr-max", type=float, help="upper end of both SNR axes (default 5)")
    mp.add_argument("--snr-count", type=int, help="points per SNR axis (default 101)")
    mp.add_argument("--n0", type=float, help="uplink noise power (default 2)")
    mp.add_argument("--tie-tol", type=float, help="sum-rate band treated as a tie (default 1e-4)")
    mp.add_argument("--workers", type=int, default=1, help="worker processes")
    _add_search(mp)
    _add_output(mp)
    return parser


def _search_given(args) -> bool:
    return any(getattr(args, k) is not None for k in ("grid", "refine_iters", "tol"))


def _sweep_spec(args) -> SweepSpec:
    inline = ("n0", "p2", "p1_start", "p1_stop", "p1_count", "p0", "n1", "n2")
    if args.config:
        if any(getattr(args, k) is not None for k in inline):
            raise UsageError("--config cannot be combined with inline sweep flags")
        spec = load_config(args.config, "sweep")
        if _search_given(args):
            spec = SweepSpec(spec.n0, spec.p2, spec.p1_range, spec.downlink,
                             _search_from_args(args, spec.search))
        return spec
    missing = [k for k in inline[:5] if getattr(args, k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"sweep needs --config or {flags}")
    dl_vals = [args.p0, args.n1, args.n2]
    if any(v is not None for v in dl_vals) and not all(v is not None for v in dl_vals):
        raise UsageError("--p0, --n1 and --n2 must be given together")
    dl = Downlink(*dl_vals) if all(v is not None for v in dl_vals) else None
    return SweepSpec(
        args.n0, args.p2, Range(args.p1_start, args.p1_stop, args.p1_count), dl,
        _search_from_args(args),
    )


def _map_spec(args) -> MapSpec:
    if args.config:
        spec = load_config(args.config, "map")
    else:
        spec = MapSpec()
    if args.snr_max is not None or args.snr_count is not None:
        r = spec.snr1_range
        hi = args.snr_max if args.snr_max is not None else r.stop
        n = args.snr_count if args.snr_count is not None else r.count
        spec = MapSpec(Range(0.0, hi, n), Range(0.0, hi, n), spec.n0, spec.tie_tol, spec.search)
    return MapSpec(
        spec.snr1_range,
        spec.snr2_range,
        args.n0 if args.n0 is not None else spec.n0,
        args.tie_tol if args.tie_tol is not None else spec.tie_tol,
        _search_from_args(args, spec.search),
    )


def _write(text: str, out: Optional[str], stdout):
    if out is None:
        stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc.strerror or exc}") from exc


def _frontier_text(points, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"points": [[p.r1, p.r2] for p in points]}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("r1,r2\n")
    for p in points:
        buf.write(f"{p.r1:.9g},{p.r2:.9g}\n")
    return buf.getvalue()


def _dispatch(args, stdout):
    if args.command == "rate":
        params = _channel_from_args(args)
        result = optimize_sum_rate(Scheme.parse(args.scheme), params, _search_from_args(args))
        _write(json.dumps(result.to_dict(), indent=2) + "\n", args.out, stdout)
    elif args.command == "region":
        if args.points < 2:
            raise UsageError("--points must be >= 2")
        params = _channel_from_args(args)
        pts = pareto_frontier(Scheme.parse(args.scheme), params, _search_from_args(args), args.points)
        _write(_frontier_text(pts, args.format), args.out, stdout)
    else:
        if args.command == "sweep":
            result = sum_rate_sweep(_sweep_spec(args))
        else:
            result = winner_map(_map_spec(args), workers=args.workers)
        emit = emit_json if args.format == "json" else emit_csv
        _write(emit(result), args.out, stdout)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"twrc: error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        _dispatch(args, stdout)
    except (UsageError, ValidationError, ConfigError, ValueError) as exc:
        stderr.write(f"twrc: error: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"twrc: error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
