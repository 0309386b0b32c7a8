"""Sum-rate sweeps over P1, best-scheme maps over (SNR1, SNR2), and their CSV/JSON forms."""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .channel import ChannelParams, Downlink, ValidationError, validate
from .optimizer import SearchConfig, WinnerCell, classify, optimize_sum_rate, winner_at
from .schemes import ACHIEVABLE, Scheme

# Searched optima carry grid error, so comparisons between them use this band.
SEARCH_TIE_TOL = 1e-4

SWEEP_COLUMNS = (
    "p1", "p2", "n0", "ub", "cdf", "fdf_nested", "fdf_rs_sim", "fdf_rs_tdm",
    "best_scheme", "best_sum",
)
MAP_COLUMNS = ("snr1", "snr2", "cdf", "fdf_nested", "fdf_rs_sim", "fdf_rs_tdm", "winners", "margin")


class ConfigError(ValidationError):
    """A sweep or map description does not match the schema."""


class OutputError(OSError):
    """Writing results to their destination failed."""


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        # normalise so that equal ranges compare and serialise identically
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        if int(self.count) != self.count:
            raise ValidationError(f"range count must be an integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValidationError("range bounds must be finite")
        if self.start > self.stop:
            raise ValidationError(f"range start {self.start} exceeds stop {self.stop}")
        if self.count < 1 or (self.count == 1 and self.start != self.stop):
            raise ValidationError("range count must be >= 2 (1 only when start == stop)")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    n0: float
    p2: float
    p1_range: Range
    downlink: Optional[Downlink] = None
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self):
        if self.p1_range.start < 0:
            raise ValidationError("p1_range must be nonnegative")
        validate(ChannelParams(self.p1_range.start, self.p2, self.n0, self.downlink))


@dataclass(frozen=True)
class MapSpec:
    snr1_range: Range = Range(0.0, 5.0, 101)
    snr2_range: Range = Range(0.0, 5.0, 101)
    n0: float = 2.0
    tie_tol: float = SEARCH_TIE_TOL
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self):
        if self.snr1_range.start < 0 or self.snr2_range.start < 0:
            raise ValidationError("SNR ranges must be nonnegative")
        if not (math.isfinite(self.n0) and self.n0 > 0):
            raise ValidationError("n0 must be > 0")
        if not self.tie_tol > 0:
            raise ValidationError("tie_tol must be > 0")


@dataclass(frozen=True)
class SweepRow:
    p1: float
    p2: float
    n0: float
    ub: float
    cdf: float
    fdf_nested: float
    fdf_rs_sim: float
    fdf_rs_tdm: float
    best_scheme: Scheme
    best_sum: float
    best_params: Dict[str, Dict[str, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: Tuple[SweepRow, ...]


@dataclass(frozen=True)
class MapResult:
    spec: MapSpec
    cells: Tuple[WinnerCell, ...]

    def grid(self) -> List[List[WinnerCell]]:
        """Cells as ``grid[i2][i1]`` (rows follow SNR2, columns SNR1)."""
        n1 = self.spec.snr1_range.count
        return [list(self.cells[i:i + n1]) for i in range(0, len(self.cells), n1)]


Result = Union[SweepResult, MapResult]


# ---------------------------------------------------------------------------
# Runs


def sum_rate_sweep(spec: SweepSpec) -> SweepResult:
    """Optimised sum rate of every scheme, plus the outer bound, per P1 point."""
    rows = []
    for p1 in spec.p1_range.values():
        params = ChannelParams(float(p1), spec.p2, spec.n0, spec.downlink)
        ub = optimize_sum_rate(Scheme.OUTER_BOUND, params, spec.search).sum_rate
        results = {s: optimize_sum_rate(s, params, spec.search) for s in ACHIEVABLE}
        sums = {s: r.sum_rate for s, r in results.items()}
        winners, _ = classify(sums, SEARCH_TIE_TOL)
        best = winners[0]
        rows.append(
            SweepRow(
                p1=float(p1), p2=float(spec.p2), n0=float(spec.n0), ub=ub,
                cdf=sums[Scheme.CDF],
                fdf_nested=sums[Scheme.FDF_NESTED],
                fdf_rs_sim=sums[Scheme.FDF_RS_SIM],
                fdf_rs_tdm=sums[Scheme.FDF_RS_TDM],
                best_scheme=best,
                best_sum=sums[best],
                best_params={s.slug: r.params_dict for s, r in results.items() if s.n_params},
            )
        )
    return SweepResult(spec, tuple(rows))


def _canonical_cell(args) -> Tuple[Dict[Scheme, float], Tuple[Scheme, ...], float]:
    hi, lo, n0, search, tie_tol = args
    cell = winner_at(ChannelParams(hi * n0, lo * n0, n0), search, tie_tol)
    return cell.sums, cell.winners, cell.margin


def winner_map(spec: MapSpec, workers: Optional[int] = None) -> MapResult:
    """Best-scheme classification on the (SNR1, SNR2) grid.

    Each unordered SNR pair is solved once with the stronger user first, so
    the map is symmetric across the diagonal by construction.  ``workers > 1``
    spreads the distinct pairs over processes; output order is unaffected.
    """
    s1s = [float(v) for v in spec.snr1_range.values()]
    s2s = [float(v) for v in spec.snr2_range.values()]
    keys = sorted({(max(a, b), min(a, b)) for a in s1s for b in s2s})
    jobs = [(hi, lo, spec.n0, spec.search, spec.tie_tol) for hi, lo in keys]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(_canonical_cell, jobs, chunksize=32))
    else:
        solved = [_canonical_cell(j) for j in jobs]
    table = dict(zip(keys, solved))
    cells = []
    for b in s2s:
        for a in s1s:
            sums, winners, margin = table[(max(a, b), min(a, b))]
            cells.append(WinnerCell(a, b, dict(sums), winners, margin))
    return MapResult(spec, tuple(cells))


# ---------------------------------------------------------------------------
# Spec <-> dict


def _range_dict(r: Range) -> dict:
    return {"start": r.start, "stop": r.stop, "count": r.count}


def _search_dict(s: SearchConfig) -> dict:
    return {
        "coarse_grid": s.coarse_grid,
        "refine_iters": s.refine_iters,
        "refine_shrink": float(s.refine_shrink),
        "tol": float(s.tol),
    }


def spec_to_dict(spec: Union[SweepSpec, MapSpec]) -> dict:
    if isinstance(spec, SweepSpec):
        dl = spec.downlink
        return {
            "n0": float(spec.n0),
            "p2": float(spec.p2),
            "p1_range": _range_dict(spec.p1_range),
            "downlink": None if dl is None else {"p0": float(dl.p0), "n1": float(dl.n1), "n2": float(dl.n2)},
            "search": _search_dict(spec.search),
        }
    return {
        "snr1_range": _range_dict(spec.snr1_range),
        "snr2_range": _range_dict(spec.snr2_range),
        "n0": float(spec.n0),
        "tie_tol": float(spec.tie_tol),
        "search": _search_dict(spec.search),
    }


def _obj(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path or 'config'}: expected an object")
    return value


def _keys(d: dict, allowed, required, path: str):
    for k in d:
        if k not in allowed:
            where = f"{path}.{k}" if path else k
            raise ConfigError(f"{where}: unknown key")
    for k in required:
        if k not in d:
            where = f"{path}.{k}" if path else k
            raise ConfigError(f"{where}: missing required key")


def _num(d: dict, key: str, path: str, integer: bool = False):
    v = d[key]
    where = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}: expected a number")
    if integer:
        if int(v) != v:
            raise ConfigError(f"{where}: expected an integer")
        return int(v)
    return float(v)


def _parse(build, path: str):
    try:
        return build()
    except ConfigError:
        raise
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from None


def _range_from(d, path: str) -> Range:
    d = _obj(d, path)
    _keys(d, ("start", "stop", "count"), ("start", "stop", "count"), path)
    return _parse(
        lambda: Range(_num(d, "start", path), _num(d, "stop", path), _num(d, "count", path, True)),
        path,
    )


def _search_from(d, path: str = "search") -> SearchConfig:
    d = _obj(d, path)
    fields_ = {"coarse_grid": True, "refine_iters": True, "refine_shrink": False, "tol": False}
    _keys(d, fields_, (), path)
    kwargs = {k: _num(d, k, path, integer) for k, integer in fields_.items() if k in d}
    return _parse(lambda: SearchConfig(**kwargs), path)


def _downlink_from(d, path: str = "downlink") -> Optional[Downlink]:
    if d is None:
        return None
    d = _obj(d, path)
    _keys(d, ("p0", "n1", "n2"), ("p0", "n1", "n2"), path)
    return Downlink(_num(d, "p0", path), _num(d, "n1", path), _num(d, "n2", path))


def sweep_spec_from_dict(d: dict) -> SweepSpec:
    d = _obj(d, "")
    _keys(d, ("n0", "p2", "p1_range", "downlink", "search"), ("n0", "p2", "p1_range"), "")
    p1_range = _range_from(d["p1_range"], "p1_range")
    search = _search_from(d["search"]) if "search" in d else SearchConfig()
    downlink = _downlink_from(d.get("downlink"))
    return _parse(
        lambda: SweepSpec(_num(d, "n0", ""), _num(d, "p2", ""), p1_range, downlink, search), ""
    )


def map_spec_from_dict(d: dict) -> MapSpec:
    d = _obj(d, "")
    _keys(d, ("snr1_range", "snr2_range", "n0", "tie_tol", "search"), (), "")
    kwargs = {}
    for key in ("snr1_range", "snr2_range"):
        if key in d:
            kwargs[key] = _range_from(d[key], key)
    for key in ("n0", "tie_tol"):
        if key in d:
            kwargs[key] = _num(d, key, "")
    if "search" in d:
        kwargs["search"] = _search_from(d["search"])
    return _parse(lambda: MapSpec(**kwargs), "")


def spec_from_dict(d: dict, kind: Optional[str] = None) -> Union[SweepSpec, MapSpec]:
    """Parse a sweep or map description; ``kind`` is inferred when omitted."""
    d = _obj(d, "")
    if kind is None:
        kind = "sweep" if "p1_range" in d else "map"
    if kind == "sweep":
        return sweep_spec_from_dict(d)
    if kind == "map":
        return map_spec_from_dict(d)
    raise ValueError(f"unknown spec kind {kind!r}")


# ---------------------------------------------------------------------------
# Serialisation


def _fmt(x) -> str:
    if isinstance(x, Scheme):
        return x.value
    if isinstance(x, str):
        return x
    return format(float(x), ".9g")


def _winners_field(winners) -> str:
    return "|".join(s.value for s in ACHIEVABLE if s in winners)


def _sweep_record(row: SweepRow) -> dict:
    return {
        "p1": row.p1, "p2": row.p2, "n0": row.n0, "ub": row.ub,
        "cdf": row.cdf, "fdf_nested": row.fdf_nested,
        "fdf_rs_sim": row.fdf_rs_sim, "fdf_rs_tdm": row.fdf_rs_tdm,
        "best_scheme": row.best_scheme.value, "best_sum": row.best_sum,
    }


def _map_record(cell: WinnerCell) -> dict:
    return {
        "snr1": cell.snr1, "snr2": cell.snr2,
        **{s.slug: cell.sums[s] for s in ACHIEVABLE},
        "winners": _winners_field(cell.winners),
        "margin": cell.margin,
    }


def _records(result: Result):
    if isinstance(result, SweepResult):
        return SWEEP_COLUMNS, [_sweep_record(r) for r in result.rows]
    return MAP_COLUMNS, [_map_record(c) for c in result.cells]


def _deliver(text: str, destination) -> str:
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
        return text
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text


def emit_csv(result: Result, destination=None) -> str:
    """CSV text (9 significant digits, ``\\n`` line ends); also written to ``destination``."""
    columns, records = _records(result)
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for rec in records:
        buf.write(",".join(_fmt(rec[c]) for c in columns) + "\n")
    return _deliver(buf.getvalue(), destination)


def emit_json(result: Result, destination=None) -> str:
    """JSON text ``{"spec": ..., "rows": [...]}`` at full float precision."""
    _, records = _records(result)
    if isinstance(result, SweepResult):
        for rec, row in zip(records, result.rows):
            rec["best_params"] = row.best_params
    doc = {"spec": spec_to_dict(result.spec), "rows": records}
    return _deliver(json.dumps(doc, indent=2, allow_nan=False) + "\n", destination)


def load_json(text: str) -> Result:
    """Inverse of :func:`emit_json`."""
    doc = json.loads(text)
    spec = spec_from_dict(doc["spec"])
    if isinstance(spec, SweepSpec):
        rows = tuple(
            SweepRow(
                **{k: r[k] for k in SWEEP_COLUMNS if k != "best_scheme"},
                best_scheme=Scheme(r["best_scheme"]),
                best_params=r.get("best_params", {}),
            )
            for r in doc["rows"]
        )
        return SweepResult(spec, rows)
    cells = tuple(
        WinnerCell(
            r["snr1"], r["snr2"],
            {s: r[s.slug] for s in ACHIEVABLE},
            tuple(Scheme(w) for w in r["winners"].split("|")),
            r["margin"],
        )
        for r in doc["rows"]
    )
    return MapResult(spec, cells)
