"""Per-zone energy-baseline analysis.

Aligns outside-air temperature against zone energy on a fixed interval,
fits either an ordinary least-squares line or a three-parameter cooling
change-point model, and fans a fixed set of semantic queries out over
every HVAC zone in a model so all zones are analyzed in one call.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BrickVrfError
from .query import evaluate, parse_query
from .rdf import BRICK_NS, Graph, IRI
from .timeseries import Sample, TimeseriesStore


class DegenerateInput(BrickVrfError):
    pass


class NoOutsideTemperature(BrickVrfError):
    def __init__(self) -> None:
        super().__init__("model has no outside-air temperature point")


@dataclass(frozen=True)
class AlignedSeries:
    """Temperature/energy pairs aggregated on a common interval.

    Each bucket keeps its start time so residuals can be inspected
    against the clock; temperature is the bucket mean, energy the bucket
    sum.
    """

    pairs: tuple[tuple[float, float], ...]  # (temperature, energy)
    interval: int
    times: tuple[int, ...] = ()  # bucket start times, same length as pairs

    @property
    def count(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class BaselineFit:
    kind: str  # linear | changepoint
    n: int
    sse: float
    r_squared: float
    intercept: float | None = None
    slope: float | None = None
    base_load: float | None = None
    breakpoint_temp: float | None = None
    cooling_slope: float | None = None

    def predict(self, temperature: float) -> float:
        if self.kind == "linear":
            return self.intercept + self.slope * temperature
        return self.base_load + max(0.0, temperature - self.breakpoint_temp) * self.cooling_slope

    def residuals(self, series: AlignedSeries) -> list[float]:
        return [energy - self.predict(temp) for temp, energy in series.pairs]


def align(
    temperature: Sequence[Sample],
    energy: Sequence[Sample],
    interval: int,
) -> AlignedSeries:
    """Bucket both streams by floor(t / interval) and keep shared buckets.

    Temperature aggregates by mean, energy by sum; buckets present in only
    one stream are dropped.  An empty result is fine.
    """
    if interval <= 0:
        raise ValueError("interval must be positive")
    temp_buckets: dict[int, list[float]] = {}
    for s in temperature:
        temp_buckets.setdefault(s.timestamp // interval, []).append(s.value)
    energy_buckets: dict[int, float] = {}
    for s in energy:
        energy_buckets[s.timestamp // interval] = energy_buckets.get(s.timestamp // interval, 0.0) + s.value
    shared = sorted(temp_buckets.keys() & energy_buckets.keys())
    pairs = tuple(
        (sum(temp_buckets[b]) / len(temp_buckets[b]), energy_buckets[b]) for b in shared
    )
    return AlignedSeries(pairs, interval, tuple(b * interval for b in shared))


def _least_squares_line(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Solve min over (a, b) of sum((y - a - b*x)^2) by normal equations.

    A constant x column leaves b unidentifiable; then b = 0 and a = mean(y)
    is the deterministic choice.
    """
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    det = n * sxx - sx * sx
    if det <= 0.0:
        return (sy / n, 0.0)
    b = (n * sxy - sx * sy) / det
    a = (sy - b * sx) / n
    return (a, b)


def _sse(xs: Sequence[float], ys: Sequence[float], a: float, b: float) -> float:
    return sum((y - a - b * x) ** 2 for x, y in zip(xs, ys))


def _r_squared(ys: Sequence[float], sse: float) -> float:
    mean = sum(ys) / len(ys)
    sst = sum((y - mean) ** 2 for y in ys)
    if sst == 0.0:
        # constant energy fitted exactly: perfect by convention
        return 1.0
    return min(1.0, max(0.0, 1.0 - sse / sst))


def fit_linear(series: AlignedSeries) -> BaselineFit:
    """Ordinary least squares energy = intercept + slope * temperature."""
    temps = [t for t, _ in series.pairs]
    energies = [e for _, e in series.pairs]
    if len(temps) < 2:
        raise DegenerateInput(f"need at least 2 aligned pairs, have {len(temps)}")
    if max(temps) == min(temps):
        raise DegenerateInput("temperature is constant across the window")
    a, b = _least_squares_line(temps, energies)
    sse = _sse(temps, energies, a, b)
    return BaselineFit(
        kind="linear",
        n=len(temps),
        sse=sse,
        r_squared=_r_squared(energies, sse),
        intercept=a,
        slope=b,
    )


def fit_changepoint(series: AlignedSeries, grid: float = 0.5) -> BaselineFit:
    """Cooling change-point model energy = base + max(0, t - bp) * slope.

    The breakpoint is grid-searched over [min t, max t]; the other two
    parameters come from least squares at each candidate.  Ties go to the
    lowest breakpoint, and the candidate at min t makes the model nest the
    plain line, so its SSE never exceeds the linear fit's.
    """
    if grid <= 0:
        raise ValueError("grid must be positive")
    temps = [t for t, _ in series.pairs]
    energies = [e for _, e in series.pairs]
    if len(temps) < 4:
        raise DegenerateInput(f"need at least 4 aligned pairs, have {len(temps)}")
    if max(temps) == min(temps):
        raise DegenerateInput("temperature is constant across the window")
    t_min, t_max = min(temps), max(temps)
    best: tuple[float, float, float, float] | None = None  # (sse, bp, base, slope)
    bp = t_min
    k = 0
    while bp <= t_max + 1e-12:
        xs = [max(0.0, t - bp) for t in temps]
        base, slope = _least_squares_line(xs, energies)
        sse = _sse(xs, energies, base, slope)
        if best is None or sse < best[0]:
            best = (sse, bp, base, slope)
        k += 1
        bp = t_min + k * grid
    sse, bp, base, slope = best
    return BaselineFit(
        kind="changepoint",
        n=len(temps),
        sse=sse,
        r_squared=_r_squared(energies, sse),
        base_load=base,
        breakpoint_temp=bp,
        cooling_slope=slope,
    )


def fit_series(series: AlignedSeries, method: str, grid: float = 0.5) -> BaselineFit:
    if method == "linear":
        return fit_linear(series)
    if method == "changepoint":
        return fit_changepoint(series, grid)
    raise ValueError(f"unknown baseline method {method!r}")


@dataclass
class ZoneAnalysis:
    """Outcome for one HVAC zone: a fit, or the reason there is none.

    points lists the IRIs whose telemetry the analysis consumed (meter
    first, then the outside-air temperature point).
    """

    zone: str
    points: list[str] = field(default_factory=list)
    fit: BaselineFit | None = None
    error: str | None = None
    series: AlignedSeries | None = None


_ZONES_QUERY = f"""
PREFIX brick: <{BRICK_NS}>
SELECT ?zone WHERE {{ ?zone a brick:HVAC_Zone . }}
"""

_METER_QUERY = f"""
PREFIX brick: <{BRICK_NS}>
SELECT ?zone ?meter WHERE {{
  ?zone a brick:HVAC_Zone .
  ?zone brick:hasPoint ?meter .
  ?meter a brick:Energy_Sensor .
}}
"""

_OAT_QUERY = f"""
PREFIX brick: <{BRICK_NS}>
SELECT ?point WHERE {{ ?point a brick:Outside_Air_Temperature_Sensor . }}
"""


def analyze_zones(
    model: Graph,
    store: TimeseriesStore,
    window: tuple[int, int],
    interval: int,
    method: str,
    grid: float = 0.5,
) -> dict[str, ZoneAnalysis]:
    """Fit a baseline for every HVAC zone in a materialized model.

    One semantic query finds the zones, their energy meters, and the
    building's outside-air temperature point; each zone's meter stream is
    aligned with the shared temperature stream over the window and fitted.
    Zones without a meter or with too little data appear in the result
    with an error, never silently dropped.
    """
    resolver = {None: model}
    zones = [row[0] for row in evaluate(parse_query(_ZONES_QUERY), resolver).rows]
    meters: dict[str, str] = {}
    for zone, meter in evaluate(parse_query(_METER_QUERY), resolver).rows:
        meters.setdefault(zone.value, meter.value)
    oat_rows = evaluate(parse_query(_OAT_QUERY), resolver).rows
    if not oat_rows:
        raise NoOutsideTemperature()
    oat_point = oat_rows[0][0].value

    t0, t1 = window
    out: dict[str, ZoneAnalysis] = {}
    for zone_term in zones:
        zone = zone_term.value if isinstance(zone_term, IRI) else str(zone_term)
        analysis = ZoneAnalysis(zone)
        out[zone] = analysis
        meter = meters.get(zone)
        if meter is None:
            analysis.error = "NoEnergyMeter"
            continue
        analysis.points = [meter, oat_point]
        ranged = store.range([meter, oat_point], t0, t1)
        series = align(ranged[oat_point], ranged[meter], interval)
        analysis.series = series
        try:
            analysis.fit = fit_series(series, method, grid)
        except DegenerateInput as exc:
            analysis.error = f"DegenerateInput: {exc}"
    return out


# -- shared report rendering (CLI and HTTP must emit identical bytes) ----


def fit_to_dict(fit: BaselineFit) -> dict:
    out: dict[str, object] = {
        "kind": fit.kind,
        "n": fit.n,
        "sse": fit.sse,
        "r_squared": fit.r_squared,
    }
    if fit.kind == "linear":
        out["intercept"] = fit.intercept
        out["slope"] = fit.slope
    else:
        out["base_load"] = fit.base_load
        out["breakpoint_temp"] = fit.breakpoint_temp
        out["cooling_slope"] = fit.cooling_slope
    return out


def baseline_report(
    model: Graph,
    store: TimeseriesStore,
    window: tuple[int, int],
    interval: int,
    method: str,
    grid: float = 0.5,
    graph_name: str | None = None,
) -> dict:
    analyses = analyze_zones(model, store, window, interval, method, grid)
    zones: dict[str, dict] = {}
    for zone, analysis in analyses.items():
        entry: dict[str, object] = {"points": analysis.points}
        if analysis.fit is not None:
            entry["fit"] = fit_to_dict(analysis.fit)
            entry["pairs"] = [list(p) for p in analysis.series.pairs]
            entry["times"] = list(analysis.series.times)
        else:
            entry["error"] = analysis.error
        zones[zone] = entry
    report: dict[str, object] = {
        "window": [window[0], window[1]],
        "interval": interval,
        "method": method,
        "zones": zones,
    }
    if graph_name is not None:
        report["graph"] = graph_name
    return report


def render_report(report: dict) -> str:
    """Canonical JSON used verbatim by both the CLI and the HTTP API."""
    return json.dumps(report, indent=2, sort_keys=True)
