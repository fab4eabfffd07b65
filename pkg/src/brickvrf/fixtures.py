"""Synthetic telemetry for the two-office application sector.

Stands in for the gateway and weather feeds: hourly outside-air
temperature plus per-office energy readings that follow known
change-point baselines, so analysis results are checkable against the
generating parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .timeseries import Sample
from .vrf import APPLICATION_GRAPH


@dataclass(frozen=True)
class ZoneProfile:
    meter_id: str
    base_load: float
    breakpoint_temp: float
    cooling_slope: float


OAT_STREAM = APPLICATION_GRAPH + "Outside_Air_Temperature"

DEFAULT_PROFILES = (
    ZoneProfile(APPLICATION_GRAPH + "Office_1_meter", 3.0, 18.0, 0.8),
    ZoneProfile(APPLICATION_GRAPH + "Office_2_meter", 5.0, 16.0, 1.2),
)


def baseline_energy(profile: ZoneProfile, temperature: float) -> float:
    return profile.base_load + max(0.0, temperature - profile.breakpoint_temp) * profile.cooling_slope


def application_fixture_samples(
    start: int = 0,
    hours: int = 96,
    seed: int = 20,
    noise: float = 0.0,
    profiles: tuple[ZoneProfile, ...] = DEFAULT_PROFILES,
) -> list[Sample]:
    """Hourly OAT plus meter rows over `hours` hours from `start`.

    Temperatures sweep 10..30 °C on a grid-friendly 0.5° lattice so a
    0.5° change-point search can land exactly on the generating
    breakpoint; optional Gaussian noise perturbs the energy only.
    """
    rng = random.Random(seed)
    rows: list[Sample] = []
    for h in range(hours):
        t = start + h * 3600
        temperature = 10.0 + 0.5 * (h % 41)
        rows.append(Sample(OAT_STREAM, t, temperature))
        for profile in profiles:
            energy = baseline_energy(profile, temperature)
            if noise > 0.0:
                energy += rng.gauss(0.0, noise)
            rows.append(Sample(profile.meter_id, t, energy))
    return rows


def application_fixture_csv(**kwargs) -> str:
    """The same rows as `id,time,value` CSV with a header."""
    lines = ["id,time,value"]
    for s in application_fixture_samples(**kwargs):
        lines.append(f"{s.stream_id},{s.timestamp},{s.value!r}")
    return "\n".join(lines) + "\n"
