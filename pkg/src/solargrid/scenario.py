"""Assemble per-location traces into the 24 x n consumption / production matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import TraceLengthMismatch
from .weather import SiteGeometry

LOCAL_DAY = "local-day"
UTC_ALIGNED = "utc-aligned"
ALIGNMENTS = (LOCAL_DAY, UTC_ALIGNED)

HOURLY_TOTALS_HEADER = ("hour", "consumption_mwh", "production_mwh", "surplus_mwh")


@dataclass(frozen=True)
class LocationSpec:
    name: str
    geometry: SiteGeometry
    population: int
    household_count: int | None = None
    weather_file: str = ""
    house: str = "default"
    water_heater: str = "default"
    zip_load: str = "default"
    schedule: str = "default"

    def __post_init__(self):
        if self.population <= 0:
            raise ValueError(f"{self.name}: population must be > 0")
        if self.household_count is not None and self.household_count <= 0:
            raise ValueError(f"{self.name}: household_count must be > 0")


def household_count(loc: LocationSpec) -> int:
    """Explicit household count, else one household per three residents."""
    if loc.household_count is not None:
        return int(loc.household_count)
    return int(loc.population) // 3


def household_warnings(locations: Sequence[LocationSpec]) -> list[str]:
    out = []
    for loc in locations:
        if loc.household_count is None:
            n = household_count(loc)
            out.append(f"{loc.name}: household count {n} derived from population "
                       f"{loc.population} (population / 3)")
            if n == 0:
                out.append(f"{loc.name}: population {loc.population} yields zero households")
    return out


@dataclass(frozen=True)
class ScenarioMatrices:
    consumption: np.ndarray  # 24 x n, MWh per hour, city scale
    production: np.ndarray  # 24 x n, MWh per hour per m2 of panel
    locations: tuple = ()
    households: tuple = ()
    names: tuple = field(default=())

    def __post_init__(self):
        c = np.asarray(self.consumption, dtype=float)
        p = np.asarray(self.production, dtype=float)
        if c.ndim != 2 or c.shape[0] != 24 or c.shape != p.shape:
            raise TraceLengthMismatch(
                f"matrices must both be 24 x n, got {c.shape} and {p.shape}")
        if (c < 0).any() or (p < 0).any():
            raise ValueError("matrix entries must be >= 0")
        object.__setattr__(self, "consumption", c)
        object.__setattr__(self, "production", p)
        if not self.names:
            names = tuple(loc.name for loc in self.locations) or tuple(
                f"location_{i + 1}" for i in range(c.shape[1]))
            object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.consumption.shape[1]


def build_matrices(locations: Sequence[LocationSpec], traces) -> ScenarioMatrices:
    """Scale per-house traces to city level.

    ``traces`` holds one (consumption, production) pair per location, each
    either a trace object or a plain 24-element sequence (kWh per house,
    kWh per m2).
    """
    if len(traces) != len(locations):
        raise TraceLengthMismatch(
            f"{len(locations)} locations but {len(traces)} trace pairs")
    n = len(locations)
    cons = np.zeros((24, n))
    prod = np.zeros((24, n))
    counts = []
    for i, (loc, (house, panel)) in enumerate(zip(locations, traces)):
        house_kwh = np.asarray(getattr(house, "kwh", house), dtype=float)
        panel_kwh = np.asarray(getattr(panel, "kwh_per_m2", panel), dtype=float)
        if house_kwh.shape != (24,) or panel_kwh.shape != (24,):
            raise TraceLengthMismatch(
                f"{loc.name}: traces must have 24 entries, got "
                f"{house_kwh.size} and {panel_kwh.size}")
        count = household_count(loc)
        counts.append(count)
        cons[:, i] = house_kwh * count / 1000.0
        prod[:, i] = panel_kwh / 1000.0
    return ScenarioMatrices(cons, prod, tuple(locations), tuple(counts))


@dataclass(frozen=True)
class HourlyTotal:
    hour: int  # 1-based
    consumption: float
    production: float

    @property
    def surplus(self) -> float:
        return self.production - self.consumption


def hourly_totals(m: ScenarioMatrices, areas) -> list[HourlyTotal]:
    areas = np.asarray(areas, dtype=float)
    if areas.shape != (m.n,):
        raise ValueError(f"expected {m.n} areas, got {areas.size}")
    if (areas < 0).any():
        raise ValueError("areas must be >= 0")
    prod = m.production @ areas
    cons = m.consumption.sum(axis=1)
    return [HourlyTotal(t + 1, float(cons[t]), float(prod[t])) for t in range(24)]


def fmt6(x: float) -> str:
    """Six significant digits; negative zero prints as 0."""
    text = f"{x:.6g}"
    return "0" if text == "-0" else text


def hourly_totals_csv(rows: Sequence[HourlyTotal]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HOURLY_TOTALS_HEADER)
    for r in rows:
        writer.writerow([r.hour, fmt6(r.consumption), fmt6(r.production), fmt6(r.surplus)])
    return buf.getvalue()
