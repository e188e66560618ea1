"""Unitized photovoltaic panel production."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .weather import DEFAULT_ALBEDO, SiteGeometry, WeatherDay, plane_of_array

M2_TO_FT2 = 10.7639


@dataclass(frozen=True)
class PanelSpec:
    efficiency: float = 0.15
    temp_coeff: float = -0.004  # 1/C
    noct: float = 45.0  # C
    unit_area: float = 1.0  # m2

    def __post_init__(self):
        if not 0.0 < self.efficiency < 1.0:
            raise ValueError("efficiency must be in (0, 1)")
        if self.unit_area <= 0:
            raise ValueError("unit_area must be > 0")
        if not 30.0 <= self.noct <= 60.0:
            raise ValueError("noct must be in [30, 60] C")


@dataclass(frozen=True)
class ProductionTrace:
    kwh_per_m2: np.ndarray

    @property
    def daily_kwh_per_m2(self) -> float:
        return float(self.kwh_per_m2.sum())


def cell_temperature(poa: float, ambient: float, noct: float) -> float:
    return ambient + poa * (noct - 20.0) / 800.0


def panel_power(poa: float, ambient: float, spec: PanelSpec) -> float:
    """DC output per m2 of panel (W/m2) with NOCT temperature derating."""
    if poa < 0:
        raise ValueError("poa must be >= 0")
    cell = cell_temperature(poa, ambient, spec.noct)
    return max(0.0, poa * spec.efficiency * (1.0 + spec.temp_coeff * (cell - 25.0)))


def simulate_unit_panel_day(spec: PanelSpec, day: WeatherDay, geo: SiteGeometry,
                            albedo: float = DEFAULT_ALBEDO) -> ProductionTrace:
    out = np.array([
        panel_power(plane_of_array(rec, geo, albedo), rec.dry_bulb, spec) / 1000.0
        for rec in day
    ])
    return ProductionTrace(out)
