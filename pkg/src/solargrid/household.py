"""Single-house hourly consumption: two-node thermal HVAC, water heater, ZIP load."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NonFiniteState
from .weather import DEFAULT_ALBEDO, SiteGeometry, WeatherDay, plane_of_array

SUBSTEPS_PER_HOUR = 60
WATER_HEAT_CAPACITY = 4186.0  # J/(L.C)
J_PER_KWH = 3.6e6
FT2_TO_M2 = 0.09290304
CEILING_HEIGHT_M = 2.4384  # 8 ft
AIR_VOLUMETRIC_HEAT = 1.2 * 1006.0  # J/(m3.C)
# Furniture and partitions roughly triple the effective air-node capacitance.
AIR_MASS_MULTIPLIER = 3.0
TEMP_LIMIT = 1000.0

HEAT, COOL, OFF = "heat", "cool", "off"


@dataclass(frozen=True)
class HouseModel:
    floor_area: float  # ft2
    envelope_ua: float  # W/C
    mass_capacitance: float  # J/C
    mass_surface_conductance: float  # W/C
    glazing_gain_fraction: float
    window_area: float  # m2
    hvac_capacity: float  # W thermal
    hvac_cop_cool: float
    hvac_cop_heat: float
    deadband: float  # C
    air_capacitance: float | None = None  # J/C, derived from floor area when None

    def __post_init__(self):
        for name in ("floor_area", "mass_capacitance", "hvac_capacity",
                     "hvac_cop_cool", "hvac_cop_heat", "deadband"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        # Conductances may be zero for idealised (adiabatic) test houses.
        for name in ("envelope_ua", "mass_surface_conductance", "window_area"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.glazing_gain_fraction <= 1.0:
            raise ValueError("glazing_gain_fraction must be in [0, 1]")
        if self.air_capacitance is not None and self.air_capacitance <= 0:
            raise ValueError("air_capacitance must be > 0")

    @property
    def air_heat_capacity(self) -> float:
        if self.air_capacitance is not None:
            return self.air_capacitance
        volume = self.floor_area * FT2_TO_M2 * CEILING_HEIGHT_M
        return AIR_MASS_MULTIPLIER * volume * AIR_VOLUMETRIC_HEAT


@dataclass(frozen=True)
class WaterHeater:
    tank_volume: float  # L
    setpoint: float  # C
    inlet_temp: float  # C
    heater_power: float  # W
    standby_ua: float  # W/C

    def __post_init__(self):
        if self.tank_volume <= 0:
            raise ValueError("tank_volume must be > 0")
        if self.setpoint <= self.inlet_temp:
            raise ValueError("setpoint must exceed inlet_temp")
        if self.heater_power <= 0:
            raise ValueError("heater_power must be > 0")
        if self.standby_ua < 0:
            raise ValueError("standby_ua must be >= 0")


@dataclass(frozen=True)
class ZipLoad:
    base_power: float  # W at nominal voltage
    z_frac: float
    i_frac: float
    p_frac: float

    def __post_init__(self):
        if self.base_power < 0:
            raise ValueError("base_power must be >= 0")
        if abs(self.z_frac + self.i_frac + self.p_frac - 1.0) > 1e-9:
            raise ValueError("ZIP fractions must sum to 1")


class ScheduleHour(NamedTuple):
    heating_setpoint: float
    cooling_setpoint: float
    hot_water_draw: float
    zip_multiplier: float
    internal_gain: float


@dataclass(frozen=True)
class ScheduleSet:
    heating_setpoint: tuple
    cooling_setpoint: tuple
    hot_water_draw: tuple
    zip_multiplier: tuple
    internal_gain: tuple

    def __post_init__(self):
        for name in ScheduleHour._fields:
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != 24:
                raise ValueError(f"schedule {name} needs 24 entries, got {len(values)}")
            object.__setattr__(self, name, values)
        for name in ("hot_water_draw", "zip_multiplier"):
            if min(getattr(self, name)) < 0:
                raise ValueError(f"schedule {name} must be >= 0")

    def validate(self, deadband: float) -> None:
        for h in range(24):
            if self.cooling_setpoint[h] < self.heating_setpoint[h] + deadband:
                raise ValueError(
                    f"hour {h}: cooling setpoint {self.cooling_setpoint[h]} is below "
                    f"heating setpoint {self.heating_setpoint[h]} + deadband {deadband}")

    def hour(self, h: int) -> ScheduleHour:
        return ScheduleHour(*(getattr(self, name)[h] for name in ScheduleHour._fields))


class ThermalState(NamedTuple):
    air_temp: float
    mass_temp: float
    mode: str = OFF


@dataclass(frozen=True)
class ConsumptionTrace:
    hvac: np.ndarray
    water_heater: np.ndarray
    zip: np.ndarray
    modes: tuple = field(default=(), compare=False)

    @property
    def kwh(self) -> np.ndarray:
        return self.hvac + self.water_heater + self.zip

    @property
    def daily_kwh(self) -> float:
        return float(self.kwh.sum())


def _next_mode(mode: str, air: float, sched: ScheduleHour, deadband: float) -> str:
    half = deadband / 2.0
    if mode == HEAT and air > sched.heating_setpoint + half:
        mode = OFF
    elif mode == COOL and air < sched.cooling_setpoint - half:
        mode = OFF
    if mode == OFF:
        if air < sched.heating_setpoint - half:
            mode = HEAT
        elif air > sched.cooling_setpoint + half:
            mode = COOL
    return mode


def thermal_step(state: ThermalState, house: HouseModel, outdoor: float,
                 sched: ScheduleHour, poa: float, dt: float = 3600.0):
    """Advance the air/mass network by ``dt`` seconds.

    Returns ``(new_state, hvac_electrical_kwh, mode)``; ``mode`` is the
    thermostat mode at the end of the step and is also carried in the state
    so hysteresis continues into the next hour.
    """
    h = dt / SUBSTEPS_PER_HOUR
    ca = house.air_heat_capacity
    cm = house.mass_capacitance
    ua = house.envelope_ua
    hm = house.mass_surface_conductance
    gains = house.glazing_gain_fraction * house.window_area * poa + sched.internal_gain

    air, mass, mode = state
    electrical_j = 0.0
    for _ in range(SUBSTEPS_PER_HOUR):
        mode = _next_mode(mode, air, sched, house.deadband)
        if mode == HEAT:
            q = house.hvac_capacity
            electrical_j += q * h / house.hvac_cop_heat
        elif mode == COOL:
            q = -house.hvac_capacity
            electrical_j += house.hvac_capacity * h / house.hvac_cop_cool
        else:
            q = 0.0
        d_air = (ua * (outdoor - air) + hm * (mass - air) + gains + q) / ca
        d_mass = hm * (air - mass) / cm
        air += h * d_air
        mass += h * d_mass

    if not (math.isfinite(air) and math.isfinite(mass)) or max(abs(air), abs(mass)) > TEMP_LIMIT:
        raise NonFiniteState(
            f"thermal state diverged (air={air}, mass={mass}); "
            f"house parameters violate the sub-step stability limit")
    return ThermalState(air, mass, mode), electrical_j / J_PER_KWH, mode


def water_heater_energy(wh: WaterHeater, draw_l: float, ambient: float) -> float:
    """Electrical kWh the heater uses in one hour."""
    if draw_l < 0:
        raise ValueError("draw must be >= 0")
    draw_j = draw_l * WATER_HEAT_CAPACITY * (wh.setpoint - wh.inlet_temp)
    standby_j = max(0.0, wh.standby_ua * (wh.setpoint - ambient) * 3600.0)
    return min(draw_j + standby_j, wh.heater_power * 3600.0) / J_PER_KWH


def zip_power(z: ZipLoad, v_ratio: float, mult: float) -> float:
    """ZIP load real power in W."""
    if v_ratio <= 0:
        raise ValueError("v_ratio must be > 0")
    if mult < 0:
        raise ValueError("mult must be >= 0")
    return mult * z.base_power * (z.z_frac * v_ratio ** 2 + z.i_frac * v_ratio + z.p_frac)


def simulate_house_day(house: HouseModel, wh: WaterHeater, zip_load: ZipLoad,
                       sched: ScheduleSet, day: WeatherDay, geo: SiteGeometry,
                       albedo: float = DEFAULT_ALBEDO) -> ConsumptionTrace:
    sched.validate(house.deadband)
    first_hour = day[0].timestamp.hour
    t0 = sched.heating_setpoint[first_hour]
    state = ThermalState(t0, t0, OFF)

    hvac = np.zeros(24)
    water = np.zeros(24)
    appliances = np.zeros(24)
    modes = []
    for i, rec in enumerate(day):
        s = sched.hour(rec.timestamp.hour)
        poa = plane_of_array(rec, geo, albedo)
        # Tank sits indoors; standby loss uses the air temperature entering the hour.
        water[i] = water_heater_energy(wh, s.hot_water_draw, state.air_temp)
        try:
            state, hvac[i], mode = thermal_step(state, house, rec.dry_bulb, s, poa)
        except NonFiniteState as exc:
            raise NonFiniteState(f"hour {i}: {exc}", hour=i) from None
        modes.append(mode)
        appliances[i] = zip_power(zip_load, 1.0, s.zip_multiplier) / 1000.0
    return ConsumptionTrace(hvac, water, appliances, tuple(modes))
