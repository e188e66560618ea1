"""Scenario configuration (TOML).

A run is fully described by one file::

    [run]
    date = "2009-02-01"          # month and day select the weather day
    alignment = "local-day"      # or "utc-aligned"
    experiments = [1, 2, 3, 4]
    output_dir = "output"        # relative to the config file
    albedo = 0.2
    workers = 1

    [panel]                      # PanelSpec fields
    efficiency = 0.15

    [houses.<name>]              # HouseModel fields
    [water_heaters.<name>]       # WaterHeater fields
    [zip_loads.<name>]           # ZipLoad fields
    [schedules.<name>]           # five 24-element arrays

    [[locations]]
    name = "Los Angeles"
    latitude = 34.05
    longitude = -118.24
    tz_offset = -8
    panel_tilt = 34
    panel_azimuth = 180          # compass bearing, 180 = south
    population = 3900000
    household_count = 1300000    # optional; population / 3 when absent
    weather_file = "weather/los_angeles.csv"
    house = "standard"           # keys into the tables above
    water_heater = "standard"
    zip_load = "standard"
    schedule = "standard"

    [[custom_experiments]]       # optional extra constraint policies
    name = "half"
    min_fraction = 0.5
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .household import HouseModel, ScheduleSet, WaterHeater, ZipLoad
from .optimizer.lp import EXPERIMENTS, ConstraintPolicy
from .pv import PanelSpec
from .scenario import ALIGNMENTS, LOCAL_DAY, LocationSpec
from .weather import DEFAULT_ALBEDO, SiteGeometry

DEFAULT_DATE = (2, 1)


@dataclass(frozen=True)
class Experiment:
    label: str
    policy: ConstraintPolicy


@dataclass(frozen=True)
class ScenarioConfig:
    locations: tuple
    panel: PanelSpec = field(default_factory=PanelSpec)
    month: int = DEFAULT_DATE[0]
    day: int = DEFAULT_DATE[1]
    alignment: str = LOCAL_DAY
    experiments: tuple = ()
    output_dir: Path = Path("output")
    albedo: float = DEFAULT_ALBEDO
    workers: int = 1
    houses: dict = field(default_factory=dict)
    water_heaters: dict = field(default_factory=dict)
    zip_loads: dict = field(default_factory=dict)
    schedules: dict = field(default_factory=dict)
    base_dir: Path = Path(".")

    def weather_path(self, loc: LocationSpec) -> Path:
        path = Path(loc.weather_file)
        return path if path.is_absolute() else self.base_dir / path

    def components(self, loc: LocationSpec):
        return (self.houses[loc.house], self.water_heaters[loc.water_heater],
                self.zip_loads[loc.zip_load], self.schedules[loc.schedule])


def standard_experiment(k: int) -> Experiment:
    if k not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {k}; choose from 1-4")
    return Experiment(f"exp{k}", EXPERIMENTS[k])


def _build(cls, table, what):
    names = {f.name for f in fields(cls)}
    unknown = set(table) - names
    if unknown:
        raise ConfigError(f"{what}: unknown keys {sorted(unknown)}")
    try:
        return cls(**table)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _parse_date(text) -> tuple[int, int]:
    if isinstance(text, date):
        return text.month, text.day
    m = re.fullmatch(r"(?:\d{4}-)?(\d{1,2})-(\d{1,2})", str(text).strip())
    if not m:
        raise ConfigError(f"run.date {text!r} is not YYYY-MM-DD or MM-DD")
    month, day = int(m.group(1)), int(m.group(2))
    try:
        date(2009, month, day)  # TMY years have no Feb 29
    except ValueError:
        raise ConfigError(f"run.date {text!r} is not a valid day of a non-leap year") from None
    return month, day


def parse_config(data: dict, base_dir: Path = Path("."), check_files: bool = True) -> ScenarioConfig:
    run = data.get("run", {})
    month, day = _parse_date(run.get("date", "02-01"))
    alignment = run.get("alignment", LOCAL_DAY)
    if alignment not in ALIGNMENTS:
        raise ConfigError(f"run.alignment must be one of {ALIGNMENTS}, got {alignment!r}")

    experiments = [standard_experiment(int(k)) for k in run.get("experiments", [1, 2, 3, 4])]
    for table in data.get("custom_experiments", []):
        table = dict(table)
        name = table.pop("name", None)
        if not name or not re.fullmatch(r"[A-Za-z0-9_-]+", name):
            raise ConfigError("custom_experiments entries need a name of letters, digits, _ or -")
        experiments.append(Experiment(name, _build(ConstraintPolicy, table, f"experiment {name}")))
    labels = [e.label for e in experiments]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate experiment labels in {labels}")

    panel = _build(PanelSpec, data.get("panel", {}), "panel")
    houses = {k: _build(HouseModel, v, f"houses.{k}") for k, v in data.get("houses", {}).items()}
    heaters = {k: _build(WaterHeater, v, f"water_heaters.{k}")
               for k, v in data.get("water_heaters", {}).items()}
    zips = {k: _build(ZipLoad, v, f"zip_loads.{k}") for k, v in data.get("zip_loads", {}).items()}
    schedules = {k: _build(ScheduleSet, v, f"schedules.{k}")
                 for k, v in data.get("schedules", {}).items()}

    raw_locations = data.get("locations", [])
    if not raw_locations:
        raise ConfigError("config defines no locations")
    geo_keys = {f.name for f in fields(SiteGeometry)}
    locations = []
    for i, table in enumerate(raw_locations):
        table = dict(table)
        name = table.get("name") or f"location {i + 1}"
        geo = _build(SiteGeometry, {k: table.pop(k) for k in list(table) if k in geo_keys},
                     f"location {name}")
        loc = _build(LocationSpec, {**table, "geometry": geo}, f"location {name}")
        for ref, pool in (("house", houses), ("water_heater", heaters),
                          ("zip_load", zips), ("schedule", schedules)):
            if getattr(loc, ref) not in pool:
                raise ConfigError(f"location {name}: unknown {ref} {getattr(loc, ref)!r}")
        try:
            schedules[loc.schedule].validate(houses[loc.house].deadband)
        except ValueError as exc:
            raise ConfigError(f"location {name}: schedule {loc.schedule!r}: {exc}") from None
        locations.append(loc)
    names = [loc.name for loc in locations]
    if len(set(names)) != len(names):
        raise ConfigError("location names must be unique")

    workers = int(run.get("workers", 1))
    if workers < 1:
        raise ConfigError("run.workers must be >= 1")
    albedo = float(run.get("albedo", DEFAULT_ALBEDO))
    if not 0.0 <= albedo <= 1.0:
        raise ConfigError("run.albedo must be in [0, 1]")

    out = Path(run.get("output_dir", "output"))
    cfg = ScenarioConfig(
        locations=tuple(locations), panel=panel, month=month, day=day,
        alignment=alignment, experiments=tuple(experiments),
        output_dir=out if out.is_absolute() else base_dir / out,
        albedo=albedo, workers=workers, houses=houses, water_heaters=heaters,
        zip_loads=zips, schedules=schedules, base_dir=base_dir,
    )
    if check_files:
        for loc in cfg.locations:
            path = cfg.weather_path(loc)
            if not path.is_file():
                raise ConfigError(f"location {loc.name}: weather file not found: {path}")
    return cfg


def load_config(path, check_files: bool = True) -> ScenarioConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data, path.parent, check_files)


def fixture_config_path() -> Path:
    """Path of the bundled ten-location scenario."""
    return Path(__file__).parent / "data" / "fixture" / "scenario.toml"
