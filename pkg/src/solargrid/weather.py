"""TMY3 weather ingestion and plane-of-array irradiance.

TMY3 files store hour-ending records: the row stamped ``01:00`` covers
00:00-01:00 local standard time.  Records here carry the hour-start
timestamp instead, so a calendar day runs 00:00 ... 23:00.  Irradiance is
evaluated at the middle of the hour when computing sun position.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Sequence, TextIO

from .errors import (
    DateNotFound,
    MalformedHeader,
    RowCountMismatch,
    ValueOutOfRange,
    WeatherError,
)

HOURS_PER_YEAR = 8760
IRRADIANCE_MAX = 1500.0
DRY_BULB_RANGE = (-90.0, 60.0)
DEFAULT_ALBEDO = 0.2

DATE_COL = "Date (MM/DD/YYYY)"
TIME_COL = "Time (HH:MM)"
GHI_COL = "GHI (W/m^2)"
DNI_COL = "DNI (W/m^2)"
DHI_COL = "DHI (W/m^2)"
DRY_BULB_COL = "Dry-bulb (C)"
REQUIRED_COLUMNS = (DATE_COL, TIME_COL, GHI_COL, DNI_COL, DHI_COL, DRY_BULB_COL)


@dataclass(frozen=True)
class WeatherRecord:
    timestamp: datetime
    ghi: float
    dni: float
    dhi: float
    dry_bulb: float

    def check(self) -> None:
        for name in ("ghi", "dni", "dhi"):
            value = getattr(self, name)
            if not 0.0 <= value <= IRRADIANCE_MAX:
                raise ValueOutOfRange(f"{name} {value} outside [0, {IRRADIANCE_MAX}] W/m^2")
        lo, hi = DRY_BULB_RANGE
        if not lo <= self.dry_bulb <= hi:
            raise ValueOutOfRange(f"dry_bulb {self.dry_bulb} outside [{lo}, {hi}] C")


@dataclass(frozen=True)
class StationHeader:
    station_id: str = ""
    name: str = ""
    state: str = ""
    tz_offset: float | None = None
    latitude: float | None = None
    longitude: float | None = None
    elevation: float | None = None

    def fields(self) -> list[str]:
        def num(x):
            return "" if x is None else _fmt(x)

        return [self.station_id, self.name, self.state, num(self.tz_offset),
                num(self.latitude), num(self.longitude), num(self.elevation)]


@dataclass(frozen=True)
class WeatherYear:
    station: StationHeader
    records: tuple[WeatherRecord, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, rec in enumerate(self.records):
            ts = rec.timestamp
            index.setdefault((ts.month, ts.day, ts.hour), i)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.records)

    def position(self, month: int, day: int, hour: int = 0) -> int:
        try:
            return self._index[(month, day, hour)]
        except KeyError:
            raise DateNotFound(f"{month:02d}/{day:02d} {hour:02d}:00 not in weather year") from None


@dataclass(frozen=True)
class WeatherDay:
    """24 consecutive hourly records.

    Usually one calendar day; a window shifted for UTC alignment may straddle
    local midnight, so only hour-of-day continuity is enforced.
    """

    records: tuple[WeatherRecord, ...]
    location_id: str = ""

    def __post_init__(self):
        if len(self.records) != 24:
            raise WeatherError(f"a weather day needs 24 records, got {len(self.records)}")
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.timestamp.hour != (prev.timestamp.hour + 1) % 24:
                raise WeatherError(
                    f"records not consecutive: {prev.timestamp} followed by {cur.timestamp}")

    def __len__(self):
        return 24

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]


@dataclass(frozen=True)
class SiteGeometry:
    latitude: float
    longitude: float
    tz_offset: float
    panel_tilt: float = 0.0
    # Compass bearing of the panel normal: 0 = north, 90 = east, 180 = south.
    panel_azimuth: float = 180.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} outside [-180, 180]")
        if not 0.0 <= self.panel_tilt <= 90.0:
            raise ValueError(f"panel_tilt {self.panel_tilt} outside [0, 90]")


# --------------------------------------------------------------------------
# Parsing / writing


def _fmt(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def _read_text(source) -> str:
    if isinstance(source, str):
        return source
    return source.read()


def parse_tmy3(source: str | TextIO) -> WeatherYear:
    """Parse TMY3 CSV text (or an open text stream) into a WeatherYear."""
    lines = _read_text(source).splitlines()
    if len(lines) < 2:
        raise MalformedHeader("expected a station line and a column header line")
    station = _parse_station(lines[0])
    columns = next(csv.reader([lines[1]]))
    columns = [c.strip() for c in columns]
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise MalformedHeader(f"missing required columns: {', '.join(missing)}")
    pos = {name: columns.index(name) for name in REQUIRED_COLUMNS}

    data = [ln for ln in lines[2:] if ln.strip()]
    if len(data) != HOURS_PER_YEAR:
        raise RowCountMismatch(f"expected {HOURS_PER_YEAR} data rows, found {len(data)}")

    records = []
    for row_no, row in enumerate(csv.reader(data), start=1):
        line_no = row_no + 2
        try:
            records.append(_parse_row(row, pos))
        except ValueOutOfRange as exc:
            raise ValueOutOfRange(f"row {row_no} (line {line_no}): {exc}",
                                  row=row_no, line=line_no) from None
    return WeatherYear(station, tuple(records))


def read_tmy3(path) -> WeatherYear:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_tmy3(fh)


def _parse_station(line: str) -> StationHeader:
    fields = [f.strip() for f in next(csv.reader([line]))]
    fields += [""] * (7 - len(fields))

    def num(text):
        try:
            return float(text) if text else None
        except ValueError:
            return None

    return StationHeader(fields[0], fields[1], fields[2], num(fields[3]),
                         num(fields[4]), num(fields[5]), num(fields[6]))


def _parse_row(row: Sequence[str], pos: dict) -> WeatherRecord:
    try:
        date_text = row[pos[DATE_COL]].strip()
        time_text = row[pos[TIME_COL]].strip()
        month, day, year = (int(x) for x in date_text.split("/"))
        hour_ending = int(time_text.split(":")[0])
        values = {
            "ghi": float(row[pos[GHI_COL]]),
            "dni": float(row[pos[DNI_COL]]),
            "dhi": float(row[pos[DHI_COL]]),
            "dry_bulb": float(row[pos[DRY_BULB_COL]]),
        }
    except (IndexError, ValueError) as exc:
        raise ValueOutOfRange(f"unparseable field ({exc})") from None
    if not 1 <= hour_ending <= 24:
        raise ValueOutOfRange(f"hour {hour_ending} outside 1..24")
    try:
        ts = datetime(year, month, day) + timedelta(hours=hour_ending - 1)
    except ValueError as exc:
        raise ValueOutOfRange(f"invalid date {date_text} ({exc})") from None
    rec = WeatherRecord(ts, **values)
    rec.check()
    return rec


def write_tmy3(year: WeatherYear, stream: TextIO | None = None) -> str:
    """Write the minimal TMY3 layout; returns the text (also written to stream)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(year.station.fields())
    writer.writerow(REQUIRED_COLUMNS)
    for rec in year.records:
        ts = rec.timestamp
        writer.writerow([
            f"{ts.month:02d}/{ts.day:02d}/{ts.year}",
            f"{ts.hour + 1:02d}:00",
            _fmt(rec.ghi), _fmt(rec.dni), _fmt(rec.dhi), _fmt(rec.dry_bulb),
        ])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


# --------------------------------------------------------------------------
# Day selection


def slice_day(year: WeatherYear, month: int, day: int, location_id: str = "") -> WeatherDay:
    """Return the 24 records of one calendar day (matched on month and day).

    TMY3 years stitch months from different calendar years, so the year
    part of the timestamp is not used for matching.
    """
    start = year.position(month, day, 0)
    records = year.records[start:start + 24]
    if len(records) != 24 or any(r.timestamp.hour != h for h, r in enumerate(records)):
        raise DateNotFound(f"{month:02d}/{day:02d} does not have 24 hourly records")
    return WeatherDay(tuple(records), location_id)


def slice_window(year: WeatherYear, month: int, day: int, hour: int,
                 location_id: str = "") -> WeatherDay:
    """24 consecutive records starting at local (month, day, hour).

    Wraps from Dec 31 back to Jan 1, treating the typical year as cyclic.
    """
    start = year.position(month, day, hour)
    n = len(year.records)
    records = tuple(year.records[(start + k) % n] for k in range(24))
    return WeatherDay(records, location_id)


def utc_window(year: WeatherYear, month: int, day: int, tz_offset: float,
               location_id: str = "") -> WeatherDay:
    """Local records covering UTC hours 00..23 of the given date."""
    if not float(tz_offset).is_integer():
        raise WeatherError(f"UTC alignment needs a whole-hour tz offset, got {tz_offset}")
    # Any non-leap year works for the calendar arithmetic.
    local = datetime(2009, month, day) + timedelta(hours=int(tz_offset))
    return slice_window(year, local.month, local.day, local.hour, location_id)


# --------------------------------------------------------------------------
# Solar geometry


def solar_position(when: datetime, latitude: float, longitude: float, tz_offset: float):
    """Zenith and sun unit vector (east, north, up) at local standard time ``when``.

    NOAA declination / equation-of-time series; good to roughly half a degree.
    """
    doy = when.timetuple().tm_yday
    hours = when.hour + when.minute / 60.0 + when.second / 3600.0
    # Fractional year on the UTC clock so far-from-Greenwich sites are not off by a day.
    gamma = 2.0 * math.pi / 365.0 * (doy - 1 + (hours - tz_offset - 12.0) / 24.0)
    eqtime = 229.18 * (0.000075 + 0.001868 * math.cos(gamma) - 0.032077 * math.sin(gamma)
                       - 0.014615 * math.cos(2 * gamma) - 0.040849 * math.sin(2 * gamma))
    decl = (0.006918 - 0.399912 * math.cos(gamma) + 0.070257 * math.sin(gamma)
            - 0.006758 * math.cos(2 * gamma) + 0.000907 * math.sin(2 * gamma)
            - 0.002697 * math.cos(3 * gamma) + 0.00148 * math.sin(3 * gamma))
    true_solar_minutes = hours * 60.0 + eqtime + 4.0 * longitude - 60.0 * tz_offset
    hour_angle = math.radians(true_solar_minutes / 4.0 - 180.0)
    lat = math.radians(latitude)

    up = math.sin(lat) * math.sin(decl) + math.cos(lat) * math.cos(decl) * math.cos(hour_angle)
    east = -math.cos(decl) * math.sin(hour_angle)
    north = math.cos(lat) * math.sin(decl) - math.sin(lat) * math.cos(decl) * math.cos(hour_angle)
    up = max(-1.0, min(1.0, up))
    zenith = math.degrees(math.acos(up))
    return zenith, (east, north, up)


def panel_normal(tilt: float, azimuth: float) -> tuple[float, float, float]:
    b, a = math.radians(tilt), math.radians(azimuth)
    return math.sin(b) * math.sin(a), math.sin(b) * math.cos(a), math.cos(b)


def hour_midpoint(rec: WeatherRecord) -> datetime:
    return rec.timestamp + timedelta(minutes=30)


def cos_incidence(rec: WeatherRecord, geo: SiteGeometry) -> tuple[float, float]:
    """(cos incidence on the panel, cos zenith) at the record's mid-hour."""
    _, sun = solar_position(hour_midpoint(rec), geo.latitude, geo.longitude, geo.tz_offset)
    normal = panel_normal(geo.panel_tilt, geo.panel_azimuth)
    cos_i = sum(s * n for s, n in zip(sun, normal))
    return cos_i, sun[2]


def plane_of_array(rec: WeatherRecord, geo: SiteGeometry, albedo: float = DEFAULT_ALBEDO) -> float:
    """Isotropic-sky irradiance on the tilted panel, W/m^2."""
    cos_i, cos_z = cos_incidence(rec, geo)
    if cos_z <= 0.0:
        # Sun below the horizon: no beam on the panel.
        cos_i = 0.0
    cos_tilt = math.cos(math.radians(geo.panel_tilt))
    beam = rec.dni * max(0.0, cos_i)
    sky = rec.dhi * (1.0 + cos_tilt) / 2.0
    ground = rec.ghi * albedo * (1.0 - cos_tilt) / 2.0
    return max(0.0, beam + sky + ground)


def plane_of_array_day(day: Iterable[WeatherRecord], geo: SiteGeometry,
                       albedo: float = DEFAULT_ALBEDO) -> list[float]:
    return [plane_of_array(rec, geo, albedo) for rec in day]
