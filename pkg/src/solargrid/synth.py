"""Synthetic typical-year weather for the bundled fixture.

The original station data behind the published study cannot be
redistributed, so the fixture ships deterministic, plausible stand-ins: a
Haurwitz clear-sky profile attenuated by a seeded daily cloudiness draw, an
Erbs diffuse split, and sinusoidal annual/diurnal temperatures.

    python -m solargrid.synth OUTDIR   # rewrite the fixture weather files
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from .weather import (
    IRRADIANCE_MAX,
    SiteGeometry,
    StationHeader,
    WeatherRecord,
    WeatherYear,
    cos_incidence,
    write_tmy3,
)

SOLAR_CONSTANT = 1367.0


@dataclass(frozen=True)
class Climate:
    station_id: str
    name: str
    region: str
    latitude: float
    longitude: float
    tz_offset: int
    elevation: float
    mean_temp: float  # C, annual mean
    annual_swing: float  # C, half peak-to-peak
    diurnal_swing: float  # C, half peak-to-peak
    clearness: float  # mean daily clear-sky index, 0..1
    seed: int


FIXTURE_CLIMATES = (
    Climate("722950", "LOS ANGELES", "CA", 34.05, -118.24, -8, 71, 18.0, 4.5, 6.0, 0.85, 1),
    Climate("833780", "BRASILIA", "BR", -15.79, -47.88, -3, 1160, 21.0, 1.5, 5.0, 0.60, 2),
    Climate("616410", "DAKAR", "SN", 14.72, -17.47, 0, 24, 24.5, 3.0, 4.0, 0.80, 3),
    Climate("037720", "LONDON", "UK", 51.51, -0.13, 0, 25, 11.0, 7.0, 4.0, 0.45, 4),
    Climate("637400", "NAIROBI", "KE", -1.29, 36.82, 3, 1661, 19.0, 1.5, 6.0, 0.70, 5),
    Climate("412560", "MUSCAT", "OM", 23.59, 58.41, 4, 15, 29.0, 7.0, 5.0, 0.90, 6),
    Climate("368700", "ALMATY", "KZ", 43.24, 76.95, 6, 851, 9.5, 14.0, 6.0, 0.60, 7),
    Climate("486980", "SINGAPORE", "SG", 1.35, 103.82, 8, 16, 27.5, 1.0, 3.5, 0.55, 8),
    Climate("947670", "SYDNEY", "AU", -33.87, 151.21, 10, 6, 18.0, 5.0, 4.0, 0.70, 9),
    Climate("931190", "AUCKLAND", "NZ", -36.85, 174.76, 12, 6, 15.5, 4.0, 4.0, 0.65, 10),
)


def _clear_sky_ghi(cos_z: float) -> float:
    if cos_z <= 0.0:
        return 0.0
    return 1098.0 * cos_z * math.exp(-0.057 / cos_z)


def _diffuse_fraction(kt: float) -> float:
    """Erbs et al. hourly diffuse fraction."""
    if kt <= 0.22:
        return 1.0 - 0.09 * kt
    if kt <= 0.80:
        return 0.9511 - 0.1604 * kt + 4.388 * kt ** 2 - 16.638 * kt ** 3 + 12.336 * kt ** 4
    return 0.165


def synthetic_year(cl: Climate, year: int = 2009) -> WeatherYear:
    rng = np.random.default_rng(cl.seed)
    geo = SiteGeometry(cl.latitude, cl.longitude, cl.tz_offset)
    # Seasons flip across the equator.
    warm_doy = 200 if cl.latitude >= 0 else 20
    a, b = 4.0 * cl.clearness, 4.0 * (1.0 - cl.clearness)
    daily_k = np.clip(rng.beta(max(a, 0.5), max(b, 0.5), 365), 0.15, 1.0)
    noise = rng.normal(0.0, 0.05, 8760)
    temp_noise = np.repeat(rng.normal(0.0, 1.2, 365), 24)

    records = []
    start = datetime(year, 1, 1)
    for k in range(8760):
        ts = start + timedelta(hours=k)
        doy = k // 24
        probe = WeatherRecord(ts, 0.0, 0.0, 0.0, 0.0)
        _, cos_z = cos_incidence(probe, geo)
        ghi = dni = dhi = 0.0
        if cos_z > 0.0:
            ghi = _clear_sky_ghi(cos_z) * daily_k[doy] * (1.0 + noise[k])
            ghi = float(min(max(ghi, 0.0), IRRADIANCE_MAX))
            extra = SOLAR_CONSTANT * (1 + 0.033 * math.cos(2 * math.pi * (doy + 1) / 365)) * cos_z
            kt = min(ghi / extra, 1.0) if extra > 0 else 0.0
            dhi = round(ghi * _diffuse_fraction(kt))
            ghi = round(ghi)
            if cos_z > 0.087:  # sun above ~5 degrees
                dni = float(min(round((ghi - dhi) / cos_z), IRRADIANCE_MAX))
                # Keep the components consistent after rounding and clamping.
                ghi = float(min(round(dni * cos_z + dhi), IRRADIANCE_MAX))
            else:
                dhi = ghi
        solar_hour = (ts.hour + 0.5) + (cl.longitude / 15.0 - cl.tz_offset)
        temp = (cl.mean_temp
                + cl.annual_swing * math.cos(2 * math.pi * (doy - warm_doy) / 365)
                + cl.diurnal_swing * math.cos(2 * math.pi * (solar_hour - 15.0) / 24)
                + temp_noise[k])
        records.append(WeatherRecord(ts, float(ghi), float(dni), float(dhi), round(temp, 1)))
    station = StationHeader(cl.station_id, cl.name, cl.region, float(cl.tz_offset),
                            cl.latitude, cl.longitude, float(cl.elevation))
    return WeatherYear(station, tuple(records))


def fixture_filename(cl: Climate) -> str:
    return cl.name.lower().replace(" ", "_") + ".csv"


def write_fixture(outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for cl in FIXTURE_CLIMATES:
        path = outdir / fixture_filename(cl)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_tmy3(synthetic_year(cl), fh)
        paths.append(path)
    return paths


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m solargrid.synth OUTDIR", file=sys.stderr)
        return 2
    for path in write_fixture(argv[0]):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
