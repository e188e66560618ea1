import io
import math
from dataclasses import replace
from datetime import datetime, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_year
from oracles import almanac_zenith
from solargrid.config import fixture_config_path
from solargrid.errors import DateNotFound, MalformedHeader, RowCountMismatch, ValueOutOfRange
from solargrid.weather import (
    REQUIRED_COLUMNS,
    SiteGeometry,
    WeatherRecord,
    cos_incidence,
    parse_tmy3,
    plane_of_array,
    read_tmy3,
    slice_day,
    slice_window,
    solar_position,
    utc_window,
    write_tmy3,
)

FIXTURE_WEATHER = fixture_config_path().parent / "weather"

FULL_TMY3_HEADER = (
    "Date (MM/DD/YYYY),Time (HH:MM),ETR (W/m^2),ETRN (W/m^2),GHI (W/m^2),GHI source,"
    "GHI uncert (%),DNI (W/m^2),DNI source,DNI uncert (%),DHI (W/m^2),DHI source,"
    "DHI uncert (%),Dry-bulb (C),Dry-bulb source,Dry-bulb uncert (code)"
)


def full_layout_text(rows=8760, night_only=False):
    """A file in the wider NREL column layout, with optional columns interleaved."""
    lines = ['722287,"ANNISTON METROPOLITAN AP",AL,-6.0,33.583,-85.850,186', FULL_TMY3_HEADER]
    start = datetime(1991, 1, 1)
    for k in range(rows):
        ts = start + timedelta(hours=k)
        daylight = 7 <= ts.hour <= 16 and not night_only
        ghi, dni, dhi = (400, 500, 100) if daylight else (0, 0, 0)
        lines.append(f"{ts:%m/%d/%Y},{ts.hour + 1:02d}:00,-9900,-9900,{ghi},1,5,{dni},1,5,"
                     f"{dhi},1,5,{5 + ts.hour / 2:.1f},A,7")
    return "\n".join(lines) + "\n"


class TestParse:
    def test_full_layout_ignores_optional_columns(self):
        year = parse_tmy3(full_layout_text())
        assert len(year.records) == 8760
        assert year.station.name == "ANNISTON METROPOLITAN AP"
        assert year.station.tz_offset == -6.0
        first = year.records[0]
        assert first.timestamp == datetime(1991, 1, 1, 0)
        assert (first.ghi, first.dni, first.dhi, first.dry_bulb) == (0, 0, 0, 5.0)
        assert year.records[-1].timestamp == datetime(1991, 12, 31, 23)

    def test_zero_irradiance_nights(self):
        year = parse_tmy3(full_layout_text())
        nights = [r for r in year.records if r.timestamp.hour < 5]
        assert nights and all(r.ghi == r.dni == r.dhi == 0 for r in nights)

    def test_row_count_mismatch(self):
        with pytest.raises(RowCountMismatch):
            parse_tmy3(full_layout_text(rows=8759))

    def test_missing_column_is_malformed_header(self):
        text = full_layout_text().replace("DNI (W/m^2)", "DNI")
        with pytest.raises(MalformedHeader, match="DNI"):
            parse_tmy3(text)

    def test_empty_file(self):
        with pytest.raises(MalformedHeader):
            parse_tmy3("")

    @pytest.mark.parametrize("bad, field_name", [
        ("-9900", "ghi"), ("1600", "ghi"), ("abc", "ghi"),
    ])
    def test_out_of_range_reports_row(self, bad, field_name):
        lines = full_layout_text().splitlines()
        cells = lines[2 + 99].split(",")
        cells[4] = bad  # GHI column
        lines[2 + 99] = ",".join(cells)
        with pytest.raises(ValueOutOfRange) as info:
            parse_tmy3("\n".join(lines))
        assert info.value.row == 100
        assert info.value.line == 102
        assert "row 100" in str(info.value)

    def test_temperature_sentinel_rejected(self):
        lines = full_layout_text().splitlines()
        cells = lines[2 + 4].split(",")
        cells[13] = "-9900.0"
        lines[2 + 4] = ",".join(cells)
        with pytest.raises(ValueOutOfRange, match="row 5"):
            parse_tmy3("\n".join(lines))

    def test_stream_input(self):
        year = parse_tmy3(io.StringIO(full_layout_text()))
        assert len(year) == 8760


class TestRoundTrip:
    def test_write_then_parse_is_identity(self):
        original = parse_tmy3(full_layout_text())
        again = parse_tmy3(write_tmy3(original))
        assert again.records == original.records
        assert again.station == original.station

    def test_fractional_values_round_trip(self):
        base = make_year(ghi=0.0, temp=0.1)
        recs = list(base.records)
        recs[10] = replace(recs[10], ghi=123.456789, dni=1.0 / 3.0, dhi=2e-7, dry_bulb=-12.34)
        year = replace(base, records=tuple(recs))
        assert parse_tmy3(write_tmy3(year)).records == year.records

    @pytest.mark.parametrize("name", sorted(p.name for p in FIXTURE_WEATHER.glob("*.csv")))
    def test_bundled_fixture_files_round_trip(self, name):
        path = FIXTURE_WEATHER / name
        year = read_tmy3(path)
        assert write_tmy3(year) == path.read_text()
        assert parse_tmy3(write_tmy3(year)).records == year.records

    def test_writer_uses_required_header(self):
        text = write_tmy3(make_year())
        assert text.splitlines()[1] == ",".join(REQUIRED_COLUMNS)


class TestSlicing:
    def test_slice_day_hours(self):
        day = slice_day(make_year(), 2, 1)
        assert [r.timestamp for r in day] == [datetime(2009, 2, 1, h) for h in range(24)]

    @pytest.mark.parametrize("month, day", [(2, 30), (13, 1), (2, 29), (0, 5)])
    def test_invalid_date(self, month, day):
        with pytest.raises(DateNotFound):
            slice_day(make_year(), month, day)

    def test_slices_reassemble_year(self):
        year = make_year()
        out = []
        d = datetime(2009, 1, 1)
        for _ in range(365):
            out.extend(slice_day(year, d.month, d.day).records)
            d += timedelta(days=1)
        assert tuple(out) == year.records

    def test_window_wraps_year_end(self):
        day = slice_window(make_year(), 12, 31, 20)
        assert day[0].timestamp == datetime(2009, 12, 31, 20)
        assert day[4].timestamp == datetime(2009, 1, 1, 0)

    def test_utc_window_offsets(self):
        year = make_year()
        la = utc_window(year, 2, 1, -8)
        assert la[0].timestamp == datetime(2009, 1, 31, 16)
        akl = utc_window(year, 2, 1, 12)
        assert akl[0].timestamp == datetime(2009, 2, 1, 12)
        assert utc_window(year, 2, 1, 0).records == slice_day(year, 2, 1).records


def _consistent_record(when, geo, dni, dhi):
    """A record with ghi = dni cos(zenith) + dhi by construction."""
    probe = WeatherRecord(when, 0.0, 0.0, 0.0, 20.0)
    _, cos_z = cos_incidence(probe, geo)
    beam = dni * max(0.0, cos_z)
    return WeatherRecord(when, beam + dhi, dni if cos_z > 0 else 0.0, dhi, 20.0)


class TestPlaneOfArray:
    def test_zero_record(self):
        rec = WeatherRecord(datetime(2009, 6, 1, 12), 0.0, 0.0, 0.0, 20.0)
        assert plane_of_array(rec, SiteGeometry(40, -100, -6, 30, 180)) == 0.0

    def test_equator_equinox_noon(self):
        geo = SiteGeometry(0.0, 0.0, 0.0, 0.0, 180.0)
        # The 12:00-13:00 record is evaluated at 12:30, close to solar noon.
        rec = WeatherRecord(datetime(2009, 3, 20, 12), 1000.0, 900.0, 100.0, 30.0)
        zenith = almanac_zenith(datetime(2009, 3, 20, 12, 30), 0.0, 0.0, 0.0)
        hand = 900.0 * math.cos(math.radians(zenith)) + 100.0
        poa = plane_of_array(rec, geo)
        assert poa == pytest.approx(1000.0, abs=20.0)
        assert poa == pytest.approx(hand, abs=1.5)

    def test_horizontal_noon_identity(self):
        geo = SiteGeometry(35.0, -106.0, -7, 0.0, 180.0)
        rec = _consistent_record(datetime(2009, 6, 21, 12), geo, 850.0, 120.0)
        assert plane_of_array(rec, geo) == pytest.approx(rec.ghi, abs=1e-9)

    def test_sun_below_horizon_has_no_beam(self):
        geo = SiteGeometry(45.0, 0.0, 0.0, 60.0, 90.0)
        rec = WeatherRecord(datetime(2009, 1, 1, 1), 50.0, 800.0, 50.0, 0.0)
        expected = 50.0 * (1 + math.cos(math.radians(60))) / 2 + 50.0 * 0.2 * (
            1 - math.cos(math.radians(60))) / 2
        assert plane_of_array(rec, geo) == pytest.approx(expected, abs=1e-12)

    def test_albedo_override(self):
        geo = SiteGeometry(45.0, 0.0, 0.0, 90.0, 180.0)
        rec = WeatherRecord(datetime(2009, 1, 1, 1), 100.0, 0.0, 0.0, 0.0)
        assert plane_of_array(rec, geo, albedo=0.5) == pytest.approx(25.0)

    @settings(max_examples=200, deadline=None)
    @given(
        lat=st.floats(-66, 66), lon=st.floats(-180, 180),
        minute=st.integers(0, 8759 * 60), dni=st.floats(0, 1100), dhi=st.floats(0, 400),
    )
    def test_tilt_zero_equals_ghi(self, lat, lon, minute, dni, dhi):
        geo = SiteGeometry(lat, lon, round(lon / 15), 0.0, 180.0)
        rec = _consistent_record(datetime(2009, 1, 1) + timedelta(minutes=minute), geo, dni, dhi)
        assert plane_of_array(rec, geo) == pytest.approx(rec.ghi, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(
        tilt=st.floats(0, 90), az=st.floats(0, 360), hour=st.integers(0, 8759),
        ghi=st.floats(0, 1200), dni=st.floats(0, 1200), dhi=st.floats(0, 600),
        bump=st.floats(0, 200), which=st.sampled_from(["ghi", "dni", "dhi"]),
    )
    def test_monotone_in_each_component(self, tilt, az, hour, ghi, dni, dhi, bump, which):
        geo = SiteGeometry(30.0, 10.0, 1, tilt, az)
        rec = WeatherRecord(datetime(2009, 1, 1) + timedelta(hours=hour), ghi, dni, dhi, 15.0)
        bigger = replace(rec, **{which: getattr(rec, which) + bump})
        assert plane_of_array(bigger, geo) >= plane_of_array(rec, geo)
        assert plane_of_array(rec, geo) >= 0.0

    def test_night_hours_zero_beam(self):
        geo = SiteGeometry(51.5, 0.0, 0.0, 35.0, 180.0)
        for h in (0, 1, 2, 3, 22, 23):
            rec = WeatherRecord(datetime(2009, 2, 1, h), 0.0, 1000.0, 0.0, 5.0)
            assert plane_of_array(rec, geo) == 0.0


class TestSolarPosition:
    def test_against_almanac(self):
        rng = np.random.default_rng(11)
        diffs = []
        for _ in range(2000):
            lat, lon = rng.uniform(-60, 60), rng.uniform(-180, 180)
            tz = round(lon / 15)
            when = datetime(2009, 1, 1) + timedelta(minutes=int(rng.integers(0, 525600)))
            z, _ = solar_position(when, lat, lon, tz)
            diffs.append(abs(z - almanac_zenith(when, lat, lon, tz)))
        diffs = np.array(diffs)
        assert np.percentile(diffs, 99) < 0.5
        assert diffs.max() < 0.6

    def test_geometry_bounds(self):
        with pytest.raises(ValueError):
            SiteGeometry(91, 0, 0)
        with pytest.raises(ValueError):
            SiteGeometry(0, 181, 0)
        with pytest.raises(ValueError):
            SiteGeometry(0, 0, 0, panel_tilt=95)
