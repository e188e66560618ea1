import sys
from datetime import datetime, timedelta

import pytest

from solargrid.config import fixture_config_path, load_config
from solargrid.household import HouseModel, ScheduleSet, WaterHeater, ZipLoad
from solargrid.pipeline import run_pipeline
from solargrid.weather import StationHeader, WeatherRecord, WeatherYear


def make_year(ghi=0.0, dni=0.0, dhi=0.0, temp=10.0, year=2009):
    start = datetime(year, 1, 1)
    records = tuple(
        WeatherRecord(start + timedelta(hours=k), ghi, dni, dhi, temp) for k in range(8760))
    return WeatherYear(StationHeader("000000", "TEST", "XX", 0.0, 0.0, 0.0, 0.0), records)


@pytest.fixture(scope="session")
def fixture_config():
    return load_config(fixture_config_path())


@pytest.fixture(scope="session")
def fixture_run(fixture_config, tmp_path_factory):
    out = tmp_path_factory.mktemp("fixture_run")
    return run_pipeline(fixture_config, out_dir=out)


@pytest.fixture
def house():
    return HouseModel(
        floor_area=1735.0, envelope_ua=250.0, mass_capacitance=6.6e6,
        mass_surface_conductance=2000.0, glazing_gain_fraction=0.6, window_area=20.0,
        hvac_capacity=10000.0, hvac_cop_cool=3.0, hvac_cop_heat=3.0, deadband=1.0)


@pytest.fixture
def heater():
    return WaterHeater(tank_volume=190.0, setpoint=55.0, inlet_temp=15.0,
                       heater_power=4500.0, standby_ua=2.0)


@pytest.fixture
def zip_load():
    return ZipLoad(base_power=1000.0, z_frac=0.5, i_frac=0.3, p_frac=0.2)


def flat_schedule(heat=20.0, cool=24.0, draw=0.0, mult=0.0, gain=0.0):
    return ScheduleSet([heat] * 24, [cool] * 24, [draw] * 24, [mult] * 24, [gain] * 24)


@pytest.fixture
def schedule():
    return ScheduleSet(
        heating_setpoint=[18] * 6 + [20] * 3 + [18] * 8 + [21] * 6 + [18],
        cooling_setpoint=[26] * 6 + [25] * 3 + [27] * 8 + [25] * 6 + [26],
        hot_water_draw=[0] * 6 + [40, 50, 30] + [5] * 9 + [30, 35, 25, 15, 5, 0],
        zip_multiplier=[0.3] * 6 + [0.7, 0.8, 0.6] + [0.5] * 8 + [1.0] * 4 + [0.8, 0.5, 0.4],
        internal_gain=[250] * 6 + [450] * 3 + [200] * 8 + [600] * 4 + [500, 400, 300],
    )


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS):
        terminalreporter.write_line(line)
