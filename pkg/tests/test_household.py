import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flat_schedule, make_year
from solargrid.config import fixture_config_path, load_config
from solargrid.errors import NonFiniteState
from solargrid.household import (
    COOL,
    HEAT,
    OFF,
    HouseModel,
    ThermalState,
    ZipLoad,
    simulate_house_day,
    thermal_step,
    water_heater_energy,
    zip_power,
)
from solargrid.weather import SiteGeometry, read_tmy3, slice_day

GOLDEN = Path(__file__).parent / "golden"


def hot_day_inputs():
    cfg = load_config(fixture_config_path())
    loc = next(l for l in cfg.locations if l.name == "Muscat")
    day = slice_day(read_tmy3(cfg.weather_path(loc)), 7, 15, loc.name)
    house, heater, zip_load, sched = cfg.components(loc)
    return house, heater, zip_load, sched, day, loc.geometry


class TestThermalStep:
    def test_equilibrium(self, house):
        sched = flat_schedule(heat=20.0, cool=24.0).hour(0)
        state = ThermalState(22.0, 22.0, OFF)
        new, kwh, mode = thermal_step(state, house, 22.0, sched, 0.0)
        assert mode == OFF
        assert kwh == 0.0
        assert new == state

    def test_adiabatic_invariance_over_a_day(self, house):
        sealed = replace(house, envelope_ua=0.0, mass_surface_conductance=0.0)
        sched = flat_schedule(heat=-50.0, cool=60.0).hour(0)
        state = ThermalState(21.3, 14.0, OFF)
        for hour in range(24):
            state, kwh, mode = thermal_step(state, sealed, -10.0 + hour, sched, 0.0)
            assert kwh == 0.0 and mode == OFF
        assert abs(state.air_temp - 21.3) <= 1e-9
        assert abs(state.mass_temp - 14.0) <= 1e-9

    def test_steady_state_cooling_matches_closed_form(self, house):
        # UA.dT/COP: 250 W/C * 11 C / 3 over one hour.
        oracle = 250.0 * (35.0 - 24.0) / 3.0 / 1000.0
        sched = flat_schedule(heat=10.0, cool=24.0).hour(0)
        state = ThermalState(24.0, 24.0, OFF)
        for _ in range(24):
            state, _, _ = thermal_step(state, house, 35.0, sched, 0.0)
        energy = []
        for _ in range(24):
            state, kwh, _ = thermal_step(state, house, 35.0, sched, 0.0)
            energy.append(kwh)
        assert np.mean(energy) == pytest.approx(oracle, rel=0.02)

    def test_steady_state_heating_matches_closed_form(self, house):
        oracle = 250.0 * (20.0 - 0.0) / 3.0 / 1000.0
        sched = flat_schedule(heat=20.0, cool=30.0).hour(0)
        state = ThermalState(20.0, 20.0, OFF)
        for _ in range(24):
            state, _, _ = thermal_step(state, house, 0.0, sched, 0.0)
        energy = [thermal_step(state, house, 0.0, sched, 0.0)[1]]
        for _ in range(23):
            state, kwh, _ = thermal_step(state, house, 0.0, sched, 0.0)
            energy.append(kwh)
        assert np.mean(energy[1:]) == pytest.approx(oracle, rel=0.02)

    @pytest.mark.parametrize("start, outdoor", [(30.0, 0.0), (5.0, 35.0), (22.0, 21.0)])
    def test_monotone_relaxation_with_hvac_off(self, house, start, outdoor):
        sched = flat_schedule(heat=-50.0, cool=60.0).hour(0)
        state = ThermalState(start, start, OFF)
        gap = start - outdoor
        sign = math.copysign(1.0, gap)
        for _ in range(96):
            # One-minute steps so every Euler sub-step is observed.
            state, kwh, mode = thermal_step(state, house, outdoor, sched, 0.0, dt=60.0)
            assert mode == OFF and kwh == 0.0
            new_gap = state.air_temp - outdoor
            assert sign * new_gap >= 0.0
            assert abs(new_gap) <= abs(gap) + 1e-12
            gap = new_gap

    def test_hysteresis_keeps_cooling_inside_deadband(self, house):
        sched = flat_schedule(heat=10.0, cool=24.0).hour(0)
        # 24.2 C is inside the band: cooling continues, off would stay off.
        _, kwh_on, _ = thermal_step(ThermalState(24.2, 24.2, COOL), house, 24.2, sched, 0.0, dt=60.0)
        _, kwh_off, _ = thermal_step(ThermalState(24.2, 24.2, OFF), house, 24.2, sched, 0.0, dt=60.0)
        assert kwh_on > 0.0
        assert kwh_off == 0.0

    def test_unstable_parameters_raise(self, house):
        tiny = replace(house, air_capacitance=1.0)
        sched = flat_schedule().hour(0)
        with pytest.raises(NonFiniteState):
            thermal_step(ThermalState(20.0, 20.0, OFF), tiny, 35.0, sched, 0.0)

    @settings(max_examples=60, deadline=None)
    @given(outdoor=st.floats(-30, 45), start=st.floats(5, 35), poa=st.floats(0, 1000),
           gain=st.floats(0, 2000))
    def test_energy_is_nonnegative_and_single_mode(self, outdoor, start, poa, gain):
        house = HouseModel(1735.0, 250.0, 6.6e6, 2000.0, 0.6, 20.0, 10000.0, 3.0, 3.0, 1.0)
        sched = flat_schedule(heat=19.0, cool=25.0, gain=gain).hour(0)
        state, kwh, mode = thermal_step(ThermalState(start, start, OFF), house, outdoor, sched, poa)
        assert kwh >= 0.0
        assert mode in (HEAT, COOL, OFF)
        # Never more than one hour of full-capacity electrical input.
        assert kwh <= house.hvac_capacity / min(house.hvac_cop_cool, house.hvac_cop_heat) / 1000 + 1e-9


class TestWaterHeater:
    def test_zero_case(self, heater):
        assert water_heater_energy(heater, 0.0, heater.setpoint) == 0.0

    def test_hand_formula(self, heater):
        # A 6 kW element so the 4.5 kWh cap does not interfere.
        wh = replace(heater, standby_ua=0.0, setpoint=55.0, inlet_temp=15.0, heater_power=6000.0)
        assert water_heater_energy(wh, 100.0, 20.0) == pytest.approx(16.744e6 / 3.6e6, rel=1e-12)
        assert water_heater_energy(wh, 100.0, 20.0) == pytest.approx(4.651, abs=5e-4)

    def test_cap_binds(self, heater):
        assert water_heater_energy(heater, 1000.0, 20.0) == pytest.approx(4.5, abs=1e-12)

    def test_standby_floor(self, heater):
        assert water_heater_energy(heater, 0.0, heater.setpoint + 10.0) == 0.0

    def test_negative_draw_rejected(self, heater):
        with pytest.raises(ValueError):
            water_heater_energy(heater, -1.0, 20.0)


class TestZip:
    def test_nominal_voltage(self, zip_load):
        assert zip_power(zip_load, 1.0, 0.7) == pytest.approx(700.0, rel=1e-12)

    def test_off(self, zip_load):
        assert zip_power(zip_load, 1.0, 0.0) == 0.0

    def test_hand_formula(self, zip_load):
        assert zip_power(zip_load, 0.95, 1.0) == pytest.approx(936.25, abs=1e-9)

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ZipLoad(1000.0, 0.5, 0.5, 0.5)


class TestSimulateDay:
    def test_null_day(self, house, heater, zip_load):
        year = make_year(temp=20.0)
        day = slice_day(year, 6, 1)
        wh = replace(heater, standby_ua=0.0)
        trace = simulate_house_day(house, wh, zip_load, flat_schedule(heat=20.0, cool=24.0),
                                   day, SiteGeometry(0.0, 0.0, 0.0))
        assert np.array_equal(trace.kwh, np.zeros(24))

    def test_fixture_hot_day_is_plausible(self):
        house, heater, zip_load, sched, day, geo = hot_day_inputs()
        trace = simulate_house_day(house, heater, zip_load, sched, day, geo)
        assert 10.0 <= trace.daily_kwh <= 200.0
        assert trace.hvac.sum() > 0.0
        for part in (trace.hvac, trace.water_heater, trace.zip):
            assert (part >= 0).all()
        assert np.array_equal(trace.kwh, trace.hvac + trace.water_heater + trace.zip)

    def test_doubling_zip_base_power(self):
        house, heater, zip_load, sched, day, geo = hot_day_inputs()
        a = simulate_house_day(house, heater, zip_load, sched, day, geo)
        b = simulate_house_day(house, heater, replace(zip_load, base_power=2 * zip_load.base_power),
                               sched, day, geo)
        assert np.array_equal(b.zip, 2 * a.zip)
        assert np.array_equal(b.hvac, a.hvac)
        assert np.array_equal(b.water_heater, a.water_heater)

    def test_deterministic(self):
        inputs = hot_day_inputs()
        a, b = simulate_house_day(*inputs), simulate_house_day(*inputs)
        for part in ("hvac", "water_heater", "zip"):
            assert getattr(a, part).tobytes() == getattr(b, part).tobytes()
        assert a.modes == b.modes

    def test_divergence_reports_hour(self, heater, zip_load):
        bad = HouseModel(1735.0, 250.0, 6.6e6, 2000.0, 0.6, 20.0, 10000.0, 3.0, 3.0, 1.0,
                         air_capacitance=1.0)
        day = slice_day(make_year(temp=35.0), 6, 1)
        with pytest.raises(NonFiniteState) as info:
            simulate_house_day(bad, heater, zip_load, flat_schedule(), day, SiteGeometry(0, 0, 0))
        assert info.value.hour == 0
        assert "hour 0" in str(info.value)

    def test_matches_golden_trace(self):
        trace = simulate_house_day(*hot_day_inputs())
        golden = np.loadtxt(GOLDEN / "muscat_jul15_trace.csv", delimiter=",", skiprows=1)
        assert golden.shape == (24, 3)
        np.testing.assert_allclose(trace.hvac, golden[:, 0], rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(trace.water_heater, golden[:, 1], rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(trace.zip, golden[:, 2], rtol=1e-9, atol=1e-12)
