import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solitonlab import kg_solver as kg
from solitonlab.dispersion import kg_frequency
from solitonlab.errors import ConfigurationError, DomainError
from solitonlab.grid import Grid1D


def _packet(n=256, length=8.0):
    grid = Grid1D(0.0, length, n)
    u0 = np.exp(-((grid.z - 0.5 * length) / 0.5) ** 2) * np.cos(6 * grid.z)
    return grid, u0


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.0, 4.0])
def test_measured_frequency_matches_dispersion(k):
    f = kg.measured_dispersion(k, 1.0, points_per_wavelength=256)
    assert abs(f - kg_frequency(k)) / kg_frequency(k) < 1e-4


def test_uniform_field_oscillates_at_cutoff():
    assert kg.measured_dispersion(0.0, 1.0) == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("k", [2.0, 3.0])
def test_second_order_in_dz(k):
    exact = float(kg_frequency(k))
    e = [abs(kg.measured_dispersion(k, 1.0, p) - exact) for p in (32, 64)]
    assert e[0] / e[1] == pytest.approx(4.0, rel=0.05)


def test_zero_field_stays_zero():
    grid = Grid1D(0.0, 1.0, 64)
    field = kg.initial_field(grid, np.zeros(64), 1.0, 0.5 * grid.dz)
    out = kg.evolve_kg(field, 1.0, field.dt, 500)
    assert not np.any(out.u)


def test_cfl_violation_raises_before_stepping():
    grid = Grid1D(0.0, 1.0, 64)
    with pytest.raises(ConfigurationError):
        kg.initial_field(grid, np.zeros(64), 1.0, 2.0 * grid.dz)
    with pytest.raises(ConfigurationError):
        kg.check_cfl(grid, 100.0, 0.9 * grid.dz)


def test_grid_must_be_power_of_two():
    with pytest.raises(ConfigurationError):
        kg.initial_field(Grid1D(0.0, 1.0, 100), np.zeros(100), 1.0, 1e-3)


def test_energy_drift_over_ten_thousand_steps():
    grid, u0 = _packet()
    dt = 0.5 * grid.dz
    field = kg.initial_field(grid, u0, 1.0, dt)
    e0 = kg.energy(field, 1.0)
    out = kg.evolve_kg(field, 1.0, dt, 10_000)
    assert abs(kg.energy(out, 1.0) - e0) / e0 < 1e-6


def test_time_reversal():
    grid, u0 = _packet()
    dt = 0.5 * grid.dz
    field = kg.initial_field(grid, u0, 1.0, dt)
    forward = kg.evolve_kg(field, 1.0, dt, 2000)
    back = kg.evolve_kg(kg.reverse(forward), 1.0, dt, 2000)
    # after reversal the levels are swapped: back.u_prev holds the initial level
    assert np.max(np.abs(back.u_prev - field.u)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 3.0))
def test_energy_conserved_for_random_data(seed, f_o):
    rng = np.random.default_rng(seed)
    grid = Grid1D(0.0, 4.0, 64)
    u0 = np.convolve(rng.normal(size=64), np.ones(8) / 8, mode="same")
    dt = 0.5 * grid.dz
    field = kg.initial_field(grid, u0, f_o, dt)
    e0 = kg.energy(field, f_o)
    out = kg.evolve_kg(field, f_o, dt, 500)
    assert kg.energy(out, f_o) == pytest.approx(e0, rel=1e-9)


def test_mismatched_time_step_rejected():
    grid, u0 = _packet()
    field = kg.initial_field(grid, u0, 1.0, 0.5 * grid.dz)
    with pytest.raises(ConfigurationError):
        kg.evolve_kg(field, 1.0, 0.25 * grid.dz, 10)


def test_evanescent_rate_closed_form():
    assert kg.evanescent_decay_rate(0.6, 1.0) == pytest.approx(2 * math.pi * 0.8, rel=1e-15)
    assert kg.evanescent_decay_rate(1.0 - 1e-12, 1.0) < 1e-4
    for bad in (1.0, 1.2, 0.0):
        with pytest.raises(DomainError):
            kg.evanescent_decay_rate(bad, 1.0)


def test_driven_simulation_decay():
    res = kg.driven_decay(0.6, 1.0)
    assert res.decay_rate == pytest.approx(kg.evanescent_decay_rate(0.6, 1.0), rel=0.02)
