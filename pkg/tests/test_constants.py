import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import constants as sc

from solitonlab.constants import (CODATA2018, PhysicalConstants, UnitMode, UnitSystem,
                                  compton_cutoff, planck_length, planck_mass, waveguide_width)
from solitonlab.errors import DomainError

# scipy ships a later CODATA release; the shared digits are ample for these checks
M_E = sc.m_e


def test_hbar_is_h_over_two_pi():
    assert CODATA2018.hbar == pytest.approx(CODATA2018.h / (2 * math.pi), rel=1e-15)


def test_values_positive_and_frozen():
    assert all(v > 0 for v in CODATA2018.as_dict().values())
    with pytest.raises(Exception):
        CODATA2018.c = 1.0
    with pytest.raises(DomainError):
        PhysicalConstants(G=0.0)


def test_compton_cutoff_electron():
    oracle = M_E * sc.c**2 / sc.h
    assert compton_cutoff(CODATA2018.m_e) == pytest.approx(oracle, rel=1e-8)
    assert compton_cutoff(CODATA2018.m_e) == pytest.approx(1.2356e20, rel=1e-4)


def test_compton_cutoff_linear_in_mass():
    m = CODATA2018.m_e
    assert compton_cutoff(2 * m) == 2 * compton_cutoff(m)


@pytest.mark.parametrize("mass", [0.0, -1.0])
def test_non_positive_mass_rejected(mass):
    with pytest.raises(DomainError):
        compton_cutoff(mass)
    with pytest.raises(DomainError):
        waveguide_width(mass)


def test_waveguide_width_is_half_compton_wavelength():
    oracle = 0.5 * sc.h / (M_E * sc.c)
    assert waveguide_width(CODATA2018.m_e) == pytest.approx(oracle, rel=1e-8)
    assert waveguide_width(2 * CODATA2018.m_e) == pytest.approx(0.5 * waveguide_width(CODATA2018.m_e),
                                                               rel=1e-15)


def test_cutoff_times_width_is_half_c():
    for m in np.logspace(-35, -20, 20):
        assert compton_cutoff(m) * waveguide_width(m) == pytest.approx(CODATA2018.c / 2, rel=1e-12)


def test_planck_length():
    lp = planck_length()
    assert 1e-35 <= lp < 1e-34
    assert lp**2 * CODATA2018.c**3 / CODATA2018.G == pytest.approx(CODATA2018.hbar, rel=1e-12)
    oracle = math.sqrt(sc.hbar * sc.G / sc.c**3)
    assert lp == pytest.approx(oracle, rel=1e-3)
    assert lp == pytest.approx(1.616e-35, rel=1e-3)


def test_planck_mass():
    mp = planck_mass()
    assert 1e-8 <= mp < 1e-7
    assert planck_length() * mp == pytest.approx(CODATA2018.hbar / CODATA2018.c, rel=1e-12)
    assert mp == pytest.approx(math.sqrt(sc.hbar * sc.c / sc.G), rel=1e-3)
    assert mp == pytest.approx(2.176e-8, rel=1e-3)


def test_natural_units_are_reduced_compton_scales():
    units = UnitSystem()
    assert units.mode is UnitMode.NATURAL
    assert units.scale("length") == pytest.approx(sc.hbar / (M_E * sc.c), rel=1e-8)
    assert units.scale("energy") == pytest.approx(M_E * sc.c**2, rel=1e-8)
    assert units.scale("velocity") == pytest.approx(CODATA2018.c, rel=1e-15)
    with pytest.raises(DomainError):
        units.scale("charge")


@given(st.floats(1e-30, 1e30), st.sampled_from(["length", "time", "mass", "energy",
                                                   "momentum", "action", "frequency"]))
def test_unit_round_trip(value, quantity):
    units = UnitSystem()
    assert units.to_si(units.to_natural(value, quantity), quantity) == pytest.approx(value, rel=1e-12)
