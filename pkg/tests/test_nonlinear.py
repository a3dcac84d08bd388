import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solitonlab import nonlinear as nl
from solitonlab.errors import ConfigurationError, NumericalAbort
from solitonlab.grid import Grid1D
from solitonlab.potentials import PotentialSpec, harmonic, linear_ramp
from solitonlab.stationary import solve_bound_states

WIDE = Grid1D(-40.0, 40.0, 2048)
BOX = Grid1D(-5 * math.pi, 5 * math.pi, 256)


def free_gaussian(z, t, width, k0):
    """Exact free evolution of exp(-z^2/2w^2 + i k0 z) with hbar = m = 1."""
    s = 1.0 + 1j * t / width**2
    return np.exp(-((z - k0 * t) ** 2) / (2 * width**2 * s) + 1j * k0 * z
                  - 0.5j * k0 * k0 * t) / np.sqrt(s)


def test_breather_examples():
    assert nl.breather_exact(1.0, 0.0, 0.0, 0.0, 0.0) == pytest.approx(1.0 + 0j)
    assert nl.breather_exact(1.0, 0.0, 0.0, 0.0, math.pi) == pytest.approx(-1.0 + 0j, abs=1e-15)


@given(st.floats(0.1, 3), st.floats(-3, 3), st.floats(-5, 5), st.floats(-10, 10), st.floats(0, 10))
def test_breather_modulus(a, v, z0, z, t):
    u = nl.breather_exact(a, v, z0, z, t)
    assert abs(u) == pytest.approx(a / math.cosh(a * (z - v * t - z0)), rel=1e-12, abs=1e-300)


def test_sech_field_defaults_give_breather():
    field = nl.sech_field(WIDE, a=1.3, v=0.7, z0=2.0)
    np.testing.assert_allclose(field.u, nl.breather_exact(1.3, 0.7, 2.0, WIDE.z, 0.0), atol=1e-15)


def test_periodic_sech_needs_fitting_wavenumber():
    nl.sech_field(BOX, a=1.0, wavenumber=1.0, amplitude=1.0, periodic=True)
    with pytest.raises(ConfigurationError):
        nl.sech_field(BOX, a=1.0, wavenumber=0.55, periodic=True)


def test_periodic_sech_is_smooth_at_wrap():
    u = np.abs(nl.sech_field(BOX, a=0.5, amplitude=1.0, wavenumber=0.0, periodic=True).u)
    spec = np.abs(np.fft.fft(u))
    assert spec[BOX.n // 4:3 * BOX.n // 4].max() < 1e-12 * spec.max()


def test_field_validation():
    with pytest.raises(ConfigurationError):
        nl.ComplexField1D(Grid1D(0, 1, 100), np.zeros(100))
    with pytest.raises(ConfigurationError):
        nl.ComplexField1D(Grid1D(0, 1, 64), np.zeros(32))


@pytest.mark.parametrize("evolve", [
    lambda f: nl.evolve_nls(f, 1e-3, 50),
    lambda f: nl.evolve_gp(f, harmonic(), -1.0, True, 1e-3, 50),
    lambda f: nl.evolve_nlq(f, None, 1e-3, 50),
])
def test_zero_field_is_fixed_point(evolve):
    out = evolve(nl.ComplexField1D(BOX, np.zeros(BOX.n)))
    assert not np.any(out.u)


def test_nls_short_breather_run():
    out = nl.evolve_nls(nl.sech_field(WIDE, 1.0), 1e-4, 10_000)
    assert out.t == pytest.approx(1.0)
    assert np.max(np.abs(out.u - nl.breather_exact(1.0, 0.0, 0.0, WIDE.z, out.t))) < 1e-8


def test_nls_strang_second_order():
    errs = []
    for dt in (1e-2, 5e-3):
        out = nl.evolve_nls(nl.sech_field(WIDE, 1.0, v=0.5), dt, int(round(1.0 / dt)))
        errs.append(np.max(np.abs(out.u - nl.breather_exact(1.0, 0.5, 0.0, WIDE.z, 1.0))))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_nls_invariants_and_velocity():
    u0 = nl.sech_field(WIDE, 1.0, v=1.0)
    c0 = nl.conserved_set(u0, "nls")
    times, centroids = [0.0], [nl.centroid(u0)]
    f = u0
    for _ in range(5):
        f = nl.evolve_nls(f, 1e-3, 200)
        times.append(f.t)
        centroids.append(nl.centroid(f))
    c1 = nl.conserved_set(f, "nls")
    assert abs(c1.norm - c0.norm) / c0.norm < 1e-10
    assert abs(c1.momentum - c0.momentum) < 1e-10
    assert abs(c1.energy - c0.energy) < 1e-8
    assert np.polyfit(times, centroids, 1)[0] == pytest.approx(1.0, abs=1e-4)


def test_conjugation_reverses_time():
    u0 = nl.sech_field(WIDE, 1.2, v=0.4)
    fwd = nl.evolve_nls(u0, 1e-3, 500)
    back = nl.evolve_nls(nl.ComplexField1D(WIDE, np.conj(fwd.u)), 1e-3, 500)
    assert np.max(np.abs(np.conj(back.u) - u0.u)) < 1e-11


def test_norm_monitor_aborts():
    with pytest.raises(NumericalAbort):
        nl._check_norm(np.full(WIDE.n, 2.0 + 0j), WIDE, WIDE.integrate(np.ones(WIDE.n)), 1.0)


def test_gp_without_coupling_is_free_propagation():
    grid = Grid1D(-60, 60, 2048)
    out = nl.evolve_gp(nl.gaussian_field(grid, 1.0, 0.0, 1.0), None, 0.0, False, 1e-2, 200)
    assert np.max(np.abs(out.u - free_gaussian(grid.z, out.t, 1.0, 1.0))) < 1e-10


def test_gp_maps_to_nls():
    g = -2.0
    amp, time_factor = nl.gp_nls_map(g)
    phi0 = nl.ComplexField1D(WIDE, amp * nl.breather_exact(1.0, 0.5, 0.0, WIDE.z, 0.0))
    out = nl.evolve_gp(phi0, None, g, False, 1e-4, 10_000)
    expected = amp * nl.breather_exact(1.0, 0.5, 0.0, WIDE.z, time_factor * out.t)
    assert np.max(np.abs(out.u - expected)) < 1e-7
    with pytest.raises(ConfigurationError):
        nl.gp_nls_map(1.0)


def test_gp_rest_energy_is_a_global_phase():
    grid = Grid1D(-20, 20, 512)
    phi0 = nl.gaussian_field(grid, 1.0, 0.0, 0.5)
    plain = nl.evolve_gp(phi0, None, 0.7, False, 1e-3, 300, mass=2.0)
    rest = nl.evolve_gp(phi0, None, 0.7, True, 1e-3, 300, mass=2.0, c=1.5)
    np.testing.assert_allclose(rest.u, plain.u * np.exp(-1j * 2.0 * 1.5**2 * plain.t), atol=1e-12)


def test_gp_harmonic_ground_state_is_stationary():
    grid = Grid1D(-20.0, 20.0, 1024)
    trap = harmonic(domain=(-20.0, 20.0))
    ground = solve_bound_states(trap, 1, n_grid=1024, method="fourier")
    np.testing.assert_allclose(ground.z, grid.z)
    phi0 = nl.ComplexField1D(grid, ground.states[0])
    out = nl.evolve_gp(phi0, trap, 0.0, False, 5e-4, 20_000)
    assert np.max(np.abs(np.abs(out.u) - np.abs(phi0.u))) < 1e-8


def test_nlq_sech_at_rest_keeps_shape():
    psi0 = nl.sech_field(BOX, 1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    out = nl.evolve_nlq(psi0, None, 1e-3, 1000)
    assert np.max(np.abs(np.abs(out.u) - np.abs(psi0.u))) < 1e-8


def test_nlq_matches_locked_gp():
    a, amp = 1.0, 1.3
    g = nl.locked_coupling(a, amp)
    psi0 = nl.sech_field(BOX, a, amplitude=amp, wavenumber=0.0, periodic=True)
    nlq = nl.evolve_nlq(psi0, None, 1e-3, 500)
    gp = nl.evolve_gp(psi0, None, g, False, 1e-4, 5000)
    # -Q = g|psi|^2 + hbar^2 a^2 / 2m, a constant that only rotates the phase
    shift = np.exp(-0.5j * a * a * gp.t)
    assert np.max(np.abs(nlq.u - gp.u * shift)) < 1e-6


def test_nlq_time_step_guard():
    psi0 = nl.sech_field(BOX, 1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    with pytest.raises(ConfigurationError):
        nl.evolve_nlq(psi0, None, 0.1, 1)


def test_nlq_underflow_aborts():
    grid = Grid1D(-32.0, 32.0, 2048)
    u = 1 / np.cosh(3 * (grid.z - 15)) + 1 / np.cosh(3 * (grid.z + 15))
    diag = nl.NLQDiagnostics()
    with pytest.raises(NumericalAbort):
        nl.evolve_nlq(nl.ComplexField1D(grid, u), None, 1e-4, 1, diagnostics=diag)
    assert diag.underflow_fraction > 0.1


def test_dealias_mask_keeps_two_thirds():
    keep = nl.dealias_mask(BOX)
    assert keep[0]
    assert np.count_nonzero(keep) == pytest.approx(2 * BOX.n / 3, abs=2)


def test_conserved_set_examples():
    c = nl.conserved_set(nl.sech_field(WIDE, 1.0), "nls")
    assert c.norm == pytest.approx(2.0, rel=1e-12)
    assert c.momentum == pytest.approx(0.0, abs=1e-14)
    # breather energy int(|u_z|^2 - |u|^4) = 2/3 - 4/3
    assert c.energy == pytest.approx(-2 / 3, rel=1e-10)
    with pytest.raises(ConfigurationError):
        nl.conserved_set(nl.sech_field(WIDE, 1.0), "kdv")


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * math.pi), st.sampled_from(["nls", "gp", "nlq"]))
def test_conserved_set_phase_invariant(alpha, eq):
    f = nl.gaussian_field(WIDE, 1.5, 1.0, 0.8)
    g = nl.ComplexField1D(WIDE, f.u * np.exp(1j * alpha))
    a, b = nl.conserved_set(f, eq, g=0.4), nl.conserved_set(g, eq, g=0.4)
    assert b.norm == pytest.approx(a.norm, rel=1e-12)
    assert b.momentum == pytest.approx(a.momentum, rel=1e-10)
    assert b.energy == pytest.approx(a.energy, rel=1e-10)


def test_evolve_dispatch():
    f = nl.sech_field(BOX, 1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    assert nl.evolve("nls", f, 1e-3, 2).t == pytest.approx(2e-3)
    assert nl.evolve("gp", f, 1e-3, 2, V=PotentialSpec(analytic="zero")).t == pytest.approx(2e-3)
    assert nl.evolve("nlq", f, 1e-3, 2).t == pytest.approx(2e-3)
    with pytest.raises(ConfigurationError):
        nl.evolve("kdv", f, 1e-3, 2)


def test_nlq_linear_ramp_accelerates_rigidly():
    grid = Grid1D(-5 * math.pi, 5 * math.pi, 512)
    psi0 = nl.sech_field(grid, 1.0, z0=-2.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    ts, cs = [0.0], [nl.centroid(psi0)]
    f = psi0
    for _ in range(10):
        f = nl.evolve_nlq(f, linear_ramp(0.5), 1e-3, 200)
        ts.append(f.t)
        cs.append(nl.centroid(f))
    assert 2 * np.polyfit(ts, cs, 2)[0] == pytest.approx(0.5, abs=1e-6)
    # the envelope arrives intact after travelling F t^2 / 2 = 1
    moved = nl.sech_field(grid, 1.0, z0=-1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    assert np.max(np.abs(np.abs(f.u) - np.abs(moved.u))) < 1e-6
    # momentum gained is F t per unit norm: the phase gradient is F t at the peak
    peak = int(np.argmax(np.abs(f.u)))
    k_local = np.angle(f.u[peak + 1] / f.u[peak - 1]) / (2 * grid.dz)
    assert k_local == pytest.approx(0.5 * f.t, rel=1e-3)


def test_nlq_ramp_runs_compose():
    psi0 = nl.sech_field(BOX, 1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    whole = nl.evolve_nlq(psi0, linear_ramp(0.3), 1e-3, 400)
    half = nl.evolve_nlq(nl.evolve_nlq(psi0, linear_ramp(0.3), 1e-3, 200), linear_ramp(0.3),
                         1e-3, 200)
    np.testing.assert_allclose(half.u, whole.u, atol=1e-12)


def test_conserved_set_under_linear_ramp():
    grid = Grid1D(-5 * math.pi, 5 * math.pi, 512)
    psi0 = nl.sech_field(grid, 1.0, z0=-1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    ramp = linear_ramp(0.5)
    start = nl.conserved_set(psi0, "nlq", ramp)
    out = nl.evolve_nlq(psi0, ramp, 1e-3, 1000)
    end = nl.conserved_set(out, "nlq", ramp)
    assert end.norm == pytest.approx(start.norm, rel=1e-12)
    # momentum grows by F t per unit norm; the energy stays put
    assert end.momentum == pytest.approx(0.5 * out.t * start.norm, rel=1e-9)
    assert abs(end.energy - start.energy) < 1e-9


def test_gp_rejects_unbounded_ramp():
    psi0 = nl.sech_field(BOX, 1.0, amplitude=1.0, wavenumber=0.0, periodic=True)
    with pytest.raises(ConfigurationError):
        nl.evolve_gp(psi0, linear_ramp(0.5), 0.0, False, 1e-3, 1)
