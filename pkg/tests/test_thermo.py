"""Thermodynamic map, first-law bookkeeping, and protocol reconstruction."""

from __future__ import annotations

import math

import numpy as np
import pytest

from oscsqueeze import (
    ConstraintViolationError,
    TanhProfile,
    ThermalState,
    energy,
    entropy_from_eps,
    entropy_slope,
    eps_from_entropy,
    first_law_residual,
    force,
    husimi_q,
    integrate_mode,
    positive_mode_ic,
    reconstruct_from_omega_prime,
    squeeze_record,
    squeezing_parameter,
    temperature,
    thermal_state_at,
)


class TestEntropyMap:
    def test_round_trip(self):
        eps = np.logspace(-6, math.log10(30.0), 1000)
        back = np.array([eps_from_entropy(entropy_from_eps(e)) for e in eps])
        assert np.abs(back / eps - 1.0).max() < 1e-12

    def test_closed_form_point(self):
        # eps = ln 2 gives coth(eps/2) = 3 and S = 2 ln 2
        assert entropy_from_eps(math.log(2.0)) == pytest.approx(
            2.0 * math.log(2.0), abs=1e-15)

    def test_monotone_decreasing(self):
        eps = np.linspace(0.01, 20.0, 500)
        s = np.array([entropy_from_eps(e) for e in eps])
        assert (np.diff(s) < 0).all()

    @pytest.mark.parametrize("eps", [0.1, 1.0, 5.0])
    def test_slope_matches_difference_quotient(self, eps):
        h = 1e-6 * eps
        fd = (entropy_from_eps(eps + h) - entropy_from_eps(eps - h)) / (2 * h)
        assert entropy_slope(eps) == pytest.approx(fd, rel=1e-7)

    def test_extreme_arguments_stay_finite(self):
        assert entropy_from_eps(1e-12) > 20.0
        assert entropy_from_eps(700.0) == pytest.approx(0.0, abs=1e-290)
        with pytest.raises(ValueError):
            entropy_from_eps(0.0)
        with pytest.raises(ValueError):
            eps_from_entropy(-0.5)


class TestStateFunctions:
    def test_energy_is_force_times_frequency(self):
        for eps in (0.2, 1.0, 7.0):
            for w in (0.5, 1.0, 4.0):
                assert energy(w, eps) == pytest.approx(-force(eps) * w,
                                                       rel=1e-14)

    def test_temperature_definition(self):
        assert temperature(3.0, 1.5) == pytest.approx(2.0, rel=1e-14)

    def test_zero_squeezing_limits(self):
        assert squeezing_parameter(0.0, 2.0, 2.0) == 0.0
        assert husimi_q(0.0, 2.0, 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_husimi_and_parameter_consistent(self):
        s, wi, w = 0.8, 1.0, 2.5
        r = squeezing_parameter(s, wi, w)
        assert husimi_q(s, wi, w) - 1.0 == pytest.approx(
            2.0 * math.sinh(r) ** 2, rel=1e-12)

    def test_energy_forms_agree_along_trajectory(self, demo_record):
        # omega_eff = omega + Omega equals the amplitude-form expression
        # (omega/2)(omega_I/(g- omega) + omega g-/omega_I
        #           + (dg-)^2/(4 omega_I omega g-)) pointwise
        rec = demo_record
        amp = 0.5 * rec.omega * (
            rec.omega_I / (rec.g_minus * rec.omega)
            + rec.omega * rec.g_minus / rec.omega_I
            + rec.dg_minus**2 / (4.0 * rec.omega_I * rec.omega * rec.g_minus))
        eff = rec.omega + rec.Omega
        assert np.abs(amp / eff - 1.0).max() < 1e-10


class TestFirstLaw:
    def test_residual_shrinks_quadratically(self):
        st = ThermalState(omega=1.0, Omega=0.0, omega_I=1.0, epsilon=1.0)

        def residual(delta):
            chk = first_law_residual(
                st,
                d_omega_eff=delta,
                d_s_ent=entropy_from_eps(1.0 + 0.5 * delta)
                - entropy_from_eps(1.0 - 0.5 * delta),
            )
            return abs(chk.residual)

        ratio = residual(1e-3) / residual(5e-4)
        assert 3.8 < ratio < 4.2

    def test_adiabatic_stroke_is_pure_work(self):
        st = ThermalState(omega=2.0, Omega=0.3, omega_I=1.0, epsilon=0.7)
        chk = first_law_residual(st, d_omega_eff=1e-4, d_s_ent=0.0)
        assert chk.heat_term == 0.0
        assert chk.delta_E == pytest.approx(chk.work_term, rel=1e-10)

    def test_rejects_nonpositive_final_frequency(self):
        st = ThermalState(omega=1.0, Omega=0.0, omega_I=1.0, epsilon=1.0)
        with pytest.raises(ValueError):
            first_law_residual(st, d_omega_eff=-2.0, d_s_ent=0.0)


class TestThermalState:
    def test_basic_invariants(self):
        st = ThermalState(omega=2.0, Omega=0.5, omega_I=1.0, epsilon=0.8)
        assert st.omega_eff == pytest.approx(2.5)
        assert st.T0 == pytest.approx(1.0 / 0.8)
        assert st.T == pytest.approx(2.5 / 0.8)
        assert st.S_factor == pytest.approx(0.5)
        assert st.Q - 1.0 == pytest.approx(st.S_factor / st.omega, rel=1e-12)
        assert math.sinh(st.r) ** 2 == pytest.approx(
            st.S_factor / (2.0 * st.omega), rel=1e-12)
        assert st.E == pytest.approx(-st.F_omega * st.omega_eff, rel=1e-14)

    def test_tiny_negative_noise_clamped(self):
        st = ThermalState(omega=1.0, Omega=-1e-15, omega_I=1.0, epsilon=1.0)
        assert st.S_factor == 0.0
        assert st.r == 0.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            ThermalState(omega=0.0, Omega=0.0, omega_I=1.0, epsilon=1.0)
        with pytest.raises(ValueError):
            ThermalState(omega=1.0, Omega=-0.1, omega_I=1.0, epsilon=1.0)
        with pytest.raises(ValueError):
            ThermalState(omega=1.0, Omega=0.0, omega_I=1.0, epsilon=-1.0)

    def test_pick_from_record(self, demo_record):
        st = thermal_state_at(demo_record, epsilon=1.0, index=-1)
        assert st.omega == pytest.approx(float(demo_record.omega[-1]))
        assert st.Omega == pytest.approx(float(demo_record.Omega[-1]))
        mid = len(demo_record.t) // 2
        st2 = thermal_state_at(demo_record, epsilon=1.0, index=mid)
        assert st2.omega == pytest.approx(float(demo_record.omega[mid]))


def forward_run(omega_plus=2.0, d=0.5, omega0=5.0):
    prof = TanhProfile.from_omegas(omega_minus=1.0, omega_plus=omega_plus,
                                   omega0=omega0, d=d)
    t_end = 8.0 * d + 4.0 * np.pi / omega_plus
    ic = positive_mode_ic(prof, -8.0 * d)
    traj = integrate_mode(prof, ic, t_end, rtol=1e-10, atol=1e-12,
                          points_per_period=64)
    return prof, squeeze_record(traj, prof)


class TestReconstruction:
    def test_round_trip_from_forward_run(self):
        prof, rec = forward_run()
        omega_prime = rec.omega * rec.g_minus / rec.omega_I - 1.0
        out = reconstruct_from_omega_prime(rec.t, rec.Omega, omega_prime,
                                           rec.omega_I, float(rec.omega[0]))
        assert np.abs(out.omega / rec.omega - 1.0).max() < 5e-4
        assert np.abs(out.g_minus / rec.g_minus - 1.0).max() < 5e-4
        scale = np.abs(rec.dg_minus).max()
        assert np.abs(out.dg_minus - rec.dg_minus).max() < 5e-3 * scale

    def test_flat_protocol_reconstructs_constant_frequency(self):
        t = np.linspace(0.0, 10.0, 101)
        out = reconstruct_from_omega_prime(t, np.zeros_like(t),
                                           np.zeros_like(t), 1.0, 2.0)
        assert np.abs(out.omega - 2.0).max() == 0.0
        assert np.abs(out.g_minus - 0.5).max() < 1e-15
        assert np.abs(out.dg_minus).max() == 0.0

    def test_inconsistent_protocol_raises_with_location(self):
        # Omega = 0 with nonzero Omega' violates the kinetic budget
        t = np.linspace(0.0, 1.0, 16)
        with pytest.raises(ConstraintViolationError) as exc:
            reconstruct_from_omega_prime(t, np.zeros_like(t),
                                         np.full_like(t, 0.5), 1.0, 1.0)
        assert exc.value.t is not None

    def test_rejects_malformed_protocols(self):
        t = np.linspace(0.0, 1.0, 8)
        z = np.zeros_like(t)
        with pytest.raises(ValueError, match="increasing"):
            reconstruct_from_omega_prime(t[::-1].copy(), z, z, 1.0, 1.0)
        with pytest.raises(ValueError, match="matching"):
            reconstruct_from_omega_prime(t, z[:-1], z, 1.0, 1.0)
        with pytest.raises(ValueError, match="non-negative"):
            reconstruct_from_omega_prime(t, z - 0.1, z, 1.0, 1.0)
        with pytest.raises(ValueError, match="-1"):
            reconstruct_from_omega_prime(t, z + 0.5, z - 1.5, 1.0, 1.0)
        with pytest.raises(ValueError):
            reconstruct_from_omega_prime(t, z, z, -1.0, 1.0)
        with pytest.raises(ValueError):
            reconstruct_from_omega_prime(t[:3], z[:3], z[:3], 1.0, 1.0)

    def test_result_arrays_are_read_only(self):
        t = np.linspace(0.0, 10.0, 101)
        out = reconstruct_from_omega_prime(t, np.zeros_like(t),
                                           np.zeros_like(t), 1.0, 2.0)
        with pytest.raises(ValueError):
            out.omega[0] = 99.0
