import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stawsim.adiabatic import (AdiabaticParams, PulseParams, asymmetry, asymmetry_closed_form, bessel_support,
                               diffract, interaction_parameter, interference_kernel, mean_momentum,
                               mean_momentum_closed_form, pulse_area, raman_nath_check, recoil_frequency,
                               two_peak_diffract)
from stawsim.errors import InvalidArgumentError, RegimeError
from stawsim.pattern import max_abs_difference
from stawsim.wavepacket import GaussianSpec, from_mapping, make_gaussian, make_two_peak
from tests.oracles import direct_pattern, phase_grating_pattern

SQ = 1 / math.sqrt(2)
FIG1 = (SQ, -1j * SQ)


def _random_pair(rng):
    a0 = complex(*rng.normal(size=2))
    a2 = complex(*rng.normal(size=2))
    return a0, a2


# --- pulses -------------------------------------------------------------

def test_pulse_area_by_quadrature():
    for env in ("rectangular", "sin2"):
        p = PulseParams(1.0, 1.0, 2.7, env)
        t = np.linspace(0, p.duration, 20001)
        f2 = np.array([p.envelope_value(x) ** 2 for x in t])
        area = np.sum((f2[1:] + f2[:-1]) / 2) * (t[1] - t[0])
        assert pulse_area(p) == pytest.approx(area, rel=1e-7)


def test_interaction_parameter():
    ap = interaction_parameter(PulseParams(50.0, -500.0, 1.0))
    assert ap.u == pytest.approx(10.0) and ap.detuning_sign == -1
    assert interaction_parameter(PulseParams(50.0, 500.0, 1.0, "sin2")).u == pytest.approx(3.75)
    with pytest.raises(RegimeError):
        interaction_parameter(PulseParams(1.0, 0.0, 1.0))


def test_param_validation():
    with pytest.raises(InvalidArgumentError):
        PulseParams(1, 1, 1, "gauss")
    with pytest.raises(InvalidArgumentError):
        PulseParams(math.nan, 1, 1)
    with pytest.raises(InvalidArgumentError):
        AdiabaticParams(-1.0)
    with pytest.raises(InvalidArgumentError):
        AdiabaticParams(1.0, 0)


# --- engines ------------------------------------------------------------

@pytest.mark.parametrize("u", [0.0, 0.7, 5.0, 31.4])
def test_unsplit_is_bessel_squared(u):
    pat = diffract(make_two_peak(1, 0), AdiabaticParams(u))
    for k in range(-10, 11):
        assert pat[2 * k] == pytest.approx(phase_grating_pattern(u)[k], abs=1e-13)
        assert pat[2 * k + 1] == 0.0


def test_zero_u_leaves_input():
    p = from_mapping({-2: 0.3, 0: 0.4j, 4: -0.5})
    pat = diffract(p, AdiabaticParams(0.0))
    for n, w in p.probabilities().items():
        assert pat[n] == pytest.approx(w, abs=1e-15)


@pytest.mark.parametrize("sign", [-1, 1])
@pytest.mark.parametrize("u", [0.5, 3.0, 10.0])
def test_diffract_matches_fourier_oracle(u, sign):
    p = from_mapping({-2: 0.3, 0: 0.4j, 2: -0.5 + 0.1j, 6: 0.2})
    pat = diffract(p, AdiabaticParams(u, sign))
    ref = direct_pattern(p, u, sign)
    assert max(abs(pat[n] - w) for n, w in ref.items()) < 1e-13


def test_diffract_rejects_odd_sites():
    with pytest.raises(InvalidArgumentError):
        diffract(from_mapping({0: 1, 1: 1}), AdiabaticParams(1.0))


@given(st.floats(0, 60), st.sampled_from([-1, 1]))
@settings(max_examples=40, deadline=None)
def test_normalisation(u, sign):
    pat = diffract(make_gaussian(GaussianSpec(5, 0.4, sign)), AdiabaticParams(u, sign))
    assert np.all(pat.probabilities >= 0)
    assert abs(pat.total + pat.dropped_mass - 1.0) < 1e-12
    assert pat.dropped_mass < 1e-12
    assert np.all(pat.probabilities[pat.orders % 2 != 0] == 0)


def test_two_peak_matches_general_engine(rng):
    for _ in range(100):
        a0, a2 = _random_pair(rng)
        params = AdiabaticParams(rng.uniform(0, 20), int(rng.choice([-1, 1])))
        a = two_peak_diffract(a0, a2, params)
        b = diffract(make_two_peak(a0, a2), params)
        assert max_abs_difference(a, b) < 1e-12


def test_fig1_two_peak_matches_general():
    params = AdiabaticParams(10.0, -1)
    assert max_abs_difference(two_peak_diffract(*FIG1, params), diffract(make_two_peak(*FIG1), params)) < 1e-12


# --- asymmetry ----------------------------------------------------------

def test_kernel_by_quadrature():
    from scipy.integrate import quad
    from scipy.special import j0, j1
    for u in (0.5, 3.0, 17.0):
        val = quad(lambda x: x * (j0(x) ** 2 + j1(x) ** 2), 0, u, limit=200)[0] / u
        assert interference_kernel(u) == pytest.approx(val, rel=1e-10)
    assert interference_kernel(0.0) == 0.0


def test_symmetric_pattern_has_no_asymmetry():
    assert asymmetry(diffract(make_two_peak(1, 0), AdiabaticParams(7.3))) == pytest.approx(0, abs=1e-15)


def test_asymmetry_closed_form_fig1():
    params = AdiabaticParams(10.0, -1)
    direct = asymmetry(two_peak_diffract(*FIG1, params))
    assert asymmetry_closed_form(*FIG1, params) == pytest.approx(direct, abs=1e-10)


def test_asymmetry_closed_form_random(rng):
    for _ in range(100):
        a0, a2 = _random_pair(rng)
        params = AdiabaticParams(rng.uniform(1e-3, 50), int(rng.choice([-1, 1])))
        assert asymmetry_closed_form(a0, a2, params) == pytest.approx(
            asymmetry(two_peak_diffract(a0, a2, params)), abs=1e-10)


def test_asymmetry_edge_cases():
    assert asymmetry_closed_form(1, 0, AdiabaticParams(5.0)) == 0.0
    assert asymmetry_closed_form(*FIG1, AdiabaticParams(0.0)) == 0.0


def test_large_u_limit():
    pat = two_peak_diffract(*FIG1, AdiabaticParams(400.0, -1))
    assert abs(abs(asymmetry(pat)) - 2 / math.pi) < 0.01


def test_real_amplitudes_lose_asymmetry():
    pat = two_peak_diffract(SQ, SQ, AdiabaticParams(400.0))
    assert abs(asymmetry(pat)) < 0.01


def test_maximum_asymmetry_phase():
    phases = np.linspace(0, 2 * math.pi, 73)
    vals = [abs(asymmetry(two_peak_diffract(SQ, SQ * np.exp(1j * ph), AdiabaticParams(200.0)))) for ph in phases]
    best = phases[int(np.argmax(vals))]
    assert abs(abs(math.sin(best)) - 1.0) < 1e-3


# --- momentum -----------------------------------------------------------

def test_mean_momentum_fig1():
    params = AdiabaticParams(10.0, -1)
    assert mean_momentum(make_two_peak(*FIG1), params) == pytest.approx(11.0, abs=1e-10)
    assert mean_momentum_closed_form(*FIG1, params) == pytest.approx(11.0, abs=1e-12)


def test_mean_momentum_random(rng):
    for _ in range(100):
        a0, a2 = _random_pair(rng)
        params = AdiabaticParams(rng.uniform(1e-6, 20), int(rng.choice([-1, 1])))
        direct = mean_momentum(make_two_peak(a0, a2), params)
        closed = mean_momentum_closed_form(a0, a2, params)
        assert closed == pytest.approx(direct, rel=1e-10, abs=1e-12)


def test_mean_momentum_real_pair_and_unsplit():
    for u in (0.5, 5.0, 19.0):
        params = AdiabaticParams(u)
        assert mean_momentum(make_two_peak(1, 0), params) == pytest.approx(0.0, abs=1e-12)
        assert mean_momentum(make_two_peak(0.6, 0.8), params) == pytest.approx(2 * 0.64, abs=1e-12)


def test_forward_deflection_fig1():
    pat = two_peak_diffract(*FIG1, AdiabaticParams(100.0, -1))
    assert pat.forward_fraction() >= 0.80


# --- Raman-Nath ---------------------------------------------------------

def _sodium_drive(tau: float, boost: float = 1.0) -> PulseParams:
    w = recoil_frequency(23.0, 0.5e-6) * boost
    return PulseParams(50.0 / tau, -500.0 / tau, tau, "rectangular", w)


def test_recoil_frequency_sodium():
    assert recoil_frequency(23.0, 0.5e-6) / (2 * math.pi) == pytest.approx(3.45e4, rel=0.01)


def test_raman_nath_valid_and_scaling():
    rep = raman_nath_check(_sodium_drive(1e-9))
    assert rep.valid and rep.u == pytest.approx(10.0)
    assert not raman_nath_check(_sodium_drive(1e-9, 1000.0)).valid


def test_raman_nath_ratio_at_longer_pulse():
    rep = raman_nath_check(_sodium_drive(1e-7))
    assert rep.ratio == pytest.approx(4 * 100 * recoil_frequency(23.0, 0.5e-6) * 1e-7, rel=1e-12)
    assert not rep.valid


def test_raman_nath_zero_drive():
    rep = raman_nath_check(PulseParams(0.0, 1.0, 1.0, recoil_frequency=1.0))
    assert rep.lhs == 0.0 and rep.valid
    with pytest.raises(InvalidArgumentError):
        raman_nath_check(PulseParams(1.0, 1.0, 1.0))


def test_bessel_support_covers_mass():
    from stawsim.specfun import bessel_j_array
    for u in (0.0, 1.0, 40.0, 400.0):
        b = bessel_support(u)
        tail = 1.0 - np.sum(bessel_j_array(b, u).values ** 2)
        assert tail < 1e-13
