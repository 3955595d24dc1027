import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stawsim.errors import InvalidArgumentError
from stawsim.pattern import DiffractionPattern, format_float, renormalized, total_variation
from stawsim.wavepacket import (GaussianSpec, WavePacket, from_mapping, gaussian_amplitude, make_gaussian,
                                make_two_peak, to_resonant_vector)

SQ = 1 / math.sqrt(2)


def test_fig1_pair_interference_sign():
    p = make_two_peak(SQ, -1j * SQ)
    assert (p[0] * p[2].conjugate()).imag == pytest.approx(0.5, abs=1e-15)
    assert p.even_only


def test_unsplit_packet():
    p = make_two_peak(1, 0)
    assert p[0] == 1
    assert list(p.items()) == [(0, 1 + 0j)]


def test_two_peak_normalises():
    p = make_two_peak(0.6, 0.8j)
    assert p.norm == pytest.approx(1.0, abs=1e-15)
    q = make_two_peak(3, 4j)
    assert q[0] == pytest.approx(0.6) and q[2] == pytest.approx(0.8j)


def test_two_peak_rejects_zero():
    with pytest.raises(InvalidArgumentError):
        make_two_peak(0, 0)


@given(st.complex_numbers(max_magnitude=1e3), st.complex_numbers(max_magnitude=1e3))
@settings(max_examples=100)
def test_two_peak_norm_property(a0, a2):
    if abs(a0) < 1e-100 and abs(a2) < 1e-100:
        return
    assert make_two_peak(a0, a2).norm == pytest.approx(1.0, abs=1e-12)


def test_gaussian_modulus_and_symmetry():
    spec = GaussianSpec(10, math.pi, 1)
    p = make_gaussian(spec)
    m = np.arange(-15, 16)
    w = np.array([abs(p[2 * k]) ** 2 for k in m])
    ratio = w / w[15]
    assert np.allclose(ratio, np.exp(-(m**2) / 10.0), rtol=1e-12)
    assert np.allclose(w, w[::-1], rtol=1e-13)


@pytest.mark.parametrize("alpha", [0.0, 0.3, math.pi / 2, math.pi])
@pytest.mark.parametrize("sign", [-1, 0, 1])
def test_gaussian_phase_ramp(alpha, sign):
    p = make_gaussian(GaussianSpec(10, alpha, sign))
    step = alpha + sign * math.pi / 2
    for m in range(-8, 9):
        ratio = p[2 * m] / p[2 * (m - 1)]
        expected = np.exp(1j * step - (m**2 - (m - 1) ** 2) / 20.0)
        assert ratio == pytest.approx(expected, rel=1e-12)


def test_gaussian_normalisation_and_raw_sum():
    p = make_gaussian(GaussianSpec(10))
    assert p.norm == pytest.approx(1.0, abs=1e-12)
    # independent Riemann sum of the closed form
    m = np.arange(-400, 401)
    raw = np.sum(np.exp(-(m**2) / 10.0)) / math.sqrt(10 * math.pi)
    assert abs(raw - 1.0) < 1e-6
    assert p.raw_norm == pytest.approx(raw, rel=1e-12)
    assert np.all(p.amplitudes[1::2] == 0)


def test_gaussian_rejects_bad_width():
    for M in (0, -1, math.nan, math.inf):
        with pytest.raises(InvalidArgumentError):
            GaussianSpec(M)
    with pytest.raises(InvalidArgumentError):
        GaussianSpec(10, 0, 2)


def test_gaussian_amplitude_vectorised():
    spec = GaussianSpec(4, 0.1, -1)
    v = gaussian_amplitude(np.array([0.0, 1.0]), spec)
    assert v[0] == pytest.approx((math.pi * 4) ** -0.25)


def test_resonant_vector_two_peak():
    s = to_resonant_vector(make_two_peak(0.6, 0.8j))
    assert s.representation == "s"
    assert s[0] == pytest.approx(0.6) and s[2] == pytest.approx(0.8j)
    assert s[1] == 0 and s[4] == 0
    assert to_resonant_vector(make_two_peak(1, 0))[0] == 1


def test_resonant_vector_gaussian_width():
    s = to_resonant_vector(make_gaussian(GaussianSpec(10)))
    m = s.orders[::2]
    w = np.abs(s.amplitudes[::2]) ** 2
    var = np.sum(w * m**2) / np.sum(w)
    # exp(-m^2 / M1) on the integer lattice has variance M1 / 2
    assert var == pytest.approx(40.0 / 2, rel=1e-9)


def test_resonant_vector_needs_even_packet():
    with pytest.raises(InvalidArgumentError):
        to_resonant_vector(from_mapping({0: 1, 1: 1}))


def test_packet_json_roundtrip():
    p = make_two_peak(0.6, 0.8j, p0=1.5)
    q = WavePacket.from_json(p.to_json())
    assert q.p0 == 1.5
    assert np.allclose(q.amplitudes, p.amplitudes)


def test_packet_views():
    p = from_mapping({-4: 1, 2: 1j})
    assert p.half_support() == 4
    assert p.parity == "even-only"
    m_min, c = p.even_sites()
    assert m_min == -2 and c.size == 4
    assert from_mapping({1: 1}).parity == "general"
    with pytest.raises(InvalidArgumentError):
        from_mapping({})
    with pytest.raises(InvalidArgumentError):
        from_mapping({0: 0})


# --- patterns -----------------------------------------------------------

def test_pattern_views_and_checks():
    pat = DiffractionPattern(-2, np.array([0.1, 0.0, 0.2, 0.0, 0.7]))
    assert pat[-2] == 0.1 and pat[5] == 0.0
    assert pat.forward_fraction() == pytest.approx(0.7)
    assert pat.backward_fraction() == pytest.approx(0.1)
    assert pat.first_moment() == pytest.approx(1.2)
    assert pat.peak_order() == 2
    assert pat.truncation_bound == 2
    pat.check_normalized()
    with pytest.raises(ValueError):
        DiffractionPattern(0, np.array([0.5])).check_normalized()
    with pytest.raises(ValueError):
        DiffractionPattern(0, np.array([1.5, -0.5])).check_normalized()


def test_pattern_csv_full_precision():
    w = 1 / 3
    text = DiffractionPattern(0, np.array([w, 1 - w])).to_csv()
    lines = text.splitlines()
    assert lines[0] == "n,W"
    assert float(lines[1].split(",")[1]) == w
    assert format_float(0.1) == "0.10000000000000001"


def test_pattern_json_roundtrip():
    pat = renormalized(-3, np.array([1.0, 2.0, 3.0]), {"u": 2.0})
    back = DiffractionPattern.from_json(pat.to_json())
    assert back.n_min == -3 and np.array_equal(back.probabilities, pat.probabilities)
    assert back.meta == {"u": 2.0}


def test_total_variation_disjoint_supports():
    a = DiffractionPattern(0, np.array([1.0]))
    b = DiffractionPattern(5, np.array([1.0]))
    assert total_variation(a, b) == 1.0
    assert total_variation(a, a) == 0.0
