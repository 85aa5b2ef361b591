import cmath
import math

import pytest

import qhj


def test_parse_and_defaults():
    s = qhj.parse_scenario("scenario = harmonic\nomega = 1.0")
    assert s.kind == qhj.ScenarioKind.harmonic
    assert s.hbar == 1.0
    assert s.mass == 1.0
    round_trip = qhj.parse_scenario(qhj.serialize_scenario(s))
    assert round_trip.omega == s.omega


def test_resonant_denominator_rejected():
    with pytest.raises(qhj.QhjError, match="ResonantDenominator"):
        qhj.parse_scenario("scenario = driven\nomega = 1.0\nh = 0.3\nOmega = 1.0")


def test_closed_form_coefficients_at_zero():
    s = qhj.parse_scenario("scenario = harmonic\nomega = 1.0")
    c = qhj.ConstantSet()
    c.c2 = 1.0
    v = qhj.closed_form_coefficients(s, c, 0.0)
    assert v.alpha == 0.0
    assert v.xi == 1.0
    assert v.zeta == 0.0


def test_kernel_quarter_period_value():
    s = qhj.parse_scenario("scenario = harmonic\nomega = 1.0")
    K = qhj.kernel_fourier(s, 1.0)
    x, xt = 0.4, -1.1
    expected = math.sqrt(1.0 / (2.0 * math.pi)) * cmath.exp(
        -1j * (math.pi / 4.0 + x * xt)
    )
    assert abs(K(x, math.pi / 2.0, xt) - expected) < 1e-14


def test_propagate_ground_state_modulus():
    s = qhj.parse_scenario("scenario = harmonic\nomega = 1.0")
    K = qhj.kernel_fourier(s, 1.0)
    psi0 = qhj.gaussian_packet(-8.0, 0.01, 1601, 0.0, 0.0, 1.0, 1.0)
    psi = qhj.propagate(K, psi0, 0.9)
    drift = max(abs(abs(a) - abs(b)) for a, b in zip(psi.psi, psi0.psi))
    assert drift < 1e-9
    assert abs(psi.norm() - psi0.norm()) < 1e-8


def test_qhje_residual_small_for_full_ansatz():
    s = qhj.parse_scenario("scenario = driven\nomega = 1.0\nh = 0.3\nOmega = 0.5")
    c = qhj.ConstantSet()
    c.c2 = 0.9
    S = qhj.principal_function(s, c, 1.0)
    assert abs(qhj.qhje_residual(S, 0.7, 0.8)) < 1e-7
    S_tr = qhj.principal_function(s, c, 1.0, qhj.PrincipalForm.quadratic_only)
    assert abs(qhj.qhje_residual(S_tr, 0.7, 0.8)) > 1e-3


def test_classical_round_trip():
    s = qhj.parse_scenario("scenario = harmonic\nomega = 1.0")
    fit = qhj.constants_from_initial(s, 0.0, 1.0)
    assert not fit.degenerate
    for t in (0.3, 1.1):
        assert abs(
            qhj.classical_trajectory(s, fit.constants, fit.sign, t) - math.sin(t)
        ) < 1e-12


def test_spin_resonance_flip():
    mp = qhj.MagneticParams()
    mp.b0, mp.b1, mp.gamma = 1.0, 0.4, 2.0
    mp.omega_field = -mp.gamma * mp.b0
    t_flip = math.pi / (mp.gamma * mp.b1)
    assert abs(qhj.spin_flip_probability(mp, t_flip) - 1.0) < 1e-10


def test_magnetic_kernel_factorization():
    mp = qhj.MagneticParams()
    mp.b0, mp.gamma = 1.0, 2.0
    K = qhj.kernel_magnetic(mp, 1.0)
    whole = K(0.3, -0.2, 0.9, 0.7, 0.1, 0.4, -0.5)
    split = K.xy_factor(0.3, -0.2, 0.7, 0.1, 0.4) * K.free_z_factor(0.9, 0.7, -0.5)
    assert abs(whole - split) < 1e-13 * abs(whole) + 1e-300


def test_pinney_particular_identities():
    fam = qhj.pinney_particular(1.3, 0.8, 0.2, 1.7)
    assert fam.s(0.4) * fam.v(0.4) == pytest.approx(1.0)
    fr = qhj.frame_reduce(_pulsed())
    sf = qhj.as_scale_family(fam)
    r = fr.identification_residual(0.3, sf, fam.omega0)
    assert r.mass_residual < 1e-8
    assert r.freq_residual < 1e-8


def _pulsed():
    mp = qhj.MagneticParams()
    mp.b0, mp.b1, mp.omega_field, mp.gamma = 1.0, 0.5, 0.9, 2.0
    return mp
