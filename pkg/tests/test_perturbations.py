import math

import numpy as np
import pytest

import inflatonlab as il
from inflatonlab.constants import TWO_PI
from inflatonlab.perturbations import ModeError, tensor_wronskian


def test_scalar_initial_data_moduli(background, consts):
    q = consts.q_R
    t0 = -2.45e-12   # deep inside for the pivot mode
    chi, chidot, psi = il.scalar_initial_data(background, q, t0)
    q_over_a = consts.q_R_over_aI * math.exp(background.efolds_to_end(t0))
    a0 = q / q_over_a
    # |chi|^2 = (2pi)^-3 / (2 q a^2)
    assert abs(chi) ** 2 == pytest.approx(TWO_PI**-3 / (2 * q * a0**2), rel=1e-12)
    # |psi| = 4 pi G |phidot| (2pi)^(-3/2) / (q sqrt(2q))
    expect = (4 * math.pi * background.params.G * abs(background.phidot(t0))
              / (TWO_PI**1.5 * q * math.sqrt(2 * q)))
    assert abs(psi) == pytest.approx(expect, rel=1e-12)


def test_scalar_initial_data_wronskian(background, consts):
    q = consts.q_R
    t0 = -2.45e-12
    chi, chidot, _ = il.scalar_initial_data(background, q, t0)
    a0 = q / (consts.q_R_over_aI * math.exp(background.efolds_to_end(t0)))
    w = a0**3 * (chi * np.conj(chidot) - np.conj(chi) * chidot)
    assert w.imag == pytest.approx(TWO_PI**-3, rel=1e-4)
    assert abs(w.real) < 1e-12 * abs(w.imag)


def test_scalar_initial_data_rejects_shallow_start(background, consts):
    with pytest.raises(ModeError, match="deep"):
        il.scalar_initial_data(background, consts.q_R, -2.38e-12)


def test_scalar_constraint_residual(scalar_mode):
    assert scalar_mode.constraint_residual_max < 1e-3


def test_scalar_wkb_envelope_inside_horizon(background, scalar_mode):
    # |chi| a constant to 1% while q/(aH) > 50
    mask = scalar_mode.q_over_aH > 50
    a = np.exp(-background.efolds_to_end(scalar_mode.t[mask]))
    env = np.abs(scalar_mode.chi[mask]) * a
    assert (env.max() - env.min()) / env.mean() < 0.01


def test_scalar_plateau_flatness(scalar_mode):
    # quadratic settling toward the frozen value; within 1e-3 once q/aH < 0.04
    R0 = abs(scalar_mode.R_plateau)
    x = scalar_mode.q_over_aH
    dev = np.abs(np.abs(scalar_mode.R) - R0) / R0
    sub = x < 0.04
    assert scalar_mode.frozen
    assert dev[sub].max() < 1e-3
    settle = x < 0.3
    assert np.all(dev[settle] <= 0.75 * x[settle] ** 2 + 1e-6)


def test_scalar_plateau_matches_slow_roll(scalar_mode, report, consts):
    # direct integration against the slow-roll amplitude at the solved exit
    sr = report.NS2 * consts.q_R**-3
    assert abs(scalar_mode.R_plateau) ** 2 == pytest.approx(sr, rel=0.25)


def test_tensor_wronskian_conservation(tensor_mode, background, params):
    assert tensor_mode.wronskian_drift < 1e-6
    w = tensor_wronskian(background, tensor_mode)
    target = 16 * math.pi * params.G / TWO_PI**3
    assert w[0].imag == pytest.approx(target, rel=1e-8)
    assert abs(w[0].real) < 1e-10 * target


def test_tensor_plateau_matches_slow_roll(tensor_mode, report, consts):
    sr = params_free_tensor_amp(report, consts)
    assert abs(tensor_mode.D_plateau) ** 2 == pytest.approx(sr, rel=0.25)


def params_free_tensor_amp(report, consts):
    # G H^2/pi^2 q^-3 with the report's exit rate
    G = il.PotentialParams().G
    return G * report.H_exit**2 / math.pi**2 * consts.q_R**-3


def test_tensor_to_scalar_ratio_consistency(scalar_mode, tensor_mode, report):
    ratio = 4 * abs(tensor_mode.D_plateau) ** 2 / abs(scalar_mode.R_plateau) ** 2
    assert ratio == pytest.approx(16 * report.epsilon, rel=0.25)


def test_mode_start_threshold_insensitivity(background, consts, scalar_mode):
    # starting twice as deep moves the frozen amplitude at the (aH/q)^2 level
    deeper = il.integrate_scalar(background, consts.q_R, consts, x_start=200.0)
    assert abs(deeper.R_plateau) == pytest.approx(abs(scalar_mode.R_plateau), rel=1e-3)


def test_classical_mode_scalar(background, consts, scalar_mode):
    cl = il.integrate_scalar(background, consts.q_R, consts,
                             gravity=il.GravityMode.CLASSICAL)
    assert np.all(cl.psi == 0)
    # scalar conclusions survive the switch at the ten-percent level
    ratio = abs(cl.R_plateau) ** 2 / abs(scalar_mode.R_plateau) ** 2
    assert abs(ratio - 1) < 0.10


def test_classical_mode_tensor(background, consts):
    cl = il.integrate_tensor(background, consts.q_R, consts,
                             gravity=il.GravityMode.CLASSICAL)
    assert cl.D_plateau == 0
    assert np.all(cl.D == 0)
    assert cl.wronskian_drift == 0.0


def test_gravity_mode_switch_round_trip(background, consts):
    il.set_gravity_mode(il.GravityMode.CLASSICAL)
    try:
        assert il.get_gravity_mode() is il.GravityMode.CLASSICAL
        tn = il.integrate_tensor(background, consts.q_R, consts)
        assert tn.D_plateau == 0
    finally:
        il.set_gravity_mode(il.GravityMode.QUANTUM)
    assert il.get_gravity_mode() is il.GravityMode.QUANTUM
    tn = il.integrate_tensor(background, consts.q_R, consts)
    assert abs(tn.D_plateau) > 0


def _time_at_efolds_to_end(background, n):
    ts = np.linspace(-5e-12, background.end_of_inflation(), 4000)
    ef = background.efolds_to_end(ts)
    return float(np.interp(n, ef[::-1], ts[::-1]))


def test_vector_mode_decay(background):
    t_I = background.end_of_inflation()
    t1 = -3e-12
    n1 = background.efolds_to_end(t1)
    # across exactly one e-fold the amplitude falls by e^-2
    t2 = _time_at_efolds_to_end(background, n1 - 1.0)
    assert il.vector_mode_decay(background, 2.0, t2) / \
        il.vector_mode_decay(background, 2.0, t1) == pytest.approx(
            math.exp(-2.0), rel=1e-3)
    # across ln 2 e-folds the scale factor doubles and the amplitude quarters
    t3 = _time_at_efolds_to_end(background, n1 - math.log(2.0))
    assert il.vector_mode_decay(background, 2.0, t3) / \
        il.vector_mode_decay(background, 2.0, t1) == pytest.approx(0.25, rel=1e-3)
    # at the end of inflation the amplitude is c_j / a_I^2
    aI = il.DEFAULT_CONSTANTS.a_L
    assert il.vector_mode_decay(background, 2.0, t_I) == pytest.approx(
        2.0 / aI**2, rel=1e-9)
