"""Welding extraction and the radial closed form.

The constant driver is the anchor case: its welding is theta -> -theta with
crash times tau(theta) = -2 log cos(theta/2) [DERIVED in tests/oracles.py from
the boundary angle equation], which pins every column of the extraction.
"""

import math

import numpy as np
import pytest

import oracles
from slitweld.errors import ValidationError
from slitweld.welding import (
    Welding,
    extract_welding,
    pair_residuals,
    radial_slit_welding,
    welding_as_homeomorphism,
    welding_log_derivative,
)


def _toy_welding():
    return Welding([0.0, 1.0, 2.0], [0.0, 0.2, 0.35], [0.0, -0.15, -0.4])


def test_welding_validation():
    with pytest.raises(ValidationError):
        Welding([0.5, 1.0], [0.0, 0.2], [0.0, -0.2])         # base time not 0
    with pytest.raises(ValidationError):
        Welding([0.0, 1.0], [0.1, 0.2], [0.0, -0.2])         # base angle not 0
    with pytest.raises(ValidationError):
        Welding([0.0, 1.0, 2.0], [0.0, 0.3, 0.2], [0.0, -0.1, -0.2])
    with pytest.raises(ValidationError):
        Welding([0.0, 1.0, 2.0], [0.0, 0.1, 0.2], [0.0, -0.2, -0.1])
    with pytest.raises(ValidationError):
        Welding([0.0, 1.0], [0.0, 3.2], [0.0, -3.2])         # covers the circle
    with pytest.raises(ValidationError):
        Welding([0.0, np.nan], [0.0, 0.2], [0.0, -0.2])


def test_welding_accessors():
    w = _toy_welding()
    assert w.T == 2.0
    assert abs(w.alpha_plus.angle - 0.35) < 1e-15
    assert abs(w.alpha_minus.angle + 0.4) < 1e-15
    assert abs(w.arc_plus.length - 0.35) < 1e-15
    assert abs(w.arc_minus.length - 0.4) < 1e-15


def test_closed_form_radial_welding_off_anchor():
    # t_slit for horizon T = 1; every column has a closed form
    T = 1.0
    t_slit = oracles.radial_tip(T)
    w = radial_slit_welding(t_slit, n=32)
    assert abs(w.T - oracles.radial_T_of_tslit(t_slit)) < 1e-12
    assert abs(w.T - T) < 1e-12
    want = np.array([oracles.radial_theta_of_time(t) for t in w.times])
    assert np.max(np.abs(w.theta_plus - want)) < 1e-13
    assert np.max(np.abs(w.theta_minus + want)) < 1e-13
    assert abs(w.alpha_plus.angle - oracles.radial_alpha(T)) < 1e-12


def test_extraction_matches_radial_closed_form(w_const_256, d_const):
    w = w_const_256
    n = w.times.size - 1
    assert np.max(np.abs(w.times - d_const.T * np.arange(n + 1) / n)) < 1e-12
    want = np.array([oracles.radial_theta_of_time(t) for t in w.times])
    assert np.max(np.abs(w.theta_plus - want)) < 1e-5
    # conjugation symmetry of the slit carries over to the angle columns
    assert np.max(np.abs(w.theta_minus + w.theta_plus)) < 1e-5


def test_extraction_resolution_floor(d_const):
    with pytest.raises(ValidationError):
        extract_welding(d_const, n=4)


def test_welding_involution(w_const_256):
    th = np.linspace(-1.2, 1.2, 21)
    back = w_const_256.apply_angle(w_const_256.apply_angle(th))
    assert np.max(np.abs(back - th)) < 1e-9
    # scalars round-trip as floats
    assert isinstance(w_const_256.apply_angle(0.3), float)


def test_apply_angle_rejects_unwelded_angles(w_const_256):
    with pytest.raises(ValidationError):
        w_const_256.apply_angle(math.pi)


def test_log_derivative_radial_exact():
    w = radial_slit_welding(3.0 - 2.0 * math.sqrt(2.0), n=64)
    f = welding_log_derivative(w)
    assert np.max(np.abs(f.values)) < 1e-13           # phi(theta) = -theta
    assert f.low_confidence is not None
    assert f.low_confidence[0] and f.low_confidence[-1]
    assert not np.any(f.low_confidence[1:-1])
    with pytest.raises(ValidationError):
        welding_log_derivative(Welding([0.0, 1.0], [0.0, 0.2], [0.0, -0.2]))


def test_log_derivative_extracted_near_zero(w_const_256):
    f = welding_log_derivative(w_const_256)
    assert np.max(np.abs(f.values[1:-1])) < 1e-3


def test_as_homeomorphism_radial():
    w = radial_slit_welding(3.0 - 2.0 * math.sqrt(2.0), n=64)
    h = welding_as_homeomorphism(w)
    assert h.orientation == -1
    th = w.theta_plus[1:-1]
    assert np.max(np.abs(h.angle_map(th) + th)) < 1e-12
    hi = h.inverse()
    assert np.max(np.abs(hi.angle_map(-th) - th)) < 1e-12


def test_pair_residuals_radial(d_const, w_const_256):
    res = pair_residuals(d_const, w_const_256, count=4)
    assert res.size == 4
    # both pair members land on the same slit point up to the push-in radius
    assert np.max(res) < 5e-3
    with pytest.raises(ValidationError):
        pair_residuals(d_const, w_const_256, count=0)
