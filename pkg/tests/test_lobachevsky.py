import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uniformize.errors import PhiOutOfRange
from uniformize.geometry import edge_volume_rhs
from uniformize.lobachevsky import (
    LOB_MAX,
    SpecialFnConfig,
    i_minus,
    i_plus,
    lob,
    lob_fourier,
    lob_prime,
    lob_second,
    omega,
    ortho_v,
)

mpmath.mp.dps = 30

finite = st.floats(-50.0, 50.0, allow_nan=False)
grid = np.linspace(-7.0, 7.0, 2001)


def lob_mp(x):
    return float(mpmath.clsin(2, 2 * mpmath.mpf(x)) / 2)


# -- values -------------------------------------------------------------------

@pytest.mark.parametrize("x", [1e-12, 1e-6, 0.1, 0.5, math.pi / 6, math.pi / 4, math.pi / 3,
                               1.0, 1.5, math.pi / 2, 2.0, 3.0, math.pi - 1e-9, 4.0, -2.5, 31.0])
def test_lob_matches_clausen(x):
    assert lob(x) == pytest.approx(lob_mp(x), abs=5e-15)


def test_lob_on_grid_matches_clausen():
    ref = np.array([lob_mp(x) for x in grid[::20]])
    assert np.abs(lob(grid[::20]) - ref).max() < 5e-15


def test_lob_fixed_values():
    # frozen from mpmath at 30 digits
    assert lob(math.pi / 6) == pytest.approx(0.50747080320482708, abs=1e-15)
    assert lob(math.pi / 4) == pytest.approx(0.45798279708860951, abs=1e-15)
    assert lob(math.pi / 3) == pytest.approx(0.33831386880321788, abs=1e-15)
    assert lob(0.0) == 0.0
    assert lob(math.pi / 2) == pytest.approx(0.0, abs=1e-15)


def test_lob_max_is_value_at_pi_over_6():
    assert LOB_MAX == pytest.approx(lob(math.pi / 6), abs=1e-15)
    assert lob(grid).max() <= LOB_MAX + 1e-15


def test_lob_pi_over_4_is_half_catalan():
    assert lob(math.pi / 4) == pytest.approx(float(mpmath.catalan) / 2, abs=1e-15)


def test_lob_pi_over_3_two_thirds_of_pi_over_6():
    assert lob(math.pi / 3) == pytest.approx(2 / 3 * lob(math.pi / 6), abs=1e-15)


def test_fourier_series_agrees():
    xs = np.array([0.3, 1.1, 2.0, -0.7])
    assert np.abs(lob_fourier(xs) - lob(xs)).max() < 1e-9


def test_series_terms_config():
    x = np.linspace(-1.5, 1.5, 31)
    coarse = lob(x, SpecialFnConfig(series_terms=5))
    assert np.abs(coarse - lob(x)).max() < 1e-5


def test_scalar_in_scalar_out():
    assert isinstance(lob(0.4), float)
    assert lob(np.array([0.4])).shape == (1,)


# -- identities on grids -------------------------------------------------------

def test_oddness_grid():
    assert np.abs(lob(-grid) + lob(grid)).max() < 1e-12


def test_periodicity_grid():
    assert np.abs(lob(grid + math.pi) - lob(grid)).max() < 1e-12


def test_duplication_identity_grid():
    x = grid
    assert np.abs(lob(2 * x) - 2 * lob(x) - 2 * lob(x + math.pi / 2)).max() < 1e-12


def test_derivative_matches_log_sine():
    x = np.concatenate([np.linspace(0.05, 3.09, 200), np.linspace(-3.0, -0.1, 50)])
    h = 1e-5
    fd = (lob(x + h) - lob(x - h)) / (2 * h)
    rel = np.abs(fd - lob_prime(x)) / np.maximum(np.abs(lob_prime(x)), 1e-3)
    assert rel.max() < 1e-6


def test_second_derivative():
    x = np.linspace(0.2, 2.9, 40)
    h = 1e-5
    fd = (lob_prime(x + h) - lob_prime(x - h)) / (2 * h)
    assert np.abs(fd - lob_second(x)).max() < 1e-8


@given(finite)
def test_odd_property(x):
    assert abs(lob(-x) + lob(x)) < 1e-13


@given(finite, st.integers(-5, 5))
def test_periodic_property(x, k):
    assert abs(lob(x + k * math.pi) - lob(x)) < 1e-12


@given(st.floats(-10, 10))
def test_duplication_property(x):
    assert abs(lob(2 * x) - 2 * lob(x) - 2 * lob(x + math.pi / 2)) < 1e-12


# -- edge functions -----------------------------------------------------------

def test_i_plus_concave_with_max_zero():
    for phi in (0.3, math.pi / 3, math.pi / 2, 2.5):
        x = np.linspace(1e-6, phi - 1e-6, 801)
        v = i_plus(phi, x)
        second = v[:-2] - 2 * v[1:-1] + v[2:]
        assert second.max() < 1e-15
        assert abs(i_plus(phi, phi / 2)) < 1e-15
        assert v.max() <= 1e-15


def test_i_minus_at_zero_by_duplication():
    # lob(phi) = 2 lob(phi/2) + 2 lob(phi/2 + pi/2) gives I-(phi, 0) = -2 lob(phi/2)
    for phi in (0.3, 1.0, 2.8):
        assert i_minus(phi, 0.0) == pytest.approx(-2 * lob(phi / 2), abs=1e-14)


def test_phi_out_of_range():
    for phi in (0.0, math.pi, -1.0, 4.0):
        with pytest.raises(PhiOutOfRange):
            i_plus(phi, 0.1)
        with pytest.raises(PhiOutOfRange):
            i_minus(phi, 0.1)


def test_omega_special_cases():
    assert omega(math.pi / 2, math.pi / 4, math.pi / 4) == pytest.approx(math.pi / 4, abs=1e-15)
    # vanishing denominator
    assert omega(math.pi / 2, 0.3, math.pi / 2) == pytest.approx(math.pi / 2)
    # 0/0: sin(0) = 0 and cos(pi) + cos(0) cos(0) = 0 exactly
    assert omega(0.0, 0.0, math.pi) == 0.0


def test_ortho_v_reflection():
    x = np.linspace(-3, 3, 31)
    y = 0.4
    assert np.abs(ortho_v(x, y) - ortho_v(math.pi - x, y)).max() < 1e-13


def test_ortho_v_value():
    # direct evaluation of the kernel with mpmath
    x, y = math.pi / 3, math.pi / 6
    ref = (lob_mp(x + math.pi / 2 - y) + lob_mp(-x + math.pi / 2 - y)) / 4 + lob_mp(y) / 2
    assert ortho_v(x, y) == pytest.approx(ref, abs=1e-14)
    assert ortho_v(x, y) == pytest.approx(0.1691569344, abs=1e-10)


def test_torus_edge_pair_sum():
    p = math.pi / 4
    w = omega(math.pi / 2, p, p)
    assert w == pytest.approx(math.pi / 4, abs=1e-15)
    assert 4 * ortho_v(p, w) == pytest.approx(2 * lob(math.pi / 4), abs=1e-14)


def test_edge_identity_random_triples():
    rng = np.random.default_rng(20240601)
    a = rng.uniform(-2 * math.pi, 2 * math.pi, 1000)
    b = rng.uniform(-2 * math.pi, 2 * math.pi, 1000)
    g = rng.uniform(1e-3, math.pi - 1e-3, 1000)
    lhs = 2 * ortho_v(a, omega(g, a, b)) + 2 * ortho_v(b, omega(g, b, a))
    rhs = i_minus(g, (a - b - g + math.pi) / 2) - i_plus(g, (a + b + g - math.pi) / 2)
    assert np.abs(lhs - rhs).max() < 1e-9
    assert np.abs(edge_volume_rhs(math.pi - g, a, b) - rhs).max() < 1e-13


@given(st.floats(0.01, math.pi - 0.01), st.floats(-6, 6), st.floats(-6, 6))
def test_edge_identity_property(g, a, b):
    lhs = 2 * ortho_v(a, omega(g, a, b)) + 2 * ortho_v(b, omega(g, b, a))
    rhs = i_minus(g, (a - b - g + math.pi) / 2) - i_plus(g, (a + b + g - math.pi) / 2)
    assert abs(lhs - rhs) < 1e-9
