import dataclasses
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import SOLVED, random_member, solved, weighted
from uniformize.angles import AngleSystem, hat_data
from uniformize.errors import DegenerateTriangle, LayoutError, NotCritical
from uniformize.geometry import (
    check_configuration,
    edge_volume_rhs,
    euclidean_circle,
    hyperbolic_distance,
    layout,
    leg_data,
    quad_areas,
    triangle_legs,
    vertex_angle_sums,
    volume_functional,
    volume_orthoschemes,
)
from uniformize.svg import lattice_basis

CATALAN = float(mpmath.catalan)


def _law_of_cosines_side(alpha, beta, gamma, curvature):
    """Side opposite ``alpha`` from the dual law of cosines."""
    c = (math.cos(alpha) + math.cos(beta) * math.cos(gamma)) / (math.sin(beta) * math.sin(gamma))
    return math.acosh(c) if curvature < 0 else math.acos(c)


# -- triangles ----------------------------------------------------------------

def test_euclidean_equilateral():
    t = triangle_legs(math.pi / 3, math.pi / 3, math.pi / 3, 0)
    assert t.a / t.b == pytest.approx(1.0) and t.b / t.c == pytest.approx(1.0)


def test_hyperbolic_pi_over_5():
    a = math.pi / 5
    t = triangle_legs(a, a, a, -1)
    assert t.a == pytest.approx(2 * math.atanh(math.sqrt(math.sin(a) / math.sin(2 * a))), abs=1e-12)
    assert t.a == pytest.approx(_law_of_cosines_side(a, a, a, -1), abs=1e-12)
    assert t.a == pytest.approx(2.1226, abs=1e-4)


@given(st.floats(0.05, 1.5), st.floats(0.05, 1.5), st.floats(0.05, 1.5))
def test_hyperbolic_legs_match_law_of_cosines(a, b, c):
    assume(a + b + c < math.pi - 0.05)
    t = triangle_legs(a, b, c, -1)
    for side, angles in ((t.a, (a, b, c)), (t.b, (b, a, c)), (t.c, (c, a, b))):
        assert side == pytest.approx(_law_of_cosines_side(*angles, -1), rel=1e-9)


@given(st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.floats(0.3, 2.0))
def test_spherical_legs_match_law_of_cosines(a, b, c):
    assume(a + b + c > math.pi + 0.05)
    eta = (a + b + c - math.pi) / 2
    assume(min(a - eta, b - eta, c - eta) > 0.05)
    t = triangle_legs(a, b, c, 1)
    for side, angles in ((t.a, (a, b, c)), (t.b, (b, a, c)), (t.c, (c, a, b))):
        assert side == pytest.approx(_law_of_cosines_side(*angles, 1), rel=1e-9)


def test_small_hyperbolic_triangles_obey_law_of_sines():
    angles = np.array([0.7, 1.1, math.pi - 1.8])
    ratios = []
    for k in range(1, 7):
        t = triangle_legs(*(angles * (1 - 10.0**-k)), -1)
        ratios.append((t.a / t.b, t.b / t.c))
    target = (math.sin(angles[0]) / math.sin(angles[1]), math.sin(angles[1]) / math.sin(angles[2]))
    errs = [max(abs(r[0] - target[0]), abs(r[1] - target[1])) for r in ratios]
    assert errs[-1] < 1e-5
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_degenerate_triangles():
    with pytest.raises(DegenerateTriangle):
        triangle_legs(1.0, 1.0, 1.0, 1)  # hyperbolic angles on the sphere
    with pytest.raises(DegenerateTriangle):
        triangle_legs(1.5, 1.5, 1.5, -1)
    with pytest.raises(DegenerateTriangle):
        triangle_legs(3.0, 0.1, 0.1, -1)  # alpha_hat above pi
    with pytest.raises(DegenerateTriangle):
        triangle_legs(1.0, 1.0, 1.0, 0)


# -- chart helpers ------------------------------------------------------------

@given(st.complex_numbers(max_magnitude=0.95), st.complex_numbers(max_magnitude=0.95))
def test_hyperbolic_distance_formula(z, w):
    ref = math.acosh(1 + 2 * abs(z - w) ** 2 / ((1 - abs(z) ** 2) * (1 - abs(w) ** 2)))
    assert float(hyperbolic_distance(z, w)) == pytest.approx(ref, rel=1e-7, abs=1e-7)


@given(st.complex_numbers(max_magnitude=0.8), st.floats(0.05, 3.0))
def test_euclidean_circle_contains_hyperbolic_circle(c, r):
    ec, er = euclidean_circle(c, r)
    for ang in np.linspace(0, 2 * math.pi, 7):
        z = ec + er * complex(math.cos(ang), math.sin(ang))
        assert float(hyperbolic_distance(z, c)) == pytest.approx(r, rel=1e-7)


# -- layouts ------------------------------------------------------------------

@pytest.fixture(scope="module")
def configs():
    return {name: layout(weighted(name), solved(name).system) for name in SOLVED}


@pytest.mark.parametrize("name", SOLVED)
def test_configurations_realize_the_weights(configs, name):
    rep = check_configuration(configs[name], weighted(name))
    assert rep.max_angle_residual < 1e-6
    assert rep.max_concurrency_residual < 1e-6


def test_torus_layout(configs):
    c = configs["torus2x2"]
    assert c.chart == "plane"
    assert np.allclose(c.radii, math.sqrt(2) / 2, atol=1e-12)
    m = weighted("torus2x2").map
    for d in range(m.dart_count):
        # neighbours sit one unit away along the axes
        step = c.head_center(d, m) - c.centers[m.tail(d)]
        assert abs(step) == pytest.approx(1.0, abs=1e-12)
        assert min(abs(step.real), abs(step.imag)) < 1e-12
    rep = check_configuration(c, weighted("torus2x2"))
    assert rep.max_angle_residual < 1e-10
    # deck group: the lattice 2 Z[i]
    for t in c.translations():
        assert abs(t / 2 - complex(round(t.real / 2), round(t.imag / 2))) < 1e-12
    t1, t2 = lattice_basis(c.translations())
    assert abs(t1) == pytest.approx(2.0) and abs(t2) == pytest.approx(2.0)
    assert abs((t1.conjugate() * t2).real) < 1e-12


def test_tetrahedron_stereo_layout(configs):
    c = configs["tetrahedron"]
    assert c.chart == "stereo"
    assert len(c.lines) == 3
    assert np.isfinite(c.radii).sum() == 1
    normals = [n for n, _ in c.lines.values()]
    for i in range(3):
        for j in range(i + 1, 3):
            between = math.acos(max(-1, min(1, (normals[i].conjugate() * normals[j]).real)))
            assert math.pi - between == pytest.approx(math.pi / 3, abs=1e-10)


def test_genus2_gauss_bonnet(configs):
    wm = weighted("genus2")
    c = configs["genus2"]
    areas = quad_areas(c, wm)
    eta = hat_data(wm, solved("genus2").psi).eta_hat
    assert np.abs(areas + 4 * eta).max() < 1e-8
    assert areas.sum() == pytest.approx(-2 * math.pi * wm.map.chi, abs=1e-8)
    assert np.abs(vertex_angle_sums(c, wm) - 2 * math.pi).max() < 1e-8


def test_genus2_reroot_is_an_isometry(configs):
    wm = weighted("genus2")
    c1 = configs["genus2"]
    c2 = layout(wm, solved("genus2").system, root=17)
    n = wm.map.n_vertices
    z1, z2 = c1.centers, c2.centers
    assert not np.allclose(z1, z2)
    for i in range(n):
        d1 = hyperbolic_distance(z1[i], z1)
        d2 = hyperbolic_distance(z2[i], z2)
        assert np.abs(d1 - d2).max() < 1e-8


def test_perturbed_radii_are_detected(configs):
    for name in ("genus2", "torus2x2", "cube"):
        c = configs[name]
        bad = dataclasses.replace(c, radii=c.radii * 1.01)
        assert check_configuration(bad, weighted(name)).max_residual > 1e-3


def test_layout_refuses_non_critical():
    a = random_member("genus2", 1)
    with pytest.raises(NotCritical):
        layout(weighted("genus2"), a)


def test_layout_refuses_full_sphere():
    from uniformize.flow import initial_angle_system

    wm = weighted("cube")
    with pytest.raises((LayoutError, NotCritical)):
        layout(wm, initial_angle_system(wm), spread_tol=np.inf)


def test_leg_data_radii_positive(case):
    legs = leg_data(weighted(case), solved(case).system)
    r = legs.rho[np.isfinite(legs.rho)]
    assert np.all(r > 0)


# -- volumes ------------------------------------------------------------------

@pytest.mark.parametrize("name,expected", [
    ("tetrahedron", 3 * float(mpmath.clsin(2, 2 * mpmath.pi / 3)) / 2),
    ("cube", 4 * CATALAN),  # 8 lob(pi/4), regular ideal octahedron
    ("torus2x2", 8 * CATALAN),  # 16 lob(pi/4)
])
def test_volumes(name, expected):
    wm, a = weighted(name), solved(name).system
    assert volume_functional(wm, a) == pytest.approx(expected, abs=1e-7)
    assert volume_orthoschemes(wm, a) == pytest.approx(expected, abs=1e-7)


def test_regular_ideal_tetrahedron_constant():
    assert volume_functional(weighted("tetrahedron"), solved("tetrahedron").system) == \
        pytest.approx(1.0149416064096536, abs=1e-12)


def test_volume_agreement(case):
    wm, a = weighted(case), solved(case).system
    assert abs(volume_functional(wm, a) - volume_orthoschemes(wm, a)) < 1e-9


def test_per_edge_pairs(case):
    wm, a = weighted(case), solved(case).system
    m = wm.map
    total, pairs = volume_orthoschemes(wm, a, per_edge=True)
    assert total == pytest.approx(pairs.sum(), abs=1e-12)
    for e, (s, t) in enumerate(m.edges):
        assert pairs[e] == pytest.approx(edge_volume_rhs(wm.theta[e], a.psi[s], a.psi[t]),
                                         abs=1e-9)


def test_torus_edge_pair_is_two_lob():
    wm, a = weighted("torus2x2"), solved("torus2x2").system
    _, pairs = volume_orthoschemes(wm, a, per_edge=True)
    assert np.allclose(pairs, CATALAN, atol=1e-10)  # 2 lob(pi/4)


def test_volume_orthoschemes_accepts_arrays():
    wm, a = weighted("genus2"), solved("genus2").system
    assert volume_orthoschemes(wm, a.psi) == volume_orthoschemes(wm, AngleSystem(a.psi))
