import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import start, weighted
from uniformize import catalog
from uniformize.angles import hat_data, is_member, stereographic_subspace
from uniformize.errors import BadSigns, Infeasible, UnsupportedMode
from uniformize.flow import (
    OMEGA,
    build_flow_network,
    evaluate_cut,
    find_compatible_flow,
    initial_angle_system,
    schedule,
)
from uniformize.maps import WeightedMap, quotient_map


def _lp_feasible(net) -> bool:
    """Circulation feasibility as a linear program (independent oracle)."""
    idx = {x: i for i, x in enumerate(net.nodes)}
    a_eq = np.zeros((len(net.nodes), len(net.arcs)))
    for j, a in enumerate(net.arcs):
        a_eq[idx[a.tail], j] -= 1.0
        a_eq[idx[a.head], j] += 1.0
    bounds = [(None if math.isinf(a.lower) else a.lower,
               None if math.isinf(a.upper) else a.upper) for a in net.arcs]
    res = linprog(np.zeros(len(net.arcs)), A_eq=a_eq, b_eq=np.zeros(len(net.nodes)),
                  bounds=bounds, method="highs")
    return res.status == 0


def _check_circulation(net, flow, tol=1e-9):
    bal = {x: 0.0 for x in net.nodes}
    for i, a in enumerate(net.arcs):
        f = flow[i]
        assert a.lower - tol <= f <= a.upper + tol
        bal[a.tail] -= f
        bal[a.head] += f
    assert max(abs(v) for v in bal.values()) < tol


def _tt():
    return WeightedMap.uniform(catalog.truncated_tetrahedron(), math.pi / 2)


# -- network --------------------------------------------------------------------

def test_network_shape():
    wm = weighted("genus2")
    net = build_flow_network(wm, 0.1, -0.05)
    kinds = [a.kind for a in net.arcs]
    assert kinds.count("dart") == 102
    assert kinds.count("edge") == 51
    assert kinds.count("vertex") == 15
    assert OMEGA in net.nodes
    for a in net.arcs:
        if a.kind == "vertex":
            assert a.lower == a.upper == pytest.approx(math.pi)
        elif a.kind == "edge":
            assert a.upper == pytest.approx(math.pi / 3 - 0.05)
            assert a.lower == -math.inf
        else:
            assert a.lower == 0.1 and a.upper == math.inf


def test_bad_signs():
    with pytest.raises(BadSigns):
        build_flow_network(weighted("genus2"), 0.0)
    with pytest.raises(BadSigns):
        build_flow_network(weighted("genus2"), 0.1, 0.1)
    with pytest.raises(BadSigns):
        build_flow_network(weighted("torus2x2"), 0.1, 0.1)
    st_ = stereographic_subspace(weighted("cube"), 0)
    with pytest.raises(BadSigns):
        build_flow_network(weighted("cube"), 0.1, 0.1, st_)


def test_schedule():
    wm = weighted("genus2")
    assert schedule(wm, 0) == (pytest.approx(math.pi / 4), pytest.approx(-math.pi / 6))
    eps, tau = schedule(wm, 3)
    assert eps == pytest.approx(math.pi / 32) and tau == pytest.approx(-math.pi / 48)
    assert schedule(weighted("torus2x2"), 2)[1] == 0.0
    assert schedule(weighted("cube"), 1, stereo=True) == (pytest.approx(math.pi / 8), 0.0)


# -- max-flow feasibility vs LP -------------------------------------------------

@pytest.mark.parametrize("name,eps,tau", [
    ("genus2", math.pi / 4, -math.pi / 6),
    ("genus2", math.pi / 16, -math.pi / 24),
    ("genus2", 0.05, -0.01),
    ("torus2x2", math.pi / 4, 0.0),
    ("torus2x2", 0.01, 0.0),
    ("torus_tri", 0.3, 0.0),
])
def test_feasibility_agrees_with_lp(name, eps, tau):
    net = build_flow_network(weighted(name), eps, tau)
    res = find_compatible_flow(net)
    assert res.feasible == _lp_feasible(net)
    if res.feasible:
        _check_circulation(net, res.flow)
    else:
        low, up = evaluate_cut(net, res.certificate.nodes)
        assert low > up


@given(st.lists(st.floats(0.3, 2.8), min_size=6, max_size=6), st.floats(0.01, 0.7))
def test_tetrahedron_random_weights_agree_with_lp(theta, eps):
    wm = WeightedMap(catalog.tetrahedron(), np.array(theta))
    # the full sphere network: tau has the sign of chi
    net = build_flow_network(wm, eps, 0.1)
    res = find_compatible_flow(net)
    assert res.feasible == _lp_feasible(net)
    if res.feasible:
        _check_circulation(net, res.flow)
    else:
        c = res.certificate
        assert c.lower_sum > c.upper_sum
        assert evaluate_cut(net, c.nodes) == pytest.approx((c.lower_sum, c.upper_sum))


# -- first angle systems --------------------------------------------------------

def test_genus2_start_has_negative_excess():
    wm = weighted("genus2")
    a = start("genus2")
    assert is_member(wm, a)
    hd = hat_data(wm, a)
    assert np.all(hd.eta_hat < 0)
    assert 2 * hd.eta_hat.sum() == pytest.approx(math.pi * wm.map.chi, abs=1e-9)


def test_torus_start():
    wm = weighted("torus2x2")
    a = start("torus2x2")
    assert is_member(wm, a)
    assert np.abs(hat_data(wm, a).eta_hat).max() < 1e-10


def test_stereo_start():
    a = start("cube")
    assert a.mode == "stereo" and a.face == 0
    assert is_member(weighted("cube"), a)


def test_full_sphere_start_is_member():
    wm = weighted("cube")
    a = initial_angle_system(wm)
    assert a.mode == "full"
    assert is_member(wm, a)
    assert np.all(hat_data(wm, a).eta_hat > 0)


def test_start_is_reproducible():
    a = initial_angle_system(weighted("genus2"))
    b = initial_angle_system(weighted("genus2"))
    assert np.array_equal(a.psi, b.psi)


def test_truncated_tetrahedron_infeasible_every_face():
    wm = _tt()
    for f in range(wm.map.n_faces):
        with pytest.raises(Infeasible) as info:
            initial_angle_system(wm, face=f)
        c = info.value.certificate
        assert c is not None
        # independent re-evaluation of the cut from the arcs of its network
        st_ = stereographic_subspace(wm, f, strict=False)
        net = build_flow_network(wm, c.epsilon, 0.0, st_)
        z = set(map(tuple, c.nodes))
        low = sum(a.lower for a in net.arcs if a.head in z and a.tail not in z)
        up = sum(a.upper for a in net.arcs if a.tail in z and a.head not in z)
        assert low > up
        assert low == pytest.approx(c.lower_sum) and up == pytest.approx(c.upper_sum)


def test_truncated_tetrahedron_triangle_face_cut():
    wm = _tt()
    with pytest.raises(Infeasible) as info:
        initial_angle_system(wm, face=0)
    c = info.value.certificate
    assert c.nodes == (OMEGA,)
    # nine vertex demands into omega against nine edge bounds out of it
    assert c.lower_sum == pytest.approx(3 * math.pi + 6 * math.pi / 2 + 3 * math.pi / 2)
    assert c.gap > 0


def test_non_orientable_refused():
    cover, g = catalog.cube_antipodal()
    q, _ = quotient_map(cover, g)
    wm = WeightedMap.uniform(q, math.pi / 2)
    with pytest.raises(UnsupportedMode):
        initial_angle_system(wm)


def test_certificate_to_dict():
    wm = _tt()
    with pytest.raises(Infeasible) as info:
        initial_angle_system(wm, face=0)
    d = info.value.certificate.to_dict()
    assert d["nodes"] == [["w"]]
    assert d["lower_sum"] > d["upper_sum"]
