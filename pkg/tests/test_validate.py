import math

import networkx as nx
import numpy as np
import pytest

from conftest import weighted
from uniformize import catalog
from uniformize.maps import WeightedMap, map_from_faces
from uniformize.validate import simple_cycles, validate_weights

# tetrahedron with face (1, 2, 3) subdivided: (1, 2, 3) becomes a separating triangle
STACKED = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 4), (2, 3, 4), (3, 1, 4)]


def _nx_graph(m):
    g = nx.Graph()
    for s, _ in m.edges:
        g.add_edge(m.tail(s), m.head(s))
    return g


@pytest.mark.parametrize("make,bound", [(catalog.tetrahedron, 4), (catalog.cube, 8),
                                        (catalog.truncated_tetrahedron, 9)])
def test_simple_cycles_match_networkx(make, bound):
    m = make()
    ours = simple_cycles(m, bound)
    ref = list(nx.simple_cycles(_nx_graph(m), length_bound=bound))
    assert len(ours) == len(ref)
    assert sorted(map(len, ours)) == sorted(map(len, ref))


def test_cube_cycle_counts():
    # 6 squares, 16 hexagons, 6 octagons
    lengths = [len(c) for c in simple_cycles(catalog.cube(), 8)]
    assert (lengths.count(4), lengths.count(6), lengths.count(8)) == (6, 16, 6)


@pytest.mark.parametrize("name", ["tetrahedron", "cube", "torus2x2", "torus_tri", "genus2"])
def test_catalog_weights_are_valid(name):
    rep = validate_weights(weighted(name))
    assert rep.verdict == "valid"
    assert rep.max_face_residual < 1e-12
    assert not rep.violated_loops
    assert rep.flow_certificate is None


def test_face_equality_violation():
    rep = validate_weights(WeightedMap.uniform(catalog.tetrahedron(), math.pi / 2),
                           flow_check=False)
    assert rep.verdict == "invalid"
    assert rep.max_face_residual == pytest.approx(math.pi / 2)


def test_truncated_tetrahedron_rejected():
    wm = WeightedMap.uniform(catalog.truncated_tetrahedron(), math.pi / 2)
    rep = validate_weights(wm)
    assert rep.verdict == "invalid"
    c = rep.flow_certificate
    assert c is not None and c.lower_sum > c.upper_sum


def test_truncated_tetrahedron_has_no_admissible_uniform_weight():
    # triangles force theta = pi/3, hexagons then force theta = 2 pi/3 on shared edges
    for th in np.linspace(0.1, 3.0, 30):
        rep = validate_weights(WeightedMap.uniform(catalog.truncated_tetrahedron(), th),
                               flow_check=False)
        assert rep.max_face_residual > 1e-3


def test_separating_triangle_violates_loop_condition():
    m = map_from_faces(STACKED)
    assert m.chi == 2
    rep = validate_weights(WeightedMap.uniform(m, math.pi / 3), flow_check=False)
    assert rep.max_face_residual < 1e-12
    assert rep.loops_checked
    assert len(rep.violated_loops) == 1
    cyc, total = rep.violated_loops[0]
    verts = {v for e in cyc for v in m.edge_vertices(e)}
    assert verts == {1, 2, 3}
    assert total == pytest.approx(2 * math.pi)
    assert rep.verdict == "invalid"


def test_loop_search_skipped_off_sphere():
    rep = validate_weights(weighted("torus2x2"), flow_check=False)
    assert not rep.loops_checked
    assert rep.verdict == "undecided"
