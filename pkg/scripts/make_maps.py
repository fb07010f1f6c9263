"""Write the catalogue maps to ``maps/*.json``.

Usage: ``python3 scripts/make_maps.py [OUTDIR]``
"""

import math
import sys
from pathlib import Path

from uniformize import catalog, io
from uniformize.maps import WeightedMap

def _hemicube_cover():
    m, deck = catalog.cube_antipodal()
    return m, math.pi / 2, deck


MAPS = {
    "tetrahedron": lambda: (catalog.tetrahedron(), math.pi / 3, None),
    "cube": lambda: (catalog.cube(), math.pi / 2, None),
    "torus2x2": lambda: (catalog.torus_grid(2, 2), math.pi / 2, None),
    "torus_tri3x3": lambda: (catalog.torus_triangulation(3, 3), math.pi / 3, None),
    "truncated_tetra": lambda: (catalog.truncated_tetrahedron(), math.pi / 2, None),
    "genus2": lambda: (catalog.genus2_triangulation(), math.pi / 3, None),
    "hemicube_cover": _hemicube_cover,
}


def main(outdir="maps"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in MAPS.items():
        m, theta, deck = make()
        path = out / f"{name}.json"
        io.write_map(path, WeightedMap.uniform(m, theta), deck)
        print(f"{path}: V={m.n_vertices} E={m.n_edges} F={m.n_faces} chi={m.chi}")


if __name__ == "__main__":
    main(*sys.argv[1:])
