"""Circle patterns on surfaces from intersection angles.

A cell decomposition with edge weights in ``(0, pi)`` is turned into a
pattern of disks, one per vertex, overlapping at the prescribed angles with
concurrent circles around every face.  The disk radii come from the
critical point of a concave functional built from the Lobachevsky function,
whose value is the volume of the associated ideal polyhedron.

Pipeline: :func:`validate_weights` -> :func:`initial_angle_system` ->
:func:`maximize` -> :func:`layout` / :func:`volume_functional`.
"""

from .angles import AngleSystem, functional_value, is_member, stereographic_subspace
from .errors import UniformizeError
from .flow import initial_angle_system
from .geometry import (
    check_configuration,
    layout,
    triangle_legs,
    volume_functional,
    volume_orthoschemes,
)
from .lobachevsky import i_minus, i_plus, lob, omega, ortho_v
from .maps import SurfaceMap, WeightedMap, build_map, map_from_faces, quotient_map
from .solver import SolveOptions, certify_critical, maximize
from .svg import render_svg
from .validate import validate_weights

__version__ = "0.1.0"

__all__ = [
    "AngleSystem",
    "SolveOptions",
    "SurfaceMap",
    "UniformizeError",
    "WeightedMap",
    "build_map",
    "certify_critical",
    "check_configuration",
    "functional_value",
    "i_minus",
    "i_plus",
    "initial_angle_system",
    "is_member",
    "layout",
    "lob",
    "map_from_faces",
    "maximize",
    "omega",
    "ortho_v",
    "quotient_map",
    "render_svg",
    "stereographic_subspace",
    "triangle_legs",
    "validate_weights",
    "volume_functional",
    "volume_orthoschemes",
]
