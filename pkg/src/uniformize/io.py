"""JSON readers and writers for maps, angle systems and solutions.

Map file::

    {"darts": N, "opposite": [...], "next_at_vertex": [...],
     "theta": [one value per edge, edges ordered by smallest dart]}

An optional ``"deck"`` entry holds a free orientation-reversing involution of
the darts; the file then describes a sphere cover of a projective-plane map.

Angle-system file::

    {"mode": "full" | "stereo", "face": id or null, "psi": [...]}

A solution file is an angle-system file plus ``grad_norm``, ``iterations``
and the map it belongs to under ``"map"``.  Writers use ``indent=2`` and
Python's shortest round-trip float repr, so write -> read -> write is
byte-identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .angles import AngleSystem
from .errors import MapError
from .maps import WeightedMap, build_map

__all__ = [
    "map_to_dict",
    "map_from_dict",
    "read_map",
    "write_map",
    "system_to_dict",
    "system_from_dict",
    "read_json",
    "write_json",
    "dumps",
]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def map_to_dict(wm: WeightedMap, deck=None) -> dict:
    out = wm.map.to_dict()
    out["theta"] = [float(x) for x in wm.theta]
    if deck is not None:
        out["deck"] = [int(x) for x in deck]
    return out


def map_from_dict(data: dict, degrees: bool = False):
    """``(WeightedMap, deck or None)`` from a parsed map file."""
    try:
        n = data["darts"]
        m = build_map(n, data["opposite"], data["next_at_vertex"])
        theta = np.asarray(data["theta"], dtype=float)
    except KeyError as exc:
        raise MapError(f"map file lacks the key {exc.args[0]!r}") from None
    if degrees:
        theta = np.radians(theta)
    deck = data.get("deck")
    if deck is not None:
        deck = np.asarray(deck, dtype=np.int64)
    return WeightedMap(m, theta), deck


def read_map(path, degrees: bool = False):
    return map_from_dict(read_json(path), degrees)


def write_map(path, wm: WeightedMap, deck=None) -> None:
    write_json(path, map_to_dict(wm, deck))


def system_to_dict(asys: AngleSystem, **extra) -> dict:
    out = {
        "mode": asys.mode,
        "face": asys.face,
        "psi": [float(x) for x in asys.psi],
    }
    for k, v in extra.items():
        if isinstance(v, float) and not math.isfinite(v):
            v = None
        out[k] = v
    return out


def system_from_dict(data: dict) -> AngleSystem:
    return AngleSystem(np.asarray(data["psi"], dtype=float), data.get("mode", "full"),
                       data.get("face"))
