"""Command-line entry point.

Subcommands ``validate``, ``init``, ``solve``, ``volume``, ``render`` and
``pipeline``.  Exit codes: 0 success, 2 infeasible or invalid input (the
certificate is printed), 1 internal failure.  Machine-readable results go
to standard output as JSON; diagnostics go to standard error.

A map file with a ``"deck"`` entry is the sphere cover of a projective-plane
map.  Solves run on the cover; ``pipeline`` reports the quotient, whose
volume is half that of the cover.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .angles import perturb_member, stereographic_subspace
from .errors import (
    Infeasible,
    InvalidFace,
    InvolutionNotFree,
    MapError,
    NonpositiveThetaV,
    NotAutomorphism,
    NotInterior,
    NotSphere,
    UnsupportedMode,
)
from .flow import initial_angle_system
from .maps import quotient_map
from .geometry import check_configuration, layout, volume_functional, volume_orthoschemes
from .solver import SolveOptions, maximize
from .svg import render_svg
from .validate import validate_weights

__all__ = ["RunConfig", "main", "run", "build_parser"]

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
SEED_ENV = "UNIFORMIZE_SEED"

# errors caused by the input rather than by the program
_INPUT_ERRORS = (Infeasible, MapError, InvalidFace, NonpositiveThetaV, NotSphere,
                 InvolutionNotFree, NotAutomorphism, UnsupportedMode, NotInterior)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    output: str | None = None
    face: int | None = None
    tol: float = 1e-10
    max_iter: int = 200
    chart: str | None = None
    copies: int = 0

    def __post_init__(self):
        if not self.input:
            raise ValueError("input path must be nonempty")
        if self.output is not None and not self.output:
            raise ValueError("output path must be nonempty")


class _InputError(Exception):
    """Invalid input detected by the CLI itself; carries an optional record."""

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj))


def _seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise _InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _load(args):
    wm, deck = io.read_map(args.map, degrees=getattr(args, "degrees", False))
    return wm, deck


def _face_for(wm, deck, face, parser, allow_default: bool):
    if wm.map.chi > 0 and face is None:
        if allow_default:
            return 0
        parser.error("sphere maps need --face (the solver works in a stereographic chart)")
    if face is not None and not 0 <= face < wm.map.n_faces:
        raise _InputError(f"face {face} out of range 0..{wm.map.n_faces - 1}")
    return face


def _solve(wm, face, opts, perturb: float):
    asys = initial_angle_system(wm, face)
    if perturb > 0:
        stereo = stereographic_subspace(wm, face) if asys.mode == "stereo" else None
        rng = np.random.default_rng(_seed())
        asys = asys.with_psi(perturb_member(wm, asys, rng, scale=perturb, stereo=stereo))
    return maximize(wm, asys, opts)


def _solution_record(wm, deck, res) -> dict:
    return io.system_to_dict(res.system, grad_norm=float(res.grad_norm),
                             iterations=int(res.iterations), value=float(res.value),
                             map=io.map_to_dict(wm, deck))


def _read_solution(path):
    data = io.read_json(path)
    if "map" not in data:
        raise _InputError(f"{path}: solution file lacks the embedded map")
    wm, deck = io.map_from_dict(data["map"])
    asys = io.system_from_dict(data)
    if asys.psi.shape != (wm.map.dart_count,):
        raise _InputError(f"{path}: psi has {asys.psi.size} entries, map has "
                          f"{wm.map.dart_count} darts")
    return wm, deck, asys


# -- commands -------------------------------------------------------------------

def cmd_validate(args, parser) -> int:
    wm, deck = _load(args)
    rep = validate_weights(wm, loop_search_bound=args.loop_bound, flow_check=not args.no_flow)
    out = {
        "verdict": rep.verdict,
        "chi": wm.map.chi,
        "max_face_residual": rep.max_face_residual,
        "violated_loops": [{"edges": list(map(int, c)), "sum": t} for c, t in rep.violated_loops],
        "flow_checked": rep.flow_checked,
        "certificate": None if rep.flow_certificate is None else rep.flow_certificate.to_dict(),
        "notes": rep.notes,
    }
    _emit(out)
    return EXIT_INPUT if rep.verdict == "invalid" else EXIT_OK


def cmd_init(args, parser) -> int:
    wm, deck = _load(args)
    face = _face_for(wm, deck, args.face, parser, allow_default=True)
    asys = initial_angle_system(wm, face)
    rec = io.system_to_dict(asys)
    if args.output:
        io.write_json(args.output, rec)
    else:
        _emit(rec)
    return EXIT_OK


def cmd_solve(args, parser) -> int:
    wm, deck = _load(args)
    face = _face_for(wm, deck, args.face, parser, allow_default=False)
    opts = SolveOptions(grad_tol=args.tol, max_iter=args.max_iter)
    res = _solve(wm, face, opts, args.perturb)
    io.write_json(args.output, _solution_record(wm, deck, res))
    print(f"converged in {res.iterations} steps, gradient norm {res.grad_norm:.3e}",
          file=sys.stderr)
    return EXIT_OK


def cmd_volume(args, parser) -> int:
    wm, deck, asys = _read_solution(args.solution)
    lv = volume_functional(wm, asys)
    ov = volume_orthoschemes(wm, asys)
    _emit({"L": lv, "volume_ortho": ov, "difference": lv - ov})
    return EXIT_OK


def cmd_render(args, parser) -> int:
    wm, deck, asys = _read_solution(args.solution)
    config = layout(wm, asys)
    if args.chart is not None and args.chart != config.chart:
        raise _InputError(f"this solution lays out in the {config.chart} chart, not {args.chart}")
    render_svg(config, wm, path=args.output, overlay=args.overlay, copies=args.copies)
    return EXIT_OK


def cmd_pipeline(args, parser) -> int:
    wm, deck = _load(args)
    rep = validate_weights(wm, loop_search_bound=args.loop_bound)
    if rep.verdict == "invalid":
        cert = None if rep.flow_certificate is None else rep.flow_certificate.to_dict()
        raise _InputError("weights are not admissible", {"certificate": cert})
    qmap = None if deck is None else quotient_map(wm.map, deck)[0]
    face = _face_for(wm, deck, args.face, parser, allow_default=True)
    res = _solve(wm, face, SolveOptions(grad_tol=args.tol, max_iter=args.max_iter), 0.0)
    lv = volume_functional(wm, res.system)
    ov = volume_orthoschemes(wm, res.system)
    config = layout(wm, res.system)
    check = check_configuration(config, wm)
    chi = wm.map.chi
    if qmap is not None:
        # only the volume is pushed down; a stereographic system of the cover
        # is not invariant under the deck involution
        chi, lv, ov = qmap.chi, 0.5 * lv, 0.5 * ov
    if args.output:
        io.write_json(args.output, _solution_record(wm, deck, res))
    if args.svg:
        render_svg(config, wm, path=args.svg)
    _emit({"chi": chi, "L": lv, "volume_ortho": ov, "grad_norm": float(res.grad_norm),
           "max_residual": check.max_residual})
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uniformize",
                                description="Circle patterns from intersection angles.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def map_arg(sp):
        sp.add_argument("map", help="map file (JSON)")
        sp.add_argument("--degrees", action="store_true",
                        help="read the weights in degrees")

    def solve_args(sp):
        sp.add_argument("--tol", type=float, default=1e-10, help="gradient tolerance")
        sp.add_argument("--max-iter", type=int, default=200)

    sp = sub.add_parser("validate", help="check the weights of a map")
    map_arg(sp)
    sp.add_argument("--loop-bound", type=int, default=8, help="longest loop searched")
    sp.add_argument("--no-flow", action="store_true", help="skip the flow test")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("init", help="first coherent angle system")
    map_arg(sp)
    sp.add_argument("--face", type=int)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_init)

    sp = sub.add_parser("solve", help="maximize the functional")
    map_arg(sp)
    sp.add_argument("--face", type=int, help="stereographic face (required on spheres)")
    solve_args(sp)
    sp.add_argument("--perturb", type=float, default=0.0,
                    help="random start this far from the flow point (seeded by "
                         f"{SEED_ENV})")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("volume", help="volume of a solution, two ways")
    sp.add_argument("solution")
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("render", help="SVG of the disk configuration")
    sp.add_argument("solution")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--chart", choices=["poincare", "plane", "stereo"])
    sp.add_argument("--overlay", choices=["quads"])
    sp.add_argument("--copies", type=int, default=0, help="rings of lattice translates")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("pipeline", help="validate, solve, measure and check")
    map_arg(sp)
    sp.add_argument("--face", type=int)
    sp.add_argument("--loop-bound", type=int, default=8)
    solve_args(sp)
    sp.add_argument("-o", "--output", help="also write the solution here")
    sp.add_argument("--svg", help="also render the configuration here")
    sp.set_defaults(func=cmd_pipeline)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        cert = None if exc.certificate is None else exc.certificate.to_dict()
        _emit({"error": "infeasible", "message": str(exc), "certificate": cert})
        return EXIT_INPUT
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.record is not None:
            _emit({"error": "invalid input", "message": str(exc), **exc.record})
        return EXIT_INPUT
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
