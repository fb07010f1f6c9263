"""Run the CLI pipeline on every map in ``maps/`` and collect the summaries.

Usage: ``python3 scripts/run_examples.py [MAPDIR] [OUTDIR]``

Writes ``OUTDIR/<name>.solution.json``, ``OUTDIR/<name>.svg`` and
``OUTDIR/summary.json``; maps that are rejected are listed with exit code 2.
"""

import contextlib
import io as _io
import json
import sys
from pathlib import Path

from uniformize import io
from uniformize.cli import run


def main(mapdir="maps", outdir="out"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for path in sorted(Path(mapdir).glob("*.json")):
        name = path.stem
        buf = _io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = run(["pipeline", str(path), "-o", str(out / f"{name}.solution.json"),
                        "--svg", str(out / f"{name}.svg")])
        record = json.loads(buf.getvalue()) if buf.getvalue() else {}
        summary[name] = {"exit": code, **record}
        shown = {k: record.get(k) for k in ("chi", "L", "max_residual")}
        print(f"{name:18s} exit={code} {shown}")
    io.write_json(out / "summary.json", summary)


if __name__ == "__main__":
    main(*sys.argv[1:])
