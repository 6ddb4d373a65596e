"""Versioned CSV emission with deterministic float formatting.

Every file starts with a `# mima3d <kind>-csv v<N>` schema line followed
by a header row; floats are written with shortest round-trip repr so
identical runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

SCHEMAS = {
    "diagnostics": 1,
    "audit": 1,
    "enstrophy-series": 1,
    "convergence": 1,
    "cdep": 1,
    "cdep-fit": 1,
    "inequality": 1,
    "inequality-constants": 1,
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, kind: str, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    version = SCHEMAS[kind]
    lines = [f"# mima3d {kind}-csv v{version}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path: str | Path, kind: str | None = None):
    """Read a schema'd CSV back into (columns, list-of-row-lists of floats/str)."""
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not text or not text[0].startswith("# mima3d"):
        raise ValueError(f"{path}: missing schema line")
    if kind is not None:
        expected = f"# mima3d {kind}-csv v{SCHEMAS[kind]}"
        if text[0].strip() != expected:
            raise ValueError(f"{path}: schema {text[0]!r}, expected {expected!r}")
    columns = text[1].split(",")
    rows = []
    for line in text[2:]:
        cells = []
        for cell in line.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(cells)
    return columns, rows
