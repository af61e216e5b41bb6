"""Parsers and renderers for the interleaved ASCII tile formats.

Two matrices share one character grid: cells sit at (odd col, odd row)
positions of a (2W+1) x (2H+1) grid, horizontal edges between cells at
(even col, odd row), vertical edges at (odd col, even row), and lattice
corners at (even, even).  A bar grid marks bars with ``#``; a fragment
grid marks loop transitions with ``-`` and ``|``.  The border ring of a
bar grid carries the boundary-edge marks (``#`` for a permanent bar, an
exit letter for a blockable opening).
"""

from __future__ import annotations

from .errors import FormatError
from .grid import Cell, Edge

_SIDE_OF_BORDER = {"N": "N", "E": "E", "S": "S", "W": "W"}


def strip_comments(text: str) -> list[str]:
    """Drop blank lines and ``;`` comment lines (``#`` is a data character)."""
    return [line.rstrip("\n") for line in text.splitlines() if line and not line.startswith(";")]


def parse_bar_grid(lines: list[str], width: int, height: int) -> tuple[frozenset[Edge], dict[str, Cell]]:
    """Read internal bars and border exit marks from a bar grid.

    Returns (bars, exits) where exits maps a side letter to the border
    cell that owns the opening on that side.
    """
    rows, cols = 2 * height + 1, 2 * width + 1
    if len(lines) != rows:
        raise FormatError(f"expected {rows} art rows, found {len(lines)}")
    for i, line in enumerate(lines):
        if len(line) != cols:
            raise FormatError(f"art row {i} has {len(line)} characters, expected {cols}")

    bars: set[Edge] = set()
    exits: dict[str, Cell] = {}

    def border(ch: str, side: str, cell: Cell) -> None:
        if ch == "#":
            return
        if ch in _SIDE_OF_BORDER:
            if ch != side:
                raise FormatError(f"exit letter {ch} on the {side} border at {cell}")
            if side in exits:
                raise FormatError(f"duplicate {side} exit")
            exits[side] = cell
        else:
            raise FormatError(f"unexpected border character {ch!r} at {cell} side {side}")

    for c in range(width):
        border(lines[0][2 * c + 1], "N", (c, 0))
        border(lines[2 * height][2 * c + 1], "S", (c, height - 1))
    for r in range(height):
        border(lines[2 * r + 1][0], "W", (0, r))
        border(lines[2 * r + 1][2 * width], "E", (width - 1, r))

    for r in range(height):
        for c in range(width - 1):
            ch = lines[2 * r + 1][2 * c + 2]
            if ch == "#":
                bars.add(("h", c, r))
            elif ch != ".":
                raise FormatError(f"bad horizontal edge character {ch!r} at ({c},{r})")
    for r in range(height - 1):
        for c in range(width):
            ch = lines[2 * r + 2][2 * c + 1]
            if ch == "#":
                bars.add(("v", c, r))
            elif ch != ".":
                raise FormatError(f"bad vertical edge character {ch!r} at ({c},{r})")
    return frozenset(bars), exits


def parse_fragment_grid(lines: list[str], width: int, height: int) -> frozenset[Edge]:
    """Read loop transitions (``-`` between cells, ``|`` below cells)."""
    rows = 2 * height - 1
    if len(lines) != rows:
        raise FormatError(f"expected {rows} fragment rows, found {len(lines)}")
    edges: set[Edge] = set()
    for r in range(height):
        line = lines[2 * r].ljust(2 * width - 1)
        for c in range(width - 1):
            ch = line[2 * c + 1]
            if ch == "-":
                edges.add(("h", c, r))
            elif ch not in " .":
                raise FormatError(f"bad fragment character {ch!r}")
    for r in range(height - 1):
        line = lines[2 * r + 1].ljust(2 * width - 1)
        for c in range(width):
            ch = line[2 * c]
            if ch == "|":
                edges.add(("v", c, r))
            elif ch not in " .":
                raise FormatError(f"bad fragment character {ch!r}")
    return frozenset(edges)


def render_fragment_grid(edges: frozenset[Edge] | set[Edge], width: int, height: int) -> list[str]:
    rows = [["."] * (2 * width - 1) for _ in range(2 * height - 1)]
    for axis, c, r in edges:
        if axis == "h":
            rows[2 * r][2 * c + 1] = "-"
        else:
            rows[2 * r + 1][2 * c] = "|"
    return ["".join(row) for row in rows]


def parse_lattice_fragment(lines: list[str], dots_w: int, dots_h: int) -> frozenset[Edge]:
    """Read a dot-lattice fragment: dots at even/even, edges between dots."""
    rows = 2 * dots_h - 1
    if len(lines) != rows:
        raise FormatError(f"expected {rows} lattice rows, found {len(lines)}")
    edges: set[Edge] = set()
    for j in range(dots_h):
        line = lines[2 * j].ljust(2 * dots_w - 1)
        for i in range(dots_w - 1):
            ch = line[2 * i + 1]
            if ch == "-":
                edges.add(("h", i, j))
            elif ch not in " .":
                raise FormatError(f"bad lattice character {ch!r}")
    for j in range(dots_h - 1):
        line = lines[2 * j + 1].ljust(2 * dots_w - 1)
        for i in range(dots_w):
            ch = line[2 * i]
            if ch == "|":
                edges.add(("v", i, j))
            elif ch not in " .":
                raise FormatError(f"bad lattice character {ch!r}")
    return frozenset(edges)


def render_lattice_fragment(edges: frozenset[Edge] | set[Edge], dots_w: int, dots_h: int) -> list[str]:
    rows = [["."] * (2 * dots_w - 1) for _ in range(2 * dots_h - 1)]
    for axis, i, j in edges:
        if axis == "h":
            rows[2 * j][2 * i + 1] = "-"
        else:
            rows[2 * j + 1][2 * i] = "|"
    return ["".join(row) for row in rows]
