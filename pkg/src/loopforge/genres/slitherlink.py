"""Slitherlink: a single loop on the dot lattice; a clue counts the loop
edges around its cell."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import SearchTimeout
from ..grid import Cell, Edge, GridDims, Violation, edge_sort_key
from ..search import OPT, OUT, LoopSearch
from .base import GenreSolveResult

SOLUTION_KIND = "lattice-loop"


@dataclass(frozen=True, slots=True)
class SlitherlinkPuzzle:
    dims: GridDims  # cells; the dot lattice is (width+1) x (height+1)
    clues: tuple[tuple[Cell, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for cell, count in self.clues:
            self.dims.require(cell)
            if not 0 <= count <= 3:
                raise ValueError(f"clue {count} at {cell} out of range")
            if cell in seen:
                raise ValueError(f"duplicate clue at {cell}")
            seen.add(cell)

    def clue_map(self) -> dict[Cell, int]:
        return dict(self.clues)


@dataclass(frozen=True, slots=True)
class LatticeLoop:
    """Loop on the dot lattice: ("h", i, j) joins dots (i,j)-(i+1,j),
    ("v", i, j) joins (i,j)-(i,j+1)."""

    edges: frozenset[Edge]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=edge_sort_key)


def lattice_edges(dims: GridDims) -> list[Edge]:
    """All lattice edges of a (W+1) x (H+1) dot grid, canonical order."""
    dw, dh = dims.width + 1, dims.height + 1
    edges: list[Edge] = []
    for j in range(dh):
        for i in range(dw):
            if i + 1 < dw:
                edges.append(("h", i, j))
            if j + 1 < dh:
                edges.append(("v", i, j))
    edges.sort(key=edge_sort_key)
    return edges


def cell_border_edges(cell: Cell) -> list[Edge]:
    c, r = cell
    return [("h", c, r), ("h", c, r + 1), ("v", c, r), ("v", c + 1, r)]


def edge_count_around(sol: LatticeLoop, cell: Cell) -> int:
    return sum(1 for e in cell_border_edges(cell) if e in sol.edges)


def verify(puzzle: SlitherlinkPuzzle, sol: LatticeLoop) -> Optional[Violation]:
    if not sol.edges:
        return Violation("empty", "a loop must be drawn")
    dw, dh = puzzle.dims.width + 1, puzzle.dims.height + 1
    degree: dict[Cell, list[Cell]] = {}
    for axis, i, j in sol.edges:
        if axis == "h":
            a, b = (i, j), (i + 1, j)
        else:
            a, b = (i, j), (i, j + 1)
        if not (0 <= a[0] < dw and 0 <= a[1] < dh and 0 <= b[0] < dw and 0 <= b[1] < dh):
            return Violation("bounds", "edge outside the lattice", edge=(axis, i, j))
        degree.setdefault(a, []).append(b)
        degree.setdefault(b, []).append(a)
    for dot, nbrs in degree.items():
        if len(nbrs) != 2:
            return Violation("degree", f"dot has degree {len(nbrs)}", cell=dot)
    start = min(degree)
    prev, cur, steps = None, start, 0
    while True:
        a, b = degree[cur]
        nxt = b if a == prev else a
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
        if steps > len(sol.edges):
            return Violation("walk", "cycle walk failed to close", cell=cur)
    if steps != len(sol.edges):
        return Violation("components", "loop has more than one component", cell=start)
    for cell, count in puzzle.clues:
        got = edge_count_around(sol, cell)
        if got != count:
            return Violation("clue", f"cell has {got} edges, expected {count}", cell=cell)
    return None


class _SlitherlinkSearch(LoopSearch):
    def __init__(self, puzzle: SlitherlinkPuzzle, edges, pairs, n_dots, **kw):
        super().__init__(n_dots, pairs, [OPT] * n_dots, **kw)
        eidx = {e: i for i, e in enumerate(edges)}
        # Clue counters: (target, edge ids); edge -> clue ids.
        self.cells: list[tuple[int, list[int]]] = []
        self.cell_in: list[int] = []
        self.cell_unk: list[int] = []
        self.edge_cells: dict[int, list[int]] = {}
        for cell, count in puzzle.clues:
            ids = [eidx[e] for e in cell_border_edges(cell)]
            ci = len(self.cells)
            self.cells.append((count, ids))
            self.cell_in.append(0)
            self.cell_unk.append(len(ids))
            for ei in ids:
                self.edge_cells.setdefault(ei, []).append(ci)

    def on_assigned(self, ei: int, val: int) -> bool:
        for ci in self.edge_cells.get(ei, ()):
            self.trail_extra((ci, self.cell_in[ci], self.cell_unk[ci]))
            self.cell_unk[ci] -= 1
            if val == 1:
                self.cell_in[ci] += 1
            target, ids = self.cells[ci]
            got, unk = self.cell_in[ci], self.cell_unk[ci]
            if got > target or got + unk < target:
                return False
            if unk:
                if got == target:
                    for e2 in ids:
                        if not self.state[e2]:
                            self.queue.append((e2, OUT))
                elif got + unk == target:
                    for e2 in ids:
                        if not self.state[e2]:
                            self.queue.append((e2, 1))
        return True

    def undo_extra(self, entry: tuple) -> None:
        ci, got, unk = entry
        self.cell_in[ci] = got
        self.cell_unk[ci] = unk


def solve(
    puzzle: SlitherlinkPuzzle,
    budget_ms: Optional[float] = None,
    seeds_in=(),
    seeds_out=(),
    enumerate_all: bool = False,
):
    dw = puzzle.dims.width + 1
    edges = lattice_edges(puzzle.dims)
    idx = lambda i, j: j * dw + i
    pairs = []
    for axis, i, j in edges:
        if axis == "h":
            pairs.append((idx(i, j), idx(i + 1, j)))
        else:
            pairs.append((idx(i, j), idx(i, j + 1)))
    n_dots = dw * (puzzle.dims.height + 1)
    search = _SlitherlinkSearch(puzzle, edges, pairs, n_dots, budget_ms=budget_ms, connectivity_every=1, branch_frontier=True)
    search.accept = lambda cand: verify(puzzle, LatticeLoop(frozenset(edges[i] for i in cand))) is None
    eidx = {e: i for i, e in enumerate(edges)}
    seeds = [(eidx[e], 1) for e in seeds_in] + [(eidx[e], 2) for e in seeds_out]
    if enumerate_all:
        return (LatticeLoop(frozenset(edges[i] for i in cand)) for cand in search.solutions(seeds))
    try:
        found = search.first_solution(seeds)
    except SearchTimeout:
        return GenreSolveResult("timeout")
    if found is None:
        return GenreSolveResult("unsat")
    return GenreSolveResult("sat", LatticeLoop(frozenset(edges[i] for i in found)))
