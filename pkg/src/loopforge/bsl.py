"""Barred Simple Loop and its cubic restriction: types, verifier, solvers.

A puzzle is a rectangular grid with bars on some internal edges; a
solution is a single loop through every cell crossing no bar.  The cubic
variant additionally guarantees every cell has at most three accessible
neighbours.  Two independent exact deciders are provided: a backtracking
solver built on the shared search engine, and the broken-profile DP in
:mod:`loopforge.dp`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import dp
from .errors import CapabilityError
from .grid import (
    Cell,
    CellLoop,
    Edge,
    GridDims,
    Violation,
    edge_in_bounds,
    edge_sort_key,
    internal_edges,
    is_internal,
    neighbors,
    validate_loop,
)
from .search import EXACT2, LoopSearch

DEFAULT_PROFILE_CAP = 14


@dataclass(frozen=True, slots=True)
class BslPuzzle:
    """Grid plus barred internal edges."""

    dims: GridDims
    bars: frozenset[Edge]

    def __post_init__(self) -> None:
        for edge in self.bars:
            if not is_internal(edge) or not edge_in_bounds(self.dims, edge):
                raise ValueError(f"bar {edge} is not an internal edge of the grid")

    def accessible_neighbors(self, cell: Cell) -> list[tuple[Cell, Edge]]:
        return [(nbr, edge) for nbr, edge in neighbors(self.dims, cell) if edge not in self.bars]


@dataclass(frozen=True, slots=True)
class CubicBslPuzzle:
    """A barred puzzle whose every cell has at most 3 accessible neighbours."""

    inner: BslPuzzle

    def __post_init__(self) -> None:
        bad = check_cubic(self.inner)
        if bad:
            raise ValueError(f"cell {bad[0]} has 4 accessible neighbours; not cubic")

    @property
    def dims(self) -> GridDims:
        return self.inner.dims

    @property
    def bars(self) -> frozenset[Edge]:
        return self.inner.bars


def verify_bsl(puzzle: BslPuzzle, sol: CellLoop) -> Optional[Violation]:
    """Valid iff the loop covers every cell exactly once and avoids all bars."""
    crossing = sol.transitions & puzzle.bars
    if crossing:
        return Violation("bar", "loop crosses a bar", edge=min(crossing, key=edge_sort_key))
    return validate_loop(puzzle.dims, sol, must_visit=puzzle.dims.cells())


def check_cubic(puzzle: BslPuzzle) -> list[Cell]:
    """Cells with four accessible neighbours (empty list means cubic)."""
    return [cell for cell in puzzle.dims.cells() if len(puzzle.accessible_neighbors(cell)) > 3]


def parity_unsat(puzzle: BslPuzzle) -> bool:
    """True when both side lengths are odd, which forces unsolvability.

    The cell adjacency graph is bipartite under the checkerboard colouring
    and an odd-by-odd board has unequal colour classes, so no Hamiltonian
    cycle exists.  False implies nothing.
    """
    return puzzle.dims.width % 2 == 1 and puzzle.dims.height % 2 == 1


def degenerate_cells(puzzle: BslPuzzle) -> list[Cell]:
    """Cells with fewer than two accessible neighbours; any one proves unsat."""
    return [cell for cell in puzzle.dims.cells() if len(puzzle.accessible_neighbors(cell)) < 2]


@dataclass(frozen=True, slots=True)
class SolveResult:
    status: str  # "sat" | "unsat" | "timeout"
    solution: Optional[CellLoop] = None


def _puzzle_graph(puzzle: BslPuzzle) -> tuple[list[Edge], list[tuple[int, int]]]:
    dims = puzzle.dims
    edges = [e for e in internal_edges(dims) if e not in puzzle.bars]
    index = {cell: i for i, cell in enumerate(dims.cells())}
    pairs = []
    for axis, c, r in edges:
        if axis == "h":
            pairs.append((index[(c, r)], index[(c + 1, r)]))
        else:
            pairs.append((index[(c, r)], index[(c, r + 1)]))
    return edges, pairs


def solve_bsl_backtrack(puzzle: BslPuzzle, budget_ms: Optional[float] = None) -> SolveResult:
    """Exact search; returns the canonically least solution when one exists."""
    from .errors import SearchTimeout

    edges, pairs = _puzzle_graph(puzzle)
    n = puzzle.dims.cell_count
    search = LoopSearch(
        n,
        pairs,
        [EXACT2] * n,
        budget_ms=budget_ms,
        connectivity_every=32,
    )
    try:
        found = search.first_solution()
    except SearchTimeout:
        return SolveResult("timeout")
    if found is None:
        return SolveResult("unsat")
    loop = CellLoop(frozenset(edges[i] for i in found))
    return SolveResult("sat", loop)


def solve_bsl_dp(puzzle: BslPuzzle, profile_cap: int = DEFAULT_PROFILE_CAP) -> bool:
    """Independent solvability oracle over the shorter grid dimension."""
    w, h = puzzle.dims.width, puzzle.dims.height
    if min(w, h) > profile_cap:
        raise CapabilityError(f"profile width {min(w, h)} exceeds cap {profile_cap}")
    if w <= h:
        return dp.hamiltonian_cycle_exists(w, h, puzzle.bars)
    # Transpose so the profile runs across the shorter dimension.
    flipped = frozenset(
        ("v", r, c) if axis == "h" else ("h", r, c) for axis, c, r in puzzle.bars
    )
    return dp.hamiltonian_cycle_exists(h, w, flipped)
