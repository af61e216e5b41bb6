"""Shared plumbing for the genre solvers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..grid import Cell, CellLoop, Edge, GridDims, edge_cells, edge_sort_key, internal_edges
from ..search import LoopSearch


@dataclass(frozen=True, slots=True)
class GenreSolveResult:
    status: str  # "sat" | "unsat" | "timeout"
    solution: Optional[object] = None


def build_cell_graph(
    dims: GridDims, allowed: Callable[[Cell], bool]
) -> tuple[list[Edge], list[tuple[int, int]], dict[Cell, int]]:
    """Canonical edge list over allowed cells plus a node index."""
    index = {cell: i for i, cell in enumerate(dims.cells())}
    edges = []
    pairs = []
    for edge in internal_edges(dims):
        a, b = edge_cells(edge)
        if allowed(a) and allowed(b):
            edges.append(edge)
            pairs.append((index[a], index[b]))
    return edges, pairs, index


def run_first(search: LoopSearch, edges: list[Edge], seeds=()) -> Optional[CellLoop]:
    found = search.first_solution(seeds)
    if found is None:
        return None
    return CellLoop(frozenset(edges[i] for i in found))


def make_seeds(edges: list[Edge], seeds_in, seeds_out) -> list[tuple[int, int]]:
    eidx = {e: i for i, e in enumerate(edges)}
    return [(eidx[e], 1) for e in seeds_in] + [(eidx[e], 2) for e in seeds_out]


def sorted_edge_list(edges) -> list[Edge]:
    return sorted(edges, key=edge_sort_key)
