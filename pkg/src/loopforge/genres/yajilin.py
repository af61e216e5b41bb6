"""Yajilin: loop between cell centres; grey cells stay off the loop;
unvisited plain cells are shaded, no two shaded cells touch, and a grey
clue counts the shaded cells along its arrow."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import SearchTimeout
from ..grid import Cell, CellLoop, GridDims, Violation, validate_loop
from ..search import EXACT2, IN, OPT, OUT, LoopSearch
from .base import GenreSolveResult, build_cell_graph, make_seeds

SOLUTION_KIND = "cell-loop"

DIR_DELTAS = {"N": (0, -1), "E": (1, 0), "S": (0, 1), "W": (-1, 0)}

UNDET, VISITED, SHADED = 0, 1, 2


@dataclass(frozen=True, slots=True)
class YajilinPuzzle:
    dims: GridDims
    grey: frozenset[Cell]
    clues: tuple[tuple[Cell, int, str], ...] = ()  # (grey cell, count, direction)

    def __post_init__(self) -> None:
        for cell in self.grey:
            self.dims.require(cell)
        for cell, count, direction in self.clues:
            if cell not in self.grey:
                raise ValueError(f"clue at {cell} is not on a grey cell")
            if count < 0 or direction not in DIR_DELTAS:
                raise ValueError(f"bad clue {count}{direction} at {cell}")

    def ray(self, cell: Cell, direction: str) -> list[Cell]:
        dc, dr = DIR_DELTAS[direction]
        c, r = cell
        out = []
        while True:
            c, r = c + dc, r + dr
            if not self.dims.contains((c, r)):
                return out
            out.append((c, r))


def shaded_cells(puzzle: YajilinPuzzle, sol: CellLoop) -> set[Cell]:
    visited = sol.visited_cells()
    return {c for c in puzzle.dims.cells() if c not in puzzle.grey and c not in visited}


def verify(puzzle: YajilinPuzzle, sol: CellLoop) -> Optional[Violation]:
    bad = validate_loop(puzzle.dims, sol)
    if bad is not None:
        return bad
    visited = sol.visited_cells()
    hit = visited & puzzle.grey
    if hit:
        return Violation("grey", "loop passes through a grey cell", cell=min(hit))
    shaded = shaded_cells(puzzle, sol)
    for c, r in sorted(shaded):
        for nbr in ((c + 1, r), (c, r + 1)):
            if nbr in shaded:
                return Violation("shading", "two shaded cells are adjacent", cell=(c, r))
    for cell, count, direction in puzzle.clues:
        got = sum(1 for x in puzzle.ray(cell, direction) if x in shaded)
        if got != count:
            return Violation("clue", f"arrow count is {got}, expected {count}", cell=cell)
    return None


class _YajilinSearch(LoopSearch):
    def __init__(self, puzzle: YajilinPuzzle, edges, pairs, index, **kw):
        n = puzzle.dims.cell_count
        req = [OPT] * n
        super().__init__(n, pairs, req, **kw)
        self.puzzle = puzzle
        self.index = index
        self.cells = list(puzzle.dims.cells())
        self.grey_idx = {index[c] for c in puzzle.grey}
        self.status = [UNDET] * n
        for gi in self.grey_idx:
            self.status[gi] = SHADED  # never visited; not subject to shading rules
        self.nbrs = [[] for _ in range(n)]
        for cell in puzzle.dims.cells():
            i = index[cell]
            if i in self.grey_idx:
                continue
            c, r = cell
            for d in DIR_DELTAS.values():
                x = (c + d[0], r + d[1])
                if puzzle.dims.contains(x) and index[x] not in self.grey_idx:
                    self.nbrs[i].append(index[x])
        # clue -> ray node ids; node -> clue ids
        self.rays = []
        self.watch: dict[int, list[int]] = {}
        for ci, (cell, count, direction) in enumerate(puzzle.clues):
            ray = [index[x] for x in puzzle.ray(cell, direction)]
            self.rays.append((count, ray))
            for x in ray:
                self.watch.setdefault(x, []).append(ci)

    def node_rules_extra(self, x: int) -> bool:
        if x in self.grey_idx:
            return True
        old = self.status[x]
        if old == UNDET:
            if self.in_cnt[x] > 0:
                new = VISITED
            elif self.unk_cnt[x] == 0:
                new = SHADED
            else:
                return True
            self.trail_extra(("status", x, old))
            self.status[x] = new
            if new == SHADED:
                for y in self.nbrs[x]:
                    if self.status[y] == SHADED:
                        return False
                    if self.req[y] != EXACT2:
                        self.set_req(y, EXACT2)
                        if not self._node_rules(y):
                            return False
            for ci in self.watch.get(x, ()):
                if not self._check_clue(ci):
                    return False
        return True

    def _check_clue(self, ci: int) -> bool:
        count, ray = self.rays[ci]
        shaded = undet = 0
        status = self.status
        grey = self.grey_idx
        undet_nodes = []
        for x in ray:
            if x in grey:
                continue
            st = status[x]
            if st == SHADED:
                shaded += 1
            elif st == UNDET:
                undet += 1
                undet_nodes.append(x)
        if shaded > count or shaded + undet < count:
            return False
        if undet:
            if shaded == count:
                # Remaining ray cells must be visited.
                for x in undet_nodes:
                    if self.req[x] != EXACT2:
                        self.set_req(x, EXACT2)
                        if not self._node_rules(x):
                            return False
            elif shaded + undet == count:
                # Remaining ray cells must be shaded: all their edges out.
                for x in undet_nodes:
                    for ei in self.incident[x]:
                        if not self.state[ei]:
                            self.queue.append((ei, OUT))
        return True

    def undo_extra(self, entry: tuple) -> None:
        _, x, old = entry
        self.status[x] = old


def solve(
    puzzle: YajilinPuzzle,
    budget_ms: Optional[float] = None,
    seeds_in=(),
    seeds_out=(),
    enumerate_all: bool = False,
):
    edges, pairs, index = build_cell_graph(puzzle.dims, lambda c: c not in puzzle.grey)
    search = _YajilinSearch(
        puzzle, edges, pairs, index, budget_ms=budget_ms, connectivity_every=1, branch_frontier=True
    )
    search.accept = lambda cand: verify(puzzle, CellLoop(frozenset(edges[i] for i in cand))) is None
    seeds = make_seeds(edges, seeds_in, seeds_out)
    if enumerate_all:
        return (CellLoop(frozenset(edges[i] for i in cand)) for cand in search.solutions(seeds))
    try:
        found = search.first_solution(seeds)
    except SearchTimeout:
        return GenreSolveResult("timeout")
    if found is None:
        return GenreSolveResult("unsat")
    return GenreSolveResult("sat", CellLoop(frozenset(edges[i] for i in found)))
