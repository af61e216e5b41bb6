"""JSON interchange for puzzles, solutions, manifests and run reports.

One shared envelope for every puzzle kind: ``{"genre": ..., "width": ...,
"height": ..., ...genre fields}``.  Solutions are sorted edge lists.
Serialisation is canonical: sorted keys, sorted edges, no whitespace
variation, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from typing import Union

from .bsl import BslPuzzle, CubicBslPuzzle
from .errors import FormatError, GenreMismatchError
from .genres.masyu import MasyuPuzzle
from .genres.simple_loop import SimpleLoopPuzzle
from .genres.slitherlink import LatticeLoop, SlitherlinkPuzzle
from .genres.yajilin import YajilinPuzzle
from .grid import CellLoop, Edge, GridDims, edge_sort_key
from .reduction import GenreReductionManifest
from .metacell import CubicReductionManifest

Puzzle = Union[
    BslPuzzle, CubicBslPuzzle, SlitherlinkPuzzle, MasyuPuzzle, YajilinPuzzle, SimpleLoopPuzzle
]

_DIRS = ("N", "E", "S", "W")


def puzzle_genre(puzzle: Puzzle) -> str:
    if isinstance(puzzle, CubicBslPuzzle):
        return "cubic-bsl"
    if isinstance(puzzle, BslPuzzle):
        return "bsl"
    if isinstance(puzzle, SlitherlinkPuzzle):
        return "slitherlink"
    if isinstance(puzzle, MasyuPuzzle):
        return "masyu"
    if isinstance(puzzle, YajilinPuzzle):
        return "yajilin"
    if isinstance(puzzle, SimpleLoopPuzzle):
        return "simple-loop"
    raise FormatError(f"unknown puzzle object {type(puzzle).__name__}")


def _edges_json(edges) -> list[dict]:
    return [
        {"axis": axis, "col": c, "row": r}
        for axis, c, r in sorted(edges, key=edge_sort_key)
    ]


def _edges_from_json(items) -> frozenset[Edge]:
    out = set()
    for item in items:
        axis = item["axis"]
        if axis not in ("h", "v"):
            raise FormatError(f"bad edge axis {axis!r}")
        out.add((axis, int(item["col"]), int(item["row"])))
    return frozenset(out)


def puzzle_to_json(puzzle: Puzzle) -> dict:
    genre = puzzle_genre(puzzle)
    if genre in ("bsl", "cubic-bsl"):
        inner = puzzle.inner if genre == "cubic-bsl" else puzzle
        return {
            "genre": genre,
            "width": inner.dims.width,
            "height": inner.dims.height,
            "bars": _edges_json(inner.bars),
        }
    base = {"genre": genre, "width": puzzle.dims.width, "height": puzzle.dims.height}
    if genre == "slitherlink":
        base["clues"] = [
            {"col": c, "row": r, "count": n} for (c, r), n in sorted(puzzle.clues)
        ]
    elif genre == "masyu":
        base["pearls"] = [
            {"col": c, "row": r, "color": colour} for (c, r), colour in sorted(puzzle.pearls)
        ]
    elif genre == "yajilin":
        clue_at = {cell: (n, d) for cell, n, d in puzzle.clues}
        base["grey"] = [
            {
                "col": c,
                "row": r,
                "count": clue_at.get((c, r), (None, None))[0],
                "dir": clue_at.get((c, r), (None, None))[1],
            }
            for (c, r) in sorted(puzzle.grey)
        ]
    elif genre == "simple-loop":
        base["shaded"] = [{"col": c, "row": r} for (c, r) in sorted(puzzle.shaded)]
    return base


def puzzle_from_json(doc: dict) -> Puzzle:
    try:
        genre = doc["genre"]
        dims = GridDims(int(doc["width"]), int(doc["height"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad puzzle document: {exc}") from exc
    if genre == "bsl" or genre == "cubic-bsl":
        bars = set()
        for item in doc.get("bars", []):
            axis = item["axis"]
            if axis not in ("h", "v"):
                raise FormatError(f"bad bar axis {axis!r}")
            bars.add((axis, int(item["col"]), int(item["row"])))
        puzzle = BslPuzzle(dims, frozenset(bars))
        if genre == "cubic-bsl":
            try:
                return CubicBslPuzzle(puzzle)
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
        return puzzle
    if genre == "slitherlink":
        clues = tuple(
            ((int(i["col"]), int(i["row"])), int(i["count"])) for i in doc.get("clues", [])
        )
        return SlitherlinkPuzzle(dims, tuple(sorted(clues)))
    if genre == "masyu":
        pearls = tuple(
            ((int(i["col"]), int(i["row"])), i["color"]) for i in doc.get("pearls", [])
        )
        return MasyuPuzzle(dims, tuple(sorted(pearls)))
    if genre == "yajilin":
        grey = set()
        clues = []
        for i in doc.get("grey", []):
            cell = (int(i["col"]), int(i["row"]))
            grey.add(cell)
            if i.get("count") is not None:
                direction = i.get("dir")
                if direction not in _DIRS:
                    raise FormatError(f"bad arrow direction {direction!r}")
                clues.append((cell, int(i["count"]), direction))
        return YajilinPuzzle(dims, frozenset(grey), tuple(sorted(clues)))
    if genre == "simple-loop":
        shaded = frozenset((int(i["col"]), int(i["row"])) for i in doc.get("shaded", []))
        return SimpleLoopPuzzle(dims, shaded)
    raise FormatError(f"unknown genre {genre!r}")


def solution_to_json(genre: str, sol) -> dict:
    if genre == "slitherlink":
        return {"genre": genre, "lattice_edges": _edges_json(sol.edges)}
    return {"genre": genre, "edges": _edges_json(sol.transitions)}


def solution_from_json(doc: dict):
    genre = doc.get("genre")
    if genre == "slitherlink":
        if "lattice_edges" not in doc:
            raise FormatError("slitherlink solution needs lattice_edges")
        return LatticeLoop(_edges_from_json(doc["lattice_edges"]))
    if "edges" not in doc:
        raise FormatError("solution document needs an edges list")
    return CellLoop(_edges_from_json(doc["edges"]))


def ensure_solution_matches(puzzle_genre_id: str, doc: dict) -> None:
    sol_genre = doc.get("genre")
    if sol_genre != puzzle_genre_id:
        raise GenreMismatchError(
            f"solution genre {sol_genre!r} does not match puzzle genre {puzzle_genre_id!r}"
        )


def manifest_to_json(manifest) -> dict:
    if isinstance(manifest, CubicReductionManifest):
        return {
            "kind": "cubic-manifest",
            "source": puzzle_to_json(manifest.source),
            "cells": [
                {
                    "col": c,
                    "row": r,
                    "transform": manifest.transforms[(c, r)].name,
                    "blocked": sorted(manifest.blocked[(c, r)]),
                }
                for (c, r) in manifest.source.dims.cells()
            ],
        }
    if isinstance(manifest, GenreReductionManifest):
        return {
            "kind": "genre-manifest",
            "genre": manifest.genre,
            "source": puzzle_to_json(manifest.source),
            "tile": [manifest.descriptor.tile.width, manifest.descriptor.tile.height],
            "degenerate": manifest.degenerate,
            "cells": [
                {
                    "col": c,
                    "row": r,
                    "transform": p.transform.name,
                    "exits": sorted(p.exits),
                    "free_edge": p.free_edge,
                }
                for (c, r), p in sorted(manifest.placements.items())
            ],
        }
    raise FormatError(f"unknown manifest object {type(manifest).__name__}")


def manifest_from_json(doc: dict):
    from .metacell import load_metacell
    from .catalog import load_gadget
    from .reduction import TilePlacement
    from .transforms import Transform

    kind = doc.get("kind")
    if kind == "cubic-manifest":
        source = puzzle_from_json(doc["source"])
        template = load_metacell()
        from .metacell import reduce_to_cubic

        image, manifest = reduce_to_cubic(source, template)
        # The reduction is deterministic; the stored cells are a consistency check.
        for item in doc["cells"]:
            cell = (int(item["col"]), int(item["row"]))
            if manifest.transforms[cell].name != Transform.named(item["transform"]).name:
                raise FormatError(f"manifest transform mismatch at {cell}")
        return manifest
    if kind == "genre-manifest":
        source = puzzle_from_json(doc["source"])
        if not isinstance(source, CubicBslPuzzle):
            source = CubicBslPuzzle(source)
        desc = load_gadget(doc["genre"])
        manifest = GenreReductionManifest(doc["genre"], source, desc, bool(doc["degenerate"]))
        for item in doc["cells"]:
            cell = (int(item["col"]), int(item["row"]))
            manifest.placements[cell] = TilePlacement(
                Transform.named(item["transform"]),
                frozenset(item["exits"]),
                item.get("free_edge"),
            )
        return manifest
    raise FormatError(f"unknown manifest kind {kind!r}")


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
