"""Broken-profile dynamic programme deciding Hamiltonian-cycle existence.

Cells are scanned row-major.  A state is the plug profile on the frontier:
``w + 1`` slots, each 0 (no plug), 1 (chain end opening, ``(``) or 2
(chain end closing, ``)``).  While cell (c, r) is being processed, slot c
holds the plug entering it from the left and slot c+1 the plug entering
from above; afterwards slot c holds the plug leaving downward and slot
c+1 the plug leaving rightward.  Bracket flips on chain joins follow the
usual matched-parenthesis bookkeeping.  Every cell must be covered, so
the single permitted cycle closure is at the last cell with an otherwise
empty profile.

This is the independent oracle the backtracking solver is checked
against; it shares no code with the search engine.
"""

from __future__ import annotations

from .grid import Edge


def _match_right(state: tuple[int, ...], pos: int) -> int:
    depth = 0
    for i in range(pos + 1, len(state)):
        if state[i] == 1:
            depth += 1
        elif state[i] == 2:
            if depth == 0:
                return i
            depth -= 1
    raise AssertionError("unbalanced plug profile")


def _match_left(state: tuple[int, ...], pos: int) -> int:
    depth = 0
    for i in range(pos - 1, -1, -1):
        if state[i] == 2:
            depth += 1
        elif state[i] == 1:
            if depth == 0:
                return i
            depth -= 1
    raise AssertionError("unbalanced plug profile")


def hamiltonian_cycle_exists(width: int, height: int, barred: frozenset[Edge] | set[Edge]) -> bool:
    """True iff a loop visiting every cell exactly once avoids all barred edges."""
    if width * height % 2 == 1 or width * height < 4:
        return False

    w, h = width, height
    states: set[tuple[int, ...]] = {(0,) * (w + 1)}
    found = False

    for r in range(h):
        for c in range(w):
            right_ok = c + 1 < w and ("h", c, r) not in barred
            down_ok = r + 1 < h and ("v", c, r) not in barred
            last_cell = (c == w - 1 and r == h - 1)
            nxt: set[tuple[int, ...]] = set()
            for s in states:
                left, up = s[c], s[c + 1]
                if left == 0 and up == 0:
                    if right_ok and down_ok:
                        t = list(s)
                        t[c], t[c + 1] = 1, 2
                        nxt.add(tuple(t))
                elif left != 0 and up == 0:
                    if down_ok:
                        t = list(s)
                        t[c], t[c + 1] = left, 0
                        nxt.add(tuple(t))
                    if right_ok:
                        t = list(s)
                        t[c], t[c + 1] = 0, left
                        nxt.add(tuple(t))
                elif left == 0 and up != 0:
                    if down_ok:
                        t = list(s)
                        t[c], t[c + 1] = up, 0
                        nxt.add(tuple(t))
                    if right_ok:
                        t = list(s)
                        t[c], t[c + 1] = 0, up
                        nxt.add(tuple(t))
                else:
                    t = list(s)
                    if left == 1 and up == 1:
                        t[_match_right(s, c + 1)] = 1
                    elif left == 2 and up == 2:
                        t[_match_left(s, c)] = 2
                    elif left == 1 and up == 2:
                        # The plugs are the two ends of one chain: closing it
                        # is only a solution when nothing else remains.
                        if last_cell and all(x == 0 for i, x in enumerate(s) if i not in (c, c + 1)):
                            found = True
                        continue
                    t[c], t[c + 1] = 0, 0
                    nxt.add(tuple(t))
            states = nxt
            if not states:
                return found
        # Row change: the rightmost plug slot must be empty, then the
        # profile shifts one slot to make room for the new left border.
        shifted: set[tuple[int, ...]] = set()
        for s in states:
            if s[w] == 0:
                shifted.add((0,) + s[:w])
        states = shifted
    return found
