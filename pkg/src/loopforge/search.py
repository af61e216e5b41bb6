"""Exact backtracking engine for single-loop edge puzzles.

The engine works on an abstract graph: nodes are cell centres (or lattice
dots) and edges are the places a loop segment may lie.  Every edge ends up
``IN`` or ``OUT``; nodes carry a degree requirement (``EXACT2`` for cells
that must be visited, ``OPT`` for cells that may be skipped).  Unit
propagation enforces degree arithmetic, chains are tracked so a closed
cycle is detected immediately, and genre-specific rules plug in through
the ``on_assigned`` / ``node_rules_extra`` / ``accept`` hooks.

Two deterministic branching modes exist, both trying ``IN`` before
``OUT``.  The default sweeps edges in index order, so with canonically
sorted edges the first solution found is the lexicographically least
edge set.  ``branch_frontier`` instead keeps extending an open chain
end, which scales to much larger boards but gives up the lexicographic
guarantee; reruns still produce the identical solution.

Pruning (degree conflicts, premature closure, bridge/articulation cuts,
bipartite parity) only ever discards branches that cannot contain a
valid solution, so exhausting the tree is a proof of unsatisfiability.
Instances are one-shot: abandoning a solution generator mid-flight
leaves the state mid-branch.
"""

from __future__ import annotations

import sys
import time
from collections import deque
from typing import Iterable, Iterator, Optional

from .errors import SearchTimeout

UNKNOWN, IN, OUT = 0, 1, 2
EXACT2, OPT = 0, 1


class LoopSearch:
    """Single-loop search over an explicit node/edge graph."""

    def __init__(
        self,
        n_nodes: int,
        edges: list[tuple[int, int]],
        req: list[int],
        *,
        budget_ms: Optional[float] = None,
        connectivity_every: int = 0,
        branch_frontier: bool = False,
    ):
        self.n_nodes = n_nodes
        self.edges = edges
        self.req = list(req)
        self.incident: list[list[int]] = [[] for _ in range(n_nodes)]
        for i, (u, v) in enumerate(edges):
            self.incident[u].append(i)
            self.incident[v].append(i)
        self.state = bytearray(len(edges))
        self.in_cnt = [0] * n_nodes
        self.unk_cnt = [len(self.incident[x]) for x in range(n_nodes)]
        self.partner = list(range(n_nodes))
        self.closed = False
        self.trail: list[tuple] = []
        self.queue: deque[tuple[int, int]] = deque()
        self.deadline = None if budget_ms is None else time.monotonic() + budget_ms / 1000.0
        self.connectivity_every = connectivity_every
        # Frontier branching extends an open chain end instead of sweeping
        # edges in index order: far better locality on large boards, still
        # deterministic, but the first solution found is no longer the
        # lexicographically least one.
        self.branch_frontier = branch_frontier
        self.ends: set[int] = set()
        # Must-visit nodes not yet on the loop: a cycle may only close
        # when this reaches zero and no other chain is open.
        self.uncovered = sum(1 for x in range(n_nodes) if self.req[x] == EXACT2)
        self._out_dirty = True
        self._last_end = -1
        self.color = self._two_color()
        self._calls = 0
        self._ticks = 0

    def _two_color(self) -> Optional[bytearray]:
        """Bipartition classes of the node graph; None when not bipartite."""
        color = bytearray(self.n_nodes)
        seen = bytearray(self.n_nodes)
        for s in range(self.n_nodes):
            if seen[s]:
                continue
            seen[s] = 1
            stack = [s]
            while stack:
                x = stack.pop()
                for ei in self.incident[x]:
                    u, v = self.edges[ei]
                    y = v if u == x else u
                    if not seen[y]:
                        seen[y] = 1
                        color[y] = color[x] ^ 1
                        stack.append(y)
                    elif color[y] == color[x]:
                        return None
        return color

    # ------------------------------------------------------------------
    # genre hooks

    def on_assigned(self, ei: int, val: int) -> bool:
        """Called after every edge assignment; queue forcings, False = conflict."""
        return True

    def node_rules_extra(self, x: int) -> bool:
        """Extra per-node rules run alongside degree arithmetic."""
        return True

    def accept(self, in_edges: frozenset[int]) -> bool:
        """Final filter on a complete candidate assignment."""
        return True

    def undo_extra(self, entry: tuple) -> None:
        """Restore adapter state recorded with :meth:`trail_extra`."""

    # ------------------------------------------------------------------
    # state updates

    def trail_extra(self, entry: tuple) -> None:
        self.trail.append((3, entry))

    def set_req(self, x: int, value: int) -> None:
        if self.req[x] != value:
            self.trail.append((4, x, self.req[x]))
            if value == EXACT2 and self.in_cnt[x] == 0:
                self.uncovered += 1
            elif self.req[x] == EXACT2 and self.in_cnt[x] == 0:
                self.uncovered -= 1
            self.req[x] = value

    def _set_partner(self, x: int, val: int) -> None:
        self.trail.append((1, x, self.partner[x]))
        self.partner[x] = val

    def _assign(self, ei: int, val: int) -> bool:
        st = self.state[ei]
        if st:
            return st == val
        u, v = self.edges[ei]
        if val == IN:
            if self.closed:
                return False
            if self.in_cnt[u] >= 2 or self.in_cnt[v] >= 2:
                return False
        self.state[ei] = val
        self.trail.append((0, ei, val))
        self.unk_cnt[u] -= 1
        self.unk_cnt[v] -= 1
        if val == IN:
            for x in (u, v):
                ic = self.in_cnt[x] + 1
                self.in_cnt[x] = ic
                if ic == 1:
                    self.ends.add(x)
                    self._last_end = x
                    if self.req[x] == EXACT2:
                        self.uncovered -= 1
                else:
                    self.ends.discard(x)
            pu = self.partner[u]
            pv = self.partner[v]
            if pu == v:
                self.trail.append((2,))
                self.closed = True
                # The single cycle just closed: it must already be the
                # whole solution, or this branch is dead.
                if self.uncovered or self.ends:
                    return False
            else:
                self._set_partner(pu, pv)
                self._set_partner(pv, pu)
        else:
            self._out_dirty = True
        if not self._node_rules(u) or not self._node_rules(v):
            return False
        return self.on_assigned(ei, val)

    def _node_rules(self, x: int) -> bool:
        ic = self.in_cnt[x]
        uc = self.unk_cnt[x]
        if ic > 2:
            return False
        if ic == 2:
            if uc:
                state = self.state
                for ei in self.incident[x]:
                    if not state[ei]:
                        self.queue.append((ei, OUT))
        elif self.req[x] == EXACT2:
            if ic + uc < 2:
                return False
            if uc and ic + uc == 2:
                state = self.state
                for ei in self.incident[x]:
                    if not state[ei]:
                        self.queue.append((ei, IN))
        else:
            if ic == 1:
                if uc == 0:
                    return False
                if uc == 1:
                    state = self.state
                    for ei in self.incident[x]:
                        if not state[ei]:
                            self.queue.append((ei, IN))
            elif ic == 0 and uc == 1:
                # A lone undecided edge cannot give this node degree 2.
                state = self.state
                for ei in self.incident[x]:
                    if not state[ei]:
                        self.queue.append((ei, OUT))
        return self.node_rules_extra(x)

    def _propagate(self) -> bool:
        queue = self.queue
        while queue:
            self._ticks += 1
            if self.deadline is not None and self._ticks % 4096 == 0:
                if time.monotonic() > self.deadline:
                    raise SearchTimeout("search budget exhausted")
            ei, val = queue.popleft()
            if not self._assign(ei, val):
                queue.clear()
                return False
        return True

    def _rollback(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            entry = trail.pop()
            tag = entry[0]
            if tag == 0:
                _, ei, val = entry
                self.state[ei] = UNKNOWN
                u, v = self.edges[ei]
                self.unk_cnt[u] += 1
                self.unk_cnt[v] += 1
                if val == IN:
                    for x in (u, v):
                        ic = self.in_cnt[x] - 1
                        self.in_cnt[x] = ic
                        if ic == 1:
                            self.ends.add(x)
                        else:
                            self.ends.discard(x)
                            if ic == 0 and self.req[x] == EXACT2:
                                self.uncovered += 1
            elif tag == 1:
                self.partner[entry[1]] = entry[2]
            elif tag == 2:
                self.closed = False
            elif tag == 4:
                old = entry[2]
                if self.req[entry[1]] == EXACT2 and old != EXACT2 and self.in_cnt[entry[1]] == 0:
                    self.uncovered -= 1
                elif old == EXACT2 and self.req[entry[1]] != EXACT2 and self.in_cnt[entry[1]] == 0:
                    self.uncovered += 1
                self.req[entry[1]] = old
            else:
                self.undo_extra(entry[1])

    # ------------------------------------------------------------------
    # search

    def _connected_ok(self) -> bool:
        """Cut analysis of the non-OUT graph.

        A single closed tour crosses every edge cut an even number of
        times and passes through every node at most once, so a branch is
        dead as soon as a bridge or an articulation node separates two
        regions that both still hold must-visit or on-loop nodes.
        """
        req = self.req
        in_cnt = self.in_cnt
        n = self.n_nodes
        required = bytearray(n)
        total_req = 0
        for x in range(n):
            if req[x] == EXACT2 or in_cnt[x]:
                required[x] = 1
                total_req += 1
        if total_req == 0:
            return True
        start = next(iter(self.ends)) if self.ends else next(
            x for x in range(n) if required[x]
        )

        state = self.state
        edges = self.edges
        incident = self.incident
        disc = [0] * n  # 0 = unvisited; discovery times start at 1
        low = [0] * n
        req_sub = [0] * n
        parent_edge = [-1] * n
        timer = 1
        disc[start] = low[start] = timer
        req_sub[start] = required[start]
        seen_req = required[start]
        root_parts = 0
        # Iterative DFS: (node, incident index) with post-processing on pop.
        stack = [(start, 0)]
        while stack:
            x, i = stack.pop()
            inc = incident[x]
            advanced = False
            while i < len(inc):
                ei = inc[i]
                i += 1
                if state[ei] == OUT or ei == parent_edge[x]:
                    continue
                u, v = edges[ei]
                y = v if u == x else u
                if disc[y]:
                    if low[x] > disc[y]:
                        low[x] = disc[y]
                    continue
                timer += 1
                disc[y] = low[y] = timer
                req_sub[y] = required[y]
                seen_req += required[y]
                parent_edge[y] = ei
                stack.append((x, i))
                stack.append((y, 0))
                advanced = True
                break
            if advanced:
                continue
            # x is finished: fold into its parent.
            pe = parent_edge[x]
            if pe < 0:
                continue
            u, v = edges[pe]
            p = v if u == x else u
            if low[x] > disc[p]:
                # Bridge p-x: the subtree under x is reachable only here.
                if 0 < req_sub[x] < total_req:
                    return False
            elif low[x] >= disc[p] and p != start:
                # p is an articulation node isolating x's subtree.
                rest = total_req - req_sub[x] - required[p]
                if req_sub[x] > 0 and rest > 0:
                    return False
            if p == start and req_sub[x] > 0:
                root_parts += 1
            low[p] = min(low[p], low[x])
            req_sub[p] += req_sub[x]
        if seen_req < total_req:
            return False
        if root_parts > 1:
            return False
        # Loop parity: the single cycle alternates bipartition classes, so
        # when the live component offers no optional stepping stones, its
        # must-visit classes have to balance exactly.
        if self.color is not None:
            b = w = 0
            spare = False
            for x in range(n):
                if not disc[x]:
                    continue
                if required[x]:
                    if self.color[x]:
                        b += 1
                    else:
                        w += 1
                elif self.unk_cnt[x]:
                    spare = True
                    break
            if not spare and b != w:
                return False
        return True

    def _sweep_out(self) -> bool:
        state = self.state
        for ei in range(len(state)):
            if not state[ei]:
                self.queue.append((ei, OUT))
        return self._propagate()

    def _candidate(self) -> frozenset[int]:
        state = self.state
        return frozenset(ei for ei in range(len(state)) if state[ei] == IN)

    def solutions(self, seeds: Iterable[tuple[int, int]] = ()) -> Iterator[frozenset[int]]:
        """Enumerate every valid assignment in deterministic order."""
        limit = len(self.edges) * 2 + 10000
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)
        mark = len(self.trail)
        for x in range(self.n_nodes):
            if not self._node_rules(x):
                self._rollback(mark)
                return
        for ei, val in seeds:
            self.queue.append((ei, val))
        if self._propagate():
            if self.closed:
                if self._sweep_out():
                    cand = self._candidate()
                    if self.accept(cand):
                        yield cand
            else:
                yield from self._dfs(0)
        self._rollback(mark)

    def _dfs(self, lo: int) -> Iterator[frozenset[int]]:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout("search budget exhausted")
        state = self.state
        ei = None
        if self.branch_frontier and self.ends:
            # Keep extending the chain worked on last; locality makes
            # conflicts surface close to the decisions that caused them.
            x = self._last_end if self._last_end in self.ends else min(self.ends)
            for e in self.incident[x]:
                if not state[e]:
                    ei = e
                    break
        if ei is None:
            n = len(state)
            while lo < n and state[lo]:
                lo += 1
            if lo == n:
                # All edges decided with no closed cycle: dead end.
                return
            ei = lo
        self._calls += 1
        if (
            self.connectivity_every
            and self._out_dirty
            and self._calls % self.connectivity_every == 0
        ):
            self._out_dirty = False
            if not self._connected_ok():
                return
        for val in (IN, OUT):
            mark = len(self.trail)
            self.queue.append((ei, val))
            ok = self._propagate()
            if ok:
                if self.closed:
                    if self._sweep_out():
                        cand = self._candidate()
                        if self.accept(cand):
                            yield cand
                else:
                    yield from self._dfs(lo)
            self._rollback(mark)

    def first_solution(self, seeds: Iterable[tuple[int, int]] = ()) -> Optional[frozenset[int]]:
        for sol in self.solutions(seeds):
            return sol
        return None
