"""Shortest-path solvers over the order graph.

Nodes are bitmasks of already-ordered variables; the arc U -> U|{x} costs
BestScore(x, U) from the sparse parent store. A* runs best-first with
reopening (needed when the greedy dynamic-PDB heuristic is inconsistent);
BFBnB sweeps layer by layer pruning against an incumbent from ordering
hill climbing. Both are exact; dp_oracle and exact_distances_to_goal are
the brute-force references.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitset import bits, full_mask, popcount
from .parent_store import best_in, cursor_best, cursor_exclude, cursor_new
from .scoring import ScoreTable

DP_MAX_VARS = 20

# crude per-node bookkeeping estimate (heap tuple + dict slots) used for the
# memory budget; replaces the external-memory machinery with a clean failure
NODE_BYTES = 200

DEFAULT_MEM_BUDGET = 4 << 30

# Paths that are mathematically tied can differ by an ulp because their arc
# costs are summed in different orders; treating those as improvements would
# reopen closed nodes under perfectly consistent heuristics. Anything inside
# this relative band counts as a tie.
G_EPS = 1e-12


def _improves(gc: float, old: float) -> bool:
    return gc < old - G_EPS * max(1.0, abs(old))


@dataclass
class SearchStats:
    """Counters for one solve.

    nodes_generated counts successful open-list insertions for A* and
    distinct materialized nodes per layer for BFBnB; expanded never exceeds
    it. Durations are wall-clock seconds, filled by the CLI layer.
    """

    nodes_expanded: int = 0
    nodes_generated: int = 0
    reopened: int = 0
    peak_open_size: int = 0
    pdb_build_time: float = 0.0
    search_time: float = 0.0


@dataclass
class LearnedNetwork:
    """Per-variable chosen parent sets (bitmasks) and the summed score."""

    parents: list[int]
    total_score: float

    @property
    def n(self) -> int:
        return len(self.parents)

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs, child-major ascending."""
        return [(y, x) for x in range(self.n) for y in bits(self.parents[x])]

    def is_acyclic(self) -> bool:
        indeg = [popcount(p) for p in self.parents]
        children: list[list[int]] = [[] for _ in range(self.n)]
        for x, p in enumerate(self.parents):
            for y in bits(p):
                children[y].append(x)
        queue = [x for x in range(self.n) if indeg[x] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for c in children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        return seen == self.n


class MemoryBudgetError(RuntimeError):
    """Search state outgrew the configured budget; carries stats so far."""

    def __init__(self, msg: str, stats: SearchStats):
        super().__init__(msg)
        self.stats = stats


def reconstruct(
    tables: Sequence[ScoreTable], order: Sequence[int],
    expected_g: float | None = None,
) -> LearnedNetwork:
    """Network from a variable addition order: each variable picks its best
    parent set among the variables that precede it."""
    n = tables[0].n
    if sorted(order) != list(range(n)):
        raise ValueError("addition order must list every variable exactly once")
    parents = [0] * n
    path_total = 0.0
    prefix = 0
    for x in order:
        score, pa = best_in(tables[x], prefix)
        parents[x] = pa
        path_total += score
        prefix |= 1 << x
    if expected_g is not None and abs(path_total - expected_g) > 1e-9:
        raise AssertionError(
            f"reconstructed path score {path_total} != search g {expected_g}")
    return LearnedNetwork(parents, _network_score(tables, parents))


def _network_score(tables, parents) -> float:
    # canonical summation order: ascending variable index
    total = 0.0
    for x, pa in enumerate(parents):
        i = tables[x].parent_sets.index(pa)
        total += float(tables[x].scores[i])
    return total


def _order_from_preds(pred_of, full: int) -> list[int]:
    order = []
    U = full
    while U:
        x = pred_of(U)
        if x is None:
            raise RuntimeError("broken predecessor chain")
        order.append(x)
        U ^= 1 << x
    order.reverse()
    return order


def astar(
    tables: Sequence[ScoreTable], heuristic,
    mem_budget: int | None = DEFAULT_MEM_BUDGET,
    allow_reopen: bool | None = None,
) -> tuple[LearnedNetwork, SearchStats]:
    """Best-first search from the empty set to the full set.

    Ordered by f = g + h, ties broken toward larger g then ascending mask.
    Closed nodes are reopened on a strictly better g unless reopening is
    disabled (safe only for consistent heuristics; defaults from the
    provider's declaration).
    """
    n = tables[0].n
    full = full_mask(n)
    if allow_reopen is None:
        allow_reopen = not heuristic.consistent
    stats = SearchStats(nodes_generated=1)
    g_best = {0: 0.0}
    pred: dict[int, int] = {}
    closed: set[int] = set()
    open_heap = [(heuristic.value(0), 0.0, 0)]
    while open_heap:
        f, neg_g, U = heapq.heappop(open_heap)
        g = -neg_g
        if g > g_best[U] or U in closed:
            continue  # stale entry
        if U == full:
            net = reconstruct(tables, _order_from_preds(pred.get, full), g)
            return net, stats
        closed.add(U)
        stats.nodes_expanded += 1
        for x in bits(full & ~U):
            arc, _ = best_in(tables[x], U)
            child = U | 1 << x
            gc = g + arc
            old = g_best.get(child)
            if old is not None and not _improves(gc, old):
                continue
            if child in closed:
                if not allow_reopen:
                    continue
                closed.discard(child)
                stats.reopened += 1
            g_best[child] = gc
            pred[child] = x
            heapq.heappush(open_heap, (gc + heuristic.value(child), -gc, child))
            stats.nodes_generated += 1
        if len(open_heap) > stats.peak_open_size:
            stats.peak_open_size = len(open_heap)
        if mem_budget is not None and \
                (len(open_heap) + len(g_best)) * NODE_BYTES > mem_budget:
            raise MemoryBudgetError(
                f"open/closed structures passed the {mem_budget}-byte budget",
                stats)
    raise RuntimeError("order graph exhausted without reaching the goal")


def bfbnb(
    tables: Sequence[ScoreTable], heuristic,
    incumbent: LearnedNetwork | None = None,
    mem_budget: int | None = DEFAULT_MEM_BUDGET,
) -> tuple[LearnedNetwork, SearchStats]:
    """Layered breadth-first sweep with bound pruning.

    A generated node is dropped when g + h >= the incumbent score; the
    incumbent (usually from initial_upper_bound) is returned unless the goal
    is reached strictly below it. Pass incumbent=None to disable the bound
    (exhaustive sweep, mainly for testing).
    """
    n = tables[0].n
    full = full_mask(n)
    bound = incumbent.total_score if incumbent is not None else math.inf
    stats = SearchStats()
    layer: dict[int, tuple[float, int]] = {}
    if 0.0 + heuristic.value(0) < bound:
        layer[0] = (0.0, -1)
        stats.nodes_generated = 1
    pred_layers: list[dict[int, int]] = [{0: -1}]
    stored = 1
    for _ in range(n):
        nxt: dict[int, tuple[float, int]] = {}
        for U in sorted(layer):
            g, _ = layer[U]
            stats.nodes_expanded += 1
            for x in bits(full & ~U):
                arc, _ = best_in(tables[x], U)
                child = U | 1 << x
                gc = g + arc
                cur = nxt.get(child)
                if cur is not None:
                    if _improves(gc, cur[0]):
                        nxt[child] = (gc, x)
                elif gc + heuristic.value(child) < bound:
                    nxt[child] = (gc, x)
                    stats.nodes_generated += 1
        pred_layers.append({m: px for m, (_, px) in nxt.items()})
        layer = nxt
        stored += len(nxt)
        if len(nxt) > stats.peak_open_size:
            stats.peak_open_size = len(nxt)
        if mem_budget is not None and stored * NODE_BYTES > mem_budget:
            raise MemoryBudgetError(
                f"layer storage passed the {mem_budget}-byte budget", stats)
    if full in layer and (incumbent is None or layer[full][0] < bound):
        g = layer[full][0]

        def pred_of(mask, _layers=pred_layers):
            return _layers[popcount(mask)].get(mask)

        return reconstruct(tables, _order_from_preds(pred_of, full), g), stats
    if incumbent is None:
        raise RuntimeError("goal unreachable with the bound disabled")
    return incumbent, stats


def _ordering_scores(tables, perm) -> list[float]:
    """Per-position best scores for an ordering, via cursor chains: position
    i excludes everything after it."""
    out = []
    for i, x in enumerate(perm):
        c = cursor_new(tables[x])
        for y in perm[i + 1:]:
            c = cursor_exclude(c, y)
        out.append(cursor_best(c)[0])
    return out


def initial_upper_bound(
    tables: Sequence[ScoreTable], seed: int, restarts: int = 8,
) -> LearnedNetwork:
    """Ordering-based hill climbing: first-improvement sweeps over adjacent
    transpositions, restarting from fresh seeded shuffles."""
    if restarts < 1:
        raise ValueError("need at least one restart")
    n = tables[0].n
    rng = random.Random(seed)
    best_perm = None
    best_total = math.inf
    for _ in range(restarts):
        perm = list(range(n))
        rng.shuffle(perm)
        scores = _ordering_scores(tables, perm)
        total = sum(scores)
        improved = True
        while improved:
            improved = False
            prefix = 0
            for i in range(n - 1):
                a, b = perm[i], perm[i + 1]
                nb = best_in(tables[b], prefix)[0]
                na = best_in(tables[a], prefix | 1 << b)[0]
                if nb + na < scores[i] + scores[i + 1]:
                    perm[i], perm[i + 1] = b, a
                    scores[i], scores[i + 1] = nb, na
                    total = sum(scores)
                    improved = True
                    break
                prefix |= 1 << a
        if total < best_total:
            best_total = total
            best_perm = list(perm)
    return reconstruct(tables, best_perm)


def dp_oracle(tables: Sequence[ScoreTable]) -> tuple[LearnedNetwork, float]:
    """Forward dynamic programming over all 2^n nodes; exact optimum."""
    n = tables[0].n
    if n > DP_MAX_VARS:
        raise ValueError(f"dp oracle limited to {DP_MAX_VARS} variables")
    size = 1 << n
    dist = np.full(size, np.inf)
    dist[0] = 0.0
    predv = np.full(size, -1, dtype=np.int8)
    for U in range(size):
        d = dist[U]
        for x in bits((size - 1) & ~U):
            nd = d + best_in(tables[x], U)[0]
            child = U | 1 << x
            if nd < dist[child]:
                dist[child] = nd
                predv[child] = x
    opt = float(dist[size - 1])
    net = reconstruct(
        tables, _order_from_preds(lambda m: int(predv[m]), size - 1), opt)
    return net, opt


def exact_distances_to_goal(tables: Sequence[ScoreTable]) -> np.ndarray:
    """Backward DP; entry [U] is the shortest distance from node U to the
    goal (indexed by bitmask)."""
    n = tables[0].n
    if n > DP_MAX_VARS:
        raise ValueError(f"exact distances limited to {DP_MAX_VARS} variables")
    size = 1 << n
    dist = np.full(size, np.inf)
    dist[size - 1] = 0.0
    for U in range(size - 2, -1, -1):
        best = math.inf
        for x in bits((size - 1) & ~U):
            d = best_in(tables[x], U)[0] + dist[U | 1 << x]
            if d < best:
                best = d
        dist[U] = best
    return dist
