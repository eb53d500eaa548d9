"""MDL local scores and sparse per-variable score tables.

A score table keeps only the candidate parent sets that can be optimal for
some candidate pool: supersets whose score is not strictly better than every
proper subset are dropped, and sets larger than the record-count in-degree
limit are never scored at all. Entries are sorted ascending by score and a
packed bit row per other variable marks which entries contain it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels
from .bitset import bits, full_mask, is_subset, mask_of, popcount
from .dataset import DEFAULT_CELL_LIMIT, Dataset


def mdl_local_score(
    data: Dataset, x: int, pa: int, cell_limit: int = DEFAULT_CELL_LIMIT
) -> float:
    """MDL score of variable x with parent set pa, in bits (lower is better):
    N*H(x|pa) + log2(N)/2 * (arity[x]-1) * prod(parent arities)."""
    if pa >> x & 1:
        raise ValueError(f"X{x} cannot be its own parent")
    pa_list = list(bits(pa))
    rx = data.arity[x]
    npa = 1
    for y in pa_list:
        npa *= data.arity[y]
    if rx * npa > cell_limit:
        raise ValueError(
            f"scoring X{x} with this parent set needs {rx * npa} cells, "
            f"over the limit {cell_limit}")
    cols = np.asarray(pa_list, dtype=np.int64)
    ars = np.asarray([data.arity[y] for y in pa_list], dtype=np.int64)
    codes = _kernels.mixed_radix_codes(data.rows, cols, ars)
    nh = _kernels.cond_entropy_bits(
        np.ascontiguousarray(data.rows[:, x]), codes, rx, npa)
    penalty = math.log2(data.N) / 2.0 * (rx - 1) * npa
    return nh + penalty


def parent_limit(N: int) -> int:
    """In-degree bound floor(log2(2N / log2 N)) implied by the MDL penalty."""
    if N < 2:
        raise ValueError("need at least 2 records")
    return math.floor(math.log2(2.0 * N / math.log2(N)))


@dataclass(eq=False)
class ScoreTable:
    """Sorted unique pruned (score, parent set) list for one variable, with
    per-variable exclusion bit rows.

    rows[y] bit i is set iff variable y is in entry i's parent set, packed
    into uint64 words (row y of the 2-D rows array).
    """

    variable: int
    n: int
    scores: np.ndarray = field(repr=False)       # float64, ascending
    parent_sets: list[int] = field(repr=False)   # bitmasks, parallel to scores
    rows: np.ndarray = field(repr=False)         # uint64 (n, nwords)

    def __len__(self) -> int:
        return len(self.parent_sets)

    @property
    def nwords(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_entries(
        cls, variable: int, n: int, entries: Sequence[tuple[float, int]]
    ) -> "ScoreTable":
        """Build a table from (score, parent mask) pairs kept in the given
        order (callers pass them already sorted)."""
        m = len(entries)
        if m == 0:
            raise ValueError("a score table needs at least the empty parent set")
        scores = np.asarray([s for s, _ in entries], dtype=np.float64)
        parent_sets = [p for _, p in entries]
        nwords = max(1, (m + 63) >> 6)
        rows = np.zeros((n, nwords), dtype=np.uint64)
        for i, p in enumerate(parent_sets):
            for y in bits(p):
                rows[y, i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return cls(variable, n, scores, parent_sets, rows)

    def entry(self, i: int) -> tuple[float, int]:
        return float(self.scores[i]), self.parent_sets[i]


def _entry_sort_key(score: float, pa: int):
    # equal scores: smaller set first, then ascending bitmask
    return (score, popcount(pa), pa)


def prune_scores(raw: dict[int, float]) -> list[tuple[float, int]]:
    """Keep the possibly-optimal parent sets of a raw (mask -> score) map.

    A set survives only when its score is strictly better than every proper
    subset's; on ties the superset is dropped. The sweep runs in ascending
    cardinality, propagating best-so-far down the lattice, so each set is
    compared against the best of all its subsets. Result sorted ascending.
    """
    best: dict[int, float] = {}
    kept: list[tuple[float, int]] = []
    for pa in sorted(raw, key=popcount):
        s = raw[pa]
        best_sub = math.inf
        for y in bits(pa):
            b = best[pa ^ (1 << y)]
            if b < best_sub:
                best_sub = b
        if s < best_sub or pa == 0:
            kept.append((s, pa))
        best[pa] = min(s, best_sub)
    kept.sort(key=lambda e: _entry_sort_key(*e))
    return kept


def build_score_table(
    data: Dataset, x: int, limit: int, cell_limit: int = DEFAULT_CELL_LIMIT
) -> ScoreTable:
    """Score all parent sets of x up to the in-degree limit and keep the
    possibly-optimal ones (see prune_scores)."""
    if limit < 0:
        raise ValueError("negative parent limit")
    others = [y for y in range(data.n) if y != x]
    limit = min(limit, len(others))
    raw: dict[int, float] = {}
    for k in range(limit + 1):
        for combo in combinations(others, k):
            pa = mask_of(combo)
            raw[pa] = mdl_local_score(data, x, pa, cell_limit)
    return ScoreTable.from_entries(x, data.n, prune_scores(raw))


def best_score_naive(table: ScoreTable, candidates: int) -> tuple[float, int]:
    """Front-to-back scan: first entry whose parents fit inside candidates.

    Sortedness makes it the minimum; reference implementation for the
    bit-vector cursors.
    """
    if candidates >> table.variable & 1:
        raise ValueError("candidate set must not contain the variable itself")
    for i, pa in enumerate(table.parent_sets):
        if is_subset(pa, candidates):
            return float(table.scores[i]), pa
    raise AssertionError("empty parent set missing from table")


@dataclass
class ScoreSet:
    """Named score tables for a whole dataset, in variable order."""

    names: list[str]
    tables: list[ScoreTable]

    @property
    def n(self) -> int:
        return len(self.names)


def build_score_tables(
    data: Dataset, max_parents: int | None = None,
    cell_limit: int = DEFAULT_CELL_LIMIT,
) -> ScoreSet:
    """Score tables for every variable; the in-degree limit defaults to
    parent_limit(N) and may only be tightened."""
    limit = parent_limit(data.N)
    if max_parents is not None:
        if max_parents > limit:
            raise ValueError(
                f"max parents {max_parents} above the record-count limit {limit}")
        limit = max_parents
    tables = [build_score_table(data, x, limit, cell_limit) for x in range(data.n)]
    return ScoreSet(list(data.names), tables)


# ------------------------------------------------------------- score file IO
#
# Line 1:        n <n>
# Per variable:  var <name> <m>
#                <score> <k> <parent name>*k        (m lines, sorted order)
# Scores are written with 17 significant digits so reads are bit-identical.


def format_score_file(scores: ScoreSet) -> str:
    for name in scores.names:
        if not name or any(c.isspace() for c in name):
            raise ValueError(f"variable name {name!r} not representable")
    chunks = [f"n {scores.n}\n"]
    for name, table in zip(scores.names, scores.tables):
        chunks.append(f"var {name} {len(table)}\n")
        for i, pa in enumerate(table.parent_sets):
            parents = " ".join(scores.names[y] for y in bits(pa))
            k = popcount(pa)
            chunks.append(f"{table.scores[i]:.17g} {k}" +
                          (f" {parents}\n" if k else "\n"))
    return "".join(chunks)


def write_score_file(path, scores: ScoreSet) -> None:
    with open(path, "w") as f:
        f.write(format_score_file(scores))


def read_score_file(path) -> ScoreSet:
    """Parse a score file back into tables (syntax only; semantic invariants
    are the verifier's job)."""
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise ValueError(f"{path}: not a score file (missing 'n <count>' header)")
    n = int(lines[0].split()[1])
    pos = 1
    names: list[str] = []
    blocks: list[list[tuple[float, int]]] = []
    # first pass only records names so parent references can point forward
    probe = pos
    for _ in range(n):
        head = lines[probe].split()
        if head[0] != "var":
            raise ValueError(f"{path}: expected 'var' block, got {lines[probe]!r}")
        names.append(head[1])
        probe += 1 + int(head[2])
    index = {nm: i for i, nm in enumerate(names)}
    for _ in range(n):
        head = lines[pos].split()
        m = int(head[2])
        pos += 1
        entries = []
        for _ in range(m):
            toks = lines[pos].split()
            pos += 1
            score = float(toks[0])
            k = int(toks[1])
            if len(toks) != 2 + k:
                raise ValueError(f"{path}: bad entry line {lines[pos - 1]!r}")
            pa = mask_of(index[t] for t in toks[2:])
            entries.append((score, pa))
        blocks.append(entries)
    tables = [ScoreTable.from_entries(x, n, blocks[x]) for x in range(n)]
    return ScoreSet(names, tables)


def sparseness_ratio(table: ScoreTable, limit: int) -> tuple[int, int]:
    """(kept entries, all in-limit subsets) for one variable."""
    total = sum(math.comb(table.n - 1, k) for k in range(min(limit, table.n - 1) + 1))
    return len(table), total


def simple_heads(tables: Sequence[ScoreTable]) -> np.ndarray:
    """First-entry score per variable: BestScore(X, V \\ {X})."""
    return np.asarray([t.scores[0] for t in tables], dtype=np.float64)


def table_full_mask(tables: Sequence[ScoreTable]) -> int:
    return full_mask(tables[0].n)
