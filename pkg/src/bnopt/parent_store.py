"""Bit-vector cursors over score tables.

A cursor holds a packed validity row over a table's entries; excluding a
candidate parent clears the bits of every entry containing it, and the
lowest set bit is always the best score over the remaining pool. Cursors
are persistent values: excluding returns a new cursor and shares the
underlying table, so sibling search branches can keep a common ancestor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bitset import bits
from .scoring import ScoreTable


@dataclass(frozen=True, eq=False)
class ExclusionCursor:
    table: ScoreTable
    valid: np.ndarray = field(repr=False)  # packed uint64, bit i = entry i usable
    excluded: int = 0                      # variables ruled out so far

    def __len__(self) -> int:
        return len(self.table)


def cursor_new(table: ScoreTable) -> ExclusionCursor:
    """Fresh cursor with every entry admissible."""
    return ExclusionCursor(table, _kernels.ones_row(len(table)), 0)


def cursor_exclude(c: ExclusionCursor, y: int) -> ExclusionCursor:
    """Rule out y as a candidate parent; returns a new cursor."""
    if y == c.table.variable:
        raise ValueError("cannot exclude the table's own variable")
    if c.excluded >> y & 1:
        raise ValueError(f"variable {y} already excluded")
    if not 0 <= y < c.table.n:
        raise ValueError(f"variable index {y} out of range")
    valid = _kernels.andnot(c.valid, c.table.rows[y])
    return ExclusionCursor(c.table, valid, c.excluded | 1 << y)


def cursor_best(c: ExclusionCursor) -> tuple[float, int]:
    """Entry at the lowest set bit: BestScore over all still-admissible
    candidate pools (the empty parent set is never excluded)."""
    i = _kernels.first_set_bit(c.valid)
    assert i >= 0, "empty-set entry can never be invalidated"
    return c.table.entry(i)


def best_in(table: ScoreTable, candidates: int) -> tuple[float, int]:
    """One-shot BestScore(X, candidates): same bit-row machinery as a cursor
    chain excluding every non-candidate, fused into a single scan.

    The table's own variable never appears in any entry, so its (all-zero)
    row may be OR-ed in harmlessly; callers only guarantee candidates does
    not contain the variable.
    """
    if candidates >> table.variable & 1:
        raise ValueError("candidate set must not contain the variable itself")
    excl = _excluded_indices(table, candidates)
    i = _kernels.or_rows_firstbit(table.rows, excl, len(table))
    assert i >= 0
    return table.entry(i)


def _excluded_indices(table: ScoreTable, candidates: int) -> np.ndarray:
    out = ((1 << table.n) - 1) & ~candidates & ~(1 << table.variable)
    return np.fromiter(bits(out), dtype=np.int64, count=out.bit_count())
