"""Sparse column reduction over F2.

Columns are sets of row indices. The pivot of a column is its largest row
index, as in the standard persistence algorithm, so a boundary matrix whose
basis is listed in a filtration-compatible order reduces to a persistence
pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import check_deadline

_CHECK_EVERY = 4096


@dataclass
class Reduction:
    columns: list[set[int]]
    pivots: dict[int, int]  # pivot row -> column holding it
    cycles: list[set[int] | None] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def zero_columns(self) -> list[int]:
        return [j for j, col in enumerate(self.columns) if not col]

    def essential(self) -> list[int]:
        """Zero columns that are not a pivot row: their cycles span homology."""
        return [j for j, col in enumerate(self.columns) if not col and j not in self.pivots]

    def reduce(self, vec) -> set[int]:
        """Residue of ``vec`` modulo the column space; empty iff ``vec`` is in it."""
        vec = set(vec)
        cols, pivots = self.columns, self.pivots
        while vec:
            k = pivots.get(max(vec))
            if k is None:
                break
            vec ^= cols[k]
        return vec

    def in_span(self, vec) -> bool:
        return not self.reduce(vec)


def reduce_columns(columns, track: bool = False) -> Reduction:
    """Reduce ``columns`` left to right; with ``track`` also record ``V`` with ``R = D V``.

    With ``track`` the cycle of every column that reduces to zero is kept in
    ``Reduction.cycles`` (``None`` elsewhere).
    """
    reduced: list[set[int]] = []
    pivots: dict[int, int] = {}
    cycles: list[set[int] | None] = []
    vs: list[set[int]] = []
    for j, col in enumerate(columns):
        if j % _CHECK_EVERY == 0:
            check_deadline()
        col = set(col)
        v = {j} if track else None
        while col:
            low = max(col)
            k = pivots.get(low)
            if k is None:
                pivots[low] = j
                break
            col ^= reduced[k]
            if track:
                v ^= vs[k]
        reduced.append(col)
        if track:
            vs.append(v)
            cycles.append(None if col else v)
    if track:
        # only cycles are needed afterwards; drop the rest of V
        del vs
    return Reduction(reduced, pivots, cycles)


def rank(columns) -> int:
    return reduce_columns(columns).rank
