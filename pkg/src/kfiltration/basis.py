"""epsilon read from a simplified basis.

Filtered basis changes ``x_n -> x_n + U^r x_l`` (with ``U^r x_l`` at a
filtration level no higher than ``x_n``) are applied greedily to isolate
arrows into pairs, shortest arrow first. Passes over vertical and horizontal
arrows alternate. After each pass the basis is searched for an element ``u0``
that

* sits at the Alexander and Maslov grading of the distinguished element of a
  vertically simplified basis,
* has no vertical arrows in or out, and
* meets at most one horizontal arrow.

epsilon is then 1 for an incoming horizontal arrow, -1 for an outgoing one
and 0 for none. Allowing ``u0`` to be the target of a vertical arrow is not
enough: such an element can carry the wrong horizontal arrow. If no pass
yields such an element, or two elements disagree, the computation fails
rather than guess.

The differential is a dense F2 matrix stored as Python-int bitsets, one per
column. U-powers are implied by the Maslov gradings, which basis changes of
this kind preserve.
"""

from __future__ import annotations

from .errors import NotKnotLike, SimplificationFailed
from .filtcx import FilteredComplex


class _Basis:
    def __init__(self, c: FilteredComplex):
        self.A = c.alexander.tolist()
        self.M = c.maslov.tolist()
        self.n = len(self.A)
        cols = [0] * self.n
        for s, t in c.arrows.tolist():
            cols[s] |= 1 << t
        self.cols = cols

    def power(self, x: int, y: int) -> int:
        return (self.M[y] - self.M[x] + 1) // 2

    def is_vertical(self, x: int, y: int) -> bool:
        return self.power(x, y) == 0

    def is_horizontal(self, x: int, y: int) -> bool:
        k = self.power(x, y)
        return k > 0 and self.A[y] - k == self.A[x]

    def targets(self, x: int) -> list[int]:
        col, out = self.cols[x], []
        while col:
            low = col & -col
            out.append(low.bit_length() - 1)
            col ^= low
        return out

    def sources(self, y: int) -> list[int]:
        bit = 1 << y
        return [x for x in range(self.n) if self.cols[x] & bit]

    def add(self, n: int, l: int) -> None:
        """Replace ``x_n`` by ``x_n + U^r x_l``."""
        twice = self.M[l] - self.M[n]
        r = twice // 2
        if twice % 2 or r < 0 or self.A[l] - r > self.A[n]:
            raise AssertionError(f"basis change x{n} += x{l} is not filtered")
        cols = self.cols
        cols[n] ^= cols[l]
        bn, bl = 1 << n, 1 << l
        for j in range(self.n):
            if cols[j] & bn:
                cols[j] ^= bl

    def arrows(self, kind, among=None):
        test = self.is_vertical if kind == "v" else self.is_horizontal
        out = []
        for x in range(self.n) if among is None else among:
            for y in self.targets(x):
                if test(x, y):
                    out.append((x, y))
        return out


def _length(b: _Basis, kind: str, x: int, y: int) -> int:
    return b.A[x] - b.A[y] if kind == "v" else b.power(x, y)


def _isolate(b: _Basis, kind: str, rank=None) -> set[int]:
    """Pair off arrows of one kind, shortest first; returns the paired elements.

    Ties in length are broken by ``rank`` (element order by default).
    """
    test = b.is_vertical if kind == "v" else b.is_horizontal
    rank = rank or range(b.n)
    paired: set[int] = set()
    while True:
        free = [x for x in range(b.n) if x not in paired]
        candidates = [(x, y) for x, y in b.arrows(kind, free) if y not in paired]
        if not candidates:
            return paired
        x, y = min(candidates, key=lambda e: (_length(b, kind, *e), rank[e[0]], rank[e[1]]))
        for y2 in b.targets(x):
            if y2 != y and test(x, y2):
                b.add(y, y2)
        for z in b.sources(y):
            if z != x and test(z, y):
                b.add(z, x)
        paired.update((x, y))


def _simplified(b: _Basis, kind: str) -> bool:
    """Every element meets at most one arrow of this kind."""
    degree = [0] * b.n
    for x, y in b.arrows(kind):
        degree[x] += 1
        degree[y] += 1
    return max(degree, default=0) <= 1


def distinguished_level(c: FilteredComplex) -> tuple[int, int]:
    """Alexander and Maslov grading of the distinguished element of a vertically simplified basis."""
    b = _Basis(c)
    paired = _isolate(b, "v")
    if not _simplified(b, "v"):
        raise SimplificationFailed("vertical isolation did not simplify the basis")
    free = [x for x in range(b.n) if x not in paired]
    if len(free) != 1:
        raise NotKnotLike(f"{len(free)} elements survive vertical simplification")
    return b.A[free[0]], b.M[free[0]]


def _readings(b: _Basis, level: int, grading: int) -> set[int]:
    out = set()
    for x in range(b.n):
        if b.A[x] != level or b.M[x] != grading:
            continue
        if any(b.is_vertical(x, y) for y in b.targets(x)):
            continue
        sources = b.sources(x)
        if any(b.is_vertical(z, x) for z in sources):
            continue
        incoming = [z for z in sources if b.is_horizontal(z, x)]
        outgoing = [y for y in b.targets(x) if b.is_horizontal(x, y)]
        if len(incoming) + len(outgoing) > 1:
            continue
        out.add(1 if incoming else -1 if outgoing else 0)
    return out


def epsilon_by_basis(c: FilteredComplex, rounds: int = 3) -> int:
    level, grading = distinguished_level(c)
    for order in (("v", "h"), ("h", "v")):
        b = _Basis(c)
        for _ in range(rounds):
            for kind in order:
                _isolate(b, kind)
                found = _readings(b, level, grading)
                if len(found) > 1:
                    raise SimplificationFailed(f"admissible elements disagree: {sorted(found)}")
                if found:
                    return found.pop()
    raise SimplificationFailed("no pass produced an element with no vertical arrows and one horizontal arrow")
