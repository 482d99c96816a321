"""Z+Z filtered chain complexes over F2[U, U^-1].

A complex is a list of generators with Alexander and Maslov gradings plus a
set of arrows ``x -> y``, meaning ``U^k y`` appears in the boundary of ``x``.
The U-power of an arrow is implied by the Maslov gradings,
``k = (M(y) - M(x) + 1) / 2``, so tensor products and duals are pure index
arithmetic. ``U^m x`` sits at lattice position ``(-m, A(x) - m)``.

Finite windows of the lattice are cut out by ``restrict`` using a closed
catalog of regions; homology and induced maps are then ordinary F2 linear
algebra (see ``f2``).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import f2
from .errors import IncompatibleRegions, InvariantViolation, check_size

_INT = np.int64


class FilteredComplex:
    """Finitely generated filtered complex; immutable once built."""

    def __init__(self, alexander, maslov, arrows, names=None, validate: bool = True):
        self.alexander = np.asarray(alexander, dtype=_INT).reshape(-1)
        self.maslov = np.asarray(maslov, dtype=_INT).reshape(-1)
        arr = np.asarray(arrows, dtype=_INT).reshape(-1, 2)
        if len(arr):
            arr = np.unique(arr, axis=0)
        self.arrows = arr
        if len(self.alexander) != len(self.maslov):
            raise ValueError("alexander and maslov gradings differ in length")
        if len(self.alexander) == 0:
            raise ValueError("a complex needs at least one generator")
        self._names = names
        self._cache: dict = {}
        for a in (self.alexander, self.maslov, self.arrows):
            a.setflags(write=False)
        if validate:
            self.validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def unknot(cls) -> "FilteredComplex":
        return cls([0], [0], np.empty((0, 2)), names=["u"])

    def __len__(self):
        return len(self.alexander)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def names(self) -> list[str]:
        if callable(self._names):
            self._names = self._names()
        if self._names is None:
            self._names = [f"g{i}" for i in range(len(self))]
        return list(self._names)

    # -- arrow geometry -------------------------------------------------------

    @cached_property
    def powers(self) -> np.ndarray:
        """U-power of every arrow."""
        if not len(self.arrows):
            return np.empty(0, dtype=_INT)
        s, t = self.arrows[:, 0], self.arrows[:, 1]
        twice = self.maslov[t] - self.maslov[s] + 1
        if np.any(twice % 2):
            raise InvariantViolation("an arrow does not drop the Maslov grading by an odd amount")
        return twice // 2

    def displacements(self) -> tuple[np.ndarray, np.ndarray]:
        """Horizontal and vertical length of every arrow (both >= 0)."""
        s, t = self.arrows[:, 0], self.arrows[:, 1]
        k = self.powers
        return k, self.alexander[s] - (self.alexander[t] - k)

    def arrow_kinds(self) -> list[str]:
        h, v = self.displacements()
        return ["vertical" if a == 0 else "horizontal" if b == 0 else "diagonal" for a, b in zip(h, v)]

    def boundary_matrix(self) -> sp.csr_matrix:
        """Incidence matrix ``D[t, s] = 1`` for each arrow ``s -> t`` (integer entries)."""
        n = len(self)
        s, t = self.arrows[:, 0], self.arrows[:, 1]
        return sp.csr_matrix((np.ones(len(s), dtype=_INT), (t, s)), shape=(n, n))

    def validate(self) -> None:
        """Check d^2 = 0, Maslov drop 1, and strict filtration decrease."""
        if not len(self.arrows):
            return
        n = len(self)
        if self.arrows.min() < 0 or self.arrows.max() >= n:
            raise InvariantViolation("arrow endpoint out of range")
        h, v = self.displacements()  # also checks Maslov parity
        if np.any(h < 0) or np.any(v < 0):
            raise InvariantViolation("an arrow increases the filtration")
        if np.any((h == 0) & (v == 0)):
            raise InvariantViolation("an arrow preserves the filtration level")
        d = self.boundary_matrix()
        sq = (d @ d).tocoo()
        if np.any(sq.data % 2):
            raise InvariantViolation("d^2 != 0 over F2")

    # -- comparison / serialization -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return (
            np.array_equal(self.alexander, other.alexander)
            and np.array_equal(self.maslov, other.maslov)
            and np.array_equal(self.arrows, other.arrows)
        )

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "generators": [
                {"name": nm, "alexander": int(a), "maslov": int(m)}
                for nm, a, m in zip(self.names, self.alexander, self.maslov)
            ],
            "arrows": [[int(s), int(t)] for s, t in self.arrows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        gens = data["generators"]
        return cls(
            [g["alexander"] for g in gens],
            [g["maslov"] for g in gens],
            np.array(data["arrows"], dtype=_INT).reshape(-1, 2),
            names=[g["name"] for g in gens],
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        for a in (self.alexander, self.maslov, self.arrows):
            h.update(np.ascontiguousarray(a).tobytes())
            h.update(b"|")
        return h.hexdigest()[:16]

    def genus_bound(self) -> int:
        return int(np.abs(self.alexander).max())

    def __repr__(self):
        return f"<FilteredComplex {len(self)} generators, {self.n_arrows} arrows>"


def _dual_name(name: str) -> str:
    return ",".join(p[:-1] if p.endswith("*") else p + "*" for p in name.split(","))


def tensor(a: FilteredComplex, b: FilteredComplex, cap: int | None = None) -> FilteredComplex:
    """Tensor product with the Leibniz differential; generator ``(i, j)`` has index ``i*len(b) + j``."""
    na, nb = len(a), len(b)
    check_size(na * nb, cap)
    alex = (a.alexander[:, None] + b.alexander[None, :]).reshape(-1)
    mas = (a.maslov[:, None] + b.maslov[None, :]).reshape(-1)
    parts = []
    if a.n_arrows:
        j = np.arange(nb, dtype=_INT)
        s = a.arrows[:, 0:1] * nb + j
        t = a.arrows[:, 1:2] * nb + j
        parts.append(np.stack([s.reshape(-1), t.reshape(-1)], axis=1))
    if b.n_arrows:
        i = np.arange(na, dtype=_INT)[:, None] * nb
        s = i + b.arrows[None, :, 0]
        t = i + b.arrows[None, :, 1]
        parts.append(np.stack([s.reshape(-1), t.reshape(-1)], axis=1))
    arrows = np.concatenate(parts) if parts else np.empty((0, 2), dtype=_INT)

    def names():
        bn = b.names
        return [f"{x},{y}" for x in a.names for y in bn]

    return FilteredComplex(alex, mas, arrows, names=names)


def dual(c: FilteredComplex) -> FilteredComplex:
    """Dual complex: gradings negated, arrows reversed."""
    return FilteredComplex(
        -c.alexander, -c.maslov, c.arrows[:, ::-1], names=lambda: [_dual_name(n) for n in c.names]
    )


def tensor_all(complexes, cap: int | None = None) -> FilteredComplex:
    complexes = list(complexes)
    if not complexes:
        return FilteredComplex.unknot()
    total = 1
    for c in complexes:
        total *= len(c)
    check_size(total, cap)
    out = complexes[0]
    for c in complexes[1:]:
        out = tensor(out, c)
    return out


# -- regions -------------------------------------------------------------------

COLUMN = "i=0"
COLUMN_BELOW = "i=0,j<=s"
COLUMN_ABOVE = "i=0,j>=s"
HOOK_MAX = "max(i,j-s)=0"
HOOK_MIN = "min(i,j-s)=0"
_KINDS = (COLUMN, COLUMN_BELOW, COLUMN_ABOVE, HOOK_MAX, HOOK_MIN)


@dataclass(frozen=True)
class Region:
    kind: str
    s: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"region {self.kind!r} is not in the catalog {_KINDS}")
        if (self.kind == COLUMN) != (self.s is None):
            raise ValueError(f"region {self.kind!r} {'takes no' if self.kind == COLUMN else 'needs a'} parameter s")

    @classmethod
    def column(cls):
        return cls(COLUMN)

    @classmethod
    def column_below(cls, s: int):
        return cls(COLUMN_BELOW, int(s))

    @classmethod
    def column_above(cls, s: int):
        return cls(COLUMN_ABOVE, int(s))

    @classmethod
    def a_s(cls, s: int):
        return cls(HOOK_MAX, int(s))

    @classmethod
    def a_prime_s(cls, s: int):
        return cls(HOOK_MIN, int(s))

    def contains(self, i: int, j: int) -> bool:
        s = self.s
        if self.kind == COLUMN:
            return i == 0
        if self.kind == COLUMN_BELOW:
            return i == 0 and j <= s
        if self.kind == COLUMN_ABOVE:
            return i == 0 and j >= s
        if self.kind == HOOK_MAX:
            return max(i, j - s) == 0
        return min(i, j - s) == 0

    def __str__(self):
        if self.s is None:
            return self.kind
        return self.kind.replace("j-s", f"j-({self.s})").replace("j<=s", f"j<={self.s}").replace("j>=s", f"j>={self.s}")


class SubquotientComplex:
    """Finite F2 complex on the U-translates of generators lying in a region.

    The basis is sorted by lattice position ``(j, i)``, which is compatible
    with the filtration, so every boundary column only contains earlier rows.
    """

    def __init__(self, parent: FilteredComplex, gen: np.ndarray, upow: np.ndarray, columns: list[list[int]]):
        self.parent = parent
        self.gen = gen
        self.upow = upow
        self.columns = columns

    def __len__(self):
        return len(self.gen)

    @property
    def positions(self) -> np.ndarray:
        return np.stack([-self.upow, self.parent.alexander[self.gen] - self.upow], axis=1)

    @property
    def maslov(self) -> np.ndarray:
        return self.parent.maslov[self.gen] - 2 * self.upow

    @property
    def basis(self) -> list[tuple[str, int, tuple[int, int], int]]:
        names = self.parent.names
        return [
            (names[g], int(m), (int(-m), int(self.parent.alexander[g] - m)), int(mas))
            for g, m, mas in zip(self.gen, self.upow, self.maslov)
        ]

    def keys(self) -> dict[tuple[int, int], int]:
        return {(int(g), int(m)): idx for idx, (g, m) in enumerate(zip(self.gen, self.upow))}

    def boundary_rank(self) -> int:
        return self.reduction().rank

    def reduction(self, track: bool = False) -> f2.Reduction:
        return f2.reduce_columns(self.columns, track=track)

    def check(self) -> None:
        for j, col in enumerate(self.columns):
            acc: set[int] = set()
            for t in col:
                acc ^= set(self.columns[t])
            if acc:
                raise InvariantViolation(f"boundary^2 != 0 at basis element {j}")


def _arm_offset(c: FilteredComplex, r: Region) -> np.ndarray:
    return c.alexander - r.s


def restrict(c: FilteredComplex, r: Region) -> SubquotientComplex:
    """Sub/quotient complex ``C{r}`` with the induced differential."""
    n = len(c)
    A = c.alexander
    idx0 = np.full(n, -1, dtype=_INT)
    arm = np.full(n, -1, dtype=_INT)
    if r.kind == COLUMN:
        base = np.ones(n, dtype=bool)
    elif r.kind == COLUMN_BELOW or r.kind == HOOK_MAX:
        base = A <= r.s
    else:
        base = A >= r.s
    if r.kind == HOOK_MAX:
        has_arm = A > r.s  # U^m x with m = A - s > 0 lies on j = s, i < 0
    elif r.kind == HOOK_MIN:
        has_arm = A < r.s  # m = A - s < 0 lies on j = s, i > 0
    else:
        has_arm = np.zeros(n, dtype=bool)
    if r.s is not None:
        bound = np.abs(A) + abs(r.s) + 1
        assert np.all(np.abs(A - r.s)[has_arm] <= bound[has_arm])

    gens = np.concatenate([np.nonzero(base)[0], np.nonzero(has_arm)[0]])
    upow = np.concatenate([np.zeros(int(base.sum()), dtype=_INT), (A - (r.s or 0))[has_arm]])
    j = A[gens] - upow
    order = np.lexsort((-upow, j))  # by j, then by i = -upow
    gens, upow = gens[order], upow[order]
    pos = np.arange(len(gens), dtype=_INT)
    is_base = upow == 0
    idx0[gens[is_base]] = pos[is_base]
    arm[gens[~is_base]] = pos[~is_base]

    columns: list[list[int]] = [[] for _ in range(len(gens))]
    if c.n_arrows:
        s_, t_ = c.arrows[:, 0], c.arrows[:, 1]
        k = c.powers
        src_parts, tgt_parts = [], []
        # sources at U-power 0
        src = idx0[s_]
        ok = src >= 0
        tgt = np.where(k == 0, idx0[t_], -1)
        if r.s is not None and r.kind in (HOOK_MAX, HOOK_MIN):
            tgt = np.where((k != 0) & (k == A[t_] - r.s), arm[t_], tgt)
        ok &= tgt >= 0
        src_parts.append(src[ok])
        tgt_parts.append(tgt[ok])
        if r.kind in (HOOK_MAX, HOOK_MIN):
            m = A[s_] - r.s
            src = arm[s_]
            m2 = m + k
            tgt = np.where(m2 == 0, idx0[t_], np.where(m2 == A[t_] - r.s, arm[t_], -1))
            ok = (src >= 0) & (tgt >= 0)
            src_parts.append(src[ok])
            tgt_parts.append(tgt[ok])
        src_all = np.concatenate(src_parts)
        tgt_all = np.concatenate(tgt_parts)
        order = np.argsort(src_all, kind="stable")
        src_all, tgt_all = src_all[order], tgt_all[order]
        bounds = np.searchsorted(src_all, pos, side="left")
        ends = np.searchsorted(src_all, pos, side="right")
        tl = tgt_all.tolist()
        for idx, (lo, hi) in enumerate(zip(bounds.tolist(), ends.tolist())):
            if hi > lo:
                columns[idx] = tl[lo:hi]
    return SubquotientComplex(c, gens, upow, columns)


def homology(sq: SubquotientComplex) -> tuple[int, list[set[int]]]:
    """Dimension of ``H(sq)`` over F2 and cycle representatives of a basis."""
    red = sq.reduction(track=True)
    reps = [red.cycles[j] for j in red.essential()]
    dim = len(sq) - 2 * red.rank
    assert dim == len(reps)
    return dim, reps


INCLUSION = "inclusion"
QUOTIENT_COMPOSITE = "quotient-composite"


def _check_pairing(src: Region, dst: Region, kind: str) -> None:
    if kind == INCLUSION and src.kind == COLUMN_BELOW and dst.kind == COLUMN:
        return
    if kind == QUOTIENT_COMPOSITE:
        if src.kind == HOOK_MAX and dst.kind == COLUMN:
            return
        if src.kind == COLUMN and dst.kind == HOOK_MIN:
            return
    raise IncompatibleRegions(f"no catalog map {src} -> {dst} of kind {kind!r}")


def _cached_restrict(c: FilteredComplex, r: Region) -> SubquotientComplex:
    key = ("restrict", r)
    if key not in c._cache:
        c._cache[key] = restrict(c, r)
    return c._cache[key]


def _cached_reduction(c: FilteredComplex, r: Region, track: bool) -> f2.Reduction:
    key = ("reduction", r, track)
    if key not in c._cache:
        if track is False and ("reduction", r, True) in c._cache:
            return c._cache[("reduction", r, True)]
        c._cache[key] = _cached_restrict(c, r).reduction(track=track)
    return c._cache[key]


def induced_map_nontrivial(c: FilteredComplex, src: Region, dst: Region, kind: str) -> bool:
    """Whether the catalog map ``C{src} -> C{dst}`` is nonzero on F2 homology.

    Every catalog map (inclusion, quotient then inclusion) sends a basis
    element ``U^m x`` to itself when it lies in the target region and to zero
    otherwise. A homology basis of the source is pushed forward and tested
    against the boundaries of the target.
    """
    _check_pairing(src, dst, kind)
    s_sq = _cached_restrict(c, src)
    d_sq = _cached_restrict(c, dst)
    s_red = _cached_reduction(c, src, True)
    d_red = _cached_reduction(c, dst, False)
    d_keys = d_sq.keys()
    gens, upow = s_sq.gen, s_sq.upow
    for j in s_red.essential():
        image = []
        for b in s_red.cycles[j]:
            t = d_keys.get((int(gens[b]), int(upow[b])))
            if t is not None:
                image.append(t)
        if d_red.reduce(image):
            return True
    return False


def column_homology_dimension(c: FilteredComplex) -> int:
    red = _cached_reduction(c, Region.column(), True)
    return len(red.essential())


def essential_column_birth(c: FilteredComplex) -> list[int]:
    """Alexander levels at which the essential classes of ``C{i=0}`` are born.

    The basis of ``C{i=0}`` is listed by Alexander grading, so the persistence
    pairing of the reduced boundary matrix gives these directly.
    """
    sq = _cached_restrict(c, Region.column())
    red = _cached_reduction(c, Region.column(), True)
    return [int(c.alexander[sq.gen[j]]) for j in red.essential()]


def dumps(c: FilteredComplex) -> str:
    return json.dumps(c.to_json(), ensure_ascii=False)
