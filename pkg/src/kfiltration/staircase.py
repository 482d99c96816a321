"""Staircase complexes of L-space knots.

A staircase is recorded by its step lengths up to the point of symmetry,
``(a0, a1, ..., an)``. The full step sequence is the palindrome
``half + reversed(half)``; its prefix sums are the exponents of the Alexander
polynomial and the Alexander gradings of the generators ``x0..xM``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from itertools import accumulate
from typing import Iterable, Mapping

import numpy as np

from .errors import NotLSpaceForm, check_size
from .filtcx import FilteredComplex, dual, tensor_all
from .laurent import LaurentPoly, is_symmetric


@total_ordering
@dataclass(frozen=True)
class Staircase:
    half: tuple[int, ...]

    def __post_init__(self):
        half = tuple(int(a) for a in self.half)
        if not half:
            raise ValueError("the empty staircase is not allowed; use the unknot complex instead")
        if any(a < 1 for a in half):
            raise ValueError(f"step lengths must be positive: {half}")
        object.__setattr__(self, "half", half)

    @classmethod
    def of(cls, *steps: int) -> "Staircase":
        return cls(tuple(steps))

    def gaps(self) -> list[int]:
        return symmetric_gaps(self)

    def exponents(self) -> list[int]:
        ex = [0, *accumulate(self.gaps())]
        g2 = ex[-1]
        assert all(a + b == g2 for a, b in zip(ex, reversed(ex)))
        return ex

    @property
    def genus(self) -> int:
        return sum(self.half)

    @property
    def n_generators(self) -> int:
        return 2 * len(self.half) + 1

    def alexander(self) -> LaurentPoly:
        return LaurentPoly({e: (-1) ** i for i, e in enumerate(self.exponents())})

    def __lt__(self, other):
        if not isinstance(other, Staircase):
            return NotImplemented
        return self.half < other.half

    def __str__(self):
        return format_steps(self.half)

    def to_json(self) -> dict:
        return {"half": list(self.half)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Staircase":
        return cls(tuple(data["half"]))


def format_steps(steps: Iterable[int]) -> str:
    return "(" + ", ".join(str(a) for a in steps) + ")"


def symmetric_gaps(s: Staircase) -> list[int]:
    return list(s.half) + list(reversed(s.half))


def staircase_from_alexander(p: LaurentPoly) -> Staircase:
    """Read the staircase off an alternating L-space polynomial."""
    if p.is_zero():
        raise NotLSpaceForm("zero polynomial")
    if p.min_exponent() != 0:
        raise NotLSpaceForm(f"lowest exponent is {p.min_exponent()}, expected 0")
    coeffs = list(p.terms.values())
    if len(coeffs) == 1:
        raise NotLSpaceForm("constant polynomial: the unknot has no staircase")
    if len(coeffs) % 2 == 0:
        raise NotLSpaceForm("an L-space polynomial has an odd number of terms")
    if any(c != (-1) ** i for i, c in enumerate(coeffs)):
        raise NotLSpaceForm(f"coefficients do not alternate +1, -1 from +1: {p}")
    if not is_symmetric(p):
        raise NotLSpaceForm(f"not symmetric: {p}")
    ex = p.exponents()
    gaps = [b - a for a, b in zip(ex, ex[1:])]
    return Staircase(tuple(gaps[: len(gaps) // 2]))


def hypothesis_sequence(a: Staircase) -> list[int]:
    """Steps of ``a`` indexed for the concatenation test.

    The half sequence is used with 1-based positions; when it has odd length
    it is extended by its mirror image entry so the count is even.
    """
    full = a.gaps()
    m = len(a.half)
    return full[: m + (m % 2)]


def concat_hypothesis(a: Staircase, b: Staircase) -> bool:
    """``max(a at odd positions) <= b_j <= min(a at even positions)`` for every step of ``b``."""
    seq = hypothesis_sequence(a)
    odd = seq[0::2]
    even = seq[1::2]
    lo, hi = max(odd), min(even)
    return all(lo <= bj <= hi for bj in b.half)


def concat(a: Staircase, b: Staircase) -> tuple[Staircase, bool]:
    return Staircase(a.half + b.half), concat_hypothesis(a, b)


def to_complex(s: Staircase) -> FilteredComplex:
    """Staircase complex on ``x0..xM``: ``d x_i = x_{i-1} + x_{i+1}`` for odd ``i``."""
    ex = s.exponents()
    g = ex[-1] // 2
    size = len(ex)
    alex = np.array([g - e for e in ex], dtype=np.int64)
    mas = np.zeros(size, dtype=np.int64)
    arrows = []
    for i in range(1, size, 2):
        k = ex[i] - ex[i - 1]  # horizontal length of x_i -> x_{i-1}
        mas[i] = mas[i - 1] + 1 - 2 * k
        mas[i + 1] = mas[i] - 1
        arrows += [(i, i - 1), (i, i + 1)]
    c = FilteredComplex(alex, mas, arrows, names=[f"x{i}" for i in range(size)])
    h, v = c.displacements()
    # horizontal arrows have length n_i - n_{i-1}, vertical ones n_{i+1} - n_i
    for (src, tgt), dh, dv in zip(c.arrows.tolist(), h.tolist(), v.tolist()):
        if tgt == src - 1:
            assert dh == ex[src] - ex[tgt] and dv == 0
        else:
            assert dh == 0 and dv == ex[tgt] - ex[src]
    return c


class StairSum:
    """Formal integer combination of staircases; negative coefficients mean duals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Staircase, int] | Iterable[tuple[Staircase, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Staircase, int] = {}
        for s, k in items:
            if not isinstance(s, Staircase):
                s = Staircase(tuple(s))
            acc[s] = acc.get(s, 0) + int(k)
        self._terms = {s: acc[s] for s in sorted(acc) if acc[s] != 0}

    @classmethod
    def single(cls, s: Staircase, k: int = 1) -> "StairSum":
        return cls({s: k})

    @property
    def terms(self) -> dict[Staircase, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, StairSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "StairSum") -> "StairSum":
        return StairSum(list(self.items()) + list(other.items()))

    def __neg__(self):
        return StairSum({s: -k for s, k in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return StairSum({s: n * k for s, k in self.items()})

    __rmul__ = __mul__

    def n_generators(self) -> int:
        total = 1
        for s, k in self.items():
            total *= s.n_generators ** abs(k)
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for s, k in self.items():
            body = str(s) if abs(k) == 1 else f"{abs(k)}{s}"
            if not parts:
                parts.append(body if k > 0 else f"-{body}")
            else:
                parts.append(("+ " if k > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"StairSum({self})"

    def to_json(self) -> dict:
        return {"terms": [{"half": list(s.half), "coeff": k} for s, k in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "StairSum":
        terms = [(Staircase(tuple(t["half"])), int(t["coeff"])) for t in data["terms"]]
        if any(k == 0 for _, k in terms):
            raise ValueError("zero coefficients are not allowed in the JSON form")
        return cls(terms)


def stairsum_simplify(s: StairSum) -> StairSum:
    """Canonical form: merge equal staircases and drop cancelled ones.

    ``StairSum`` values are kept canonical on construction, so this rebuilds
    from the raw term list.
    """
    return StairSum(list(s.items()))


def stairsum_to_complex(s: StairSum, cap: int | None = None) -> FilteredComplex:
    """Tensor product of the summands, duals for negative coefficients."""
    check_size(s.n_generators(), cap)
    factors = []
    for st, k in s.items():
        c = to_complex(st)
        if k < 0:
            c = dual(c)
        factors += [c] * abs(k)
    return tensor_all(factors, cap)


_TERM = re.compile(r"\s*([+-])?\s*(\d*)\s*\(([\d\s,]*)\)\s*")


def parse_stairsum(text: str) -> StairSum:
    """Inverse of ``str(StairSum)``: ``"2(1) - (1, 1)"``; ``"0"`` is the empty sum."""
    if text.strip() == "0":
        return StairSum()
    pos, terms = 0, []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse staircase sum at {text[pos:]!r}")
        if m.group(1) is None and terms:
            raise ValueError(f"missing sign before {m.group(0).strip()!r}")
        steps = tuple(int(a) for a in m.group(3).replace(",", " ").split())
        k = int(m.group(2) or 1)
        terms.append((Staircase(steps), -k if m.group(1) == "-" else k))
        pos = m.end()
    if not terms:
        raise ValueError("empty staircase sum")
    return StairSum(terms)
