"""Exact arithmetic on integer Laurent polynomials in one variable ``t``."""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NotDivisible


class LaurentPoly:
    """An immutable integer Laurent polynomial stored as ``{exponent: coefficient}``.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], start: int = 0) -> "LaurentPoly":
        """``from_coeffs([1, -1, 1])`` is ``1 - t + t^2``."""
        return cls((start + i, c) for i, c in enumerate(coeffs))

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def exponents(self) -> list[int]:
        return list(self._terms)

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int:
        return next(iter(self._terms))

    def max_exponent(self) -> int:
        return next(reversed(self._terms))

    def degree(self) -> int:
        """Breadth ``max - min``; the usual degree of a normalized polynomial."""
        return self.max_exponent() - self.min_exponent()

    def __call__(self, t):
        return sum(c * t**e for e, c in self._terms.items())

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPoly({0: 1})
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t^k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict:
        return {"terms": [[e, c] for e, c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        pairs = [(int(e), int(c)) for e, c in data["terms"]]
        if any(c == 0 for _, c in pairs):
            raise ValueError("zero coefficients are not allowed in the JSON form")
        return cls(pairs)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
T = LaurentPoly({1: 1})


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def substitute_power(p: LaurentPoly, n: int) -> LaurentPoly:
    """Return ``p(t^n)``."""
    if n < 1:
        raise ValueError(f"substitution power must be >= 1, got {n}")
    return LaurentPoly({n * e: c for e, c in p.terms.items()})


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Quotient ``q`` with ``q * den == num``; raises ``NotDivisible`` otherwise.

    Long division from the top exponent. Each step needs the leading
    coefficient of ``den`` to divide the current leading coefficient.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return ZERO
    rem = dict(num.terms)
    dtop = den.max_exponent()
    dlead = den.coeff(dtop)
    dterms = den.terms
    # no quotient term can sit below this exponent
    lowest = num.min_exponent() - den.min_exponent()
    quot: dict[int, int] = {}
    while rem:
        top = max(rem)
        if top - dtop < lowest:
            raise NotDivisible(f"nonzero remainder {LaurentPoly(rem)}")
        c = rem[top]
        if c % dlead:
            raise NotDivisible(f"leading coefficient {c} not divisible by {dlead}")
        qc = c // dlead
        qe = top - dtop
        quot[qe] = qc
        for e, dc in dterms.items():
            k = e + qe
            v = rem.get(k, 0) - qc * dc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly(quot)


def is_symmetric(p: LaurentPoly) -> bool:
    """True iff the coefficient of ``t^e`` equals that of ``t^(d-e)``, ``d = max + min``."""
    if p.is_zero():
        return True
    d = p.max_exponent() + p.min_exponent()
    return all(p.coeff(d - e) == c for e, c in p.terms.items())


def format_poly(p: LaurentPoly) -> str:
    """Increasing exponents, explicit signs: ``1 - t + t^2``."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.terms.items():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "t" if e == 1 else f"t^{e}"
            body = var if mag == 1 else f"{mag}{var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)
