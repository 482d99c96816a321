"""Alexander polynomials of torus knots and iterated cables.

Two routes are kept side by side: the general division formula with the
cabling product, and explicit summation formulas for three families
(``T(p, np+1)``, the ``(p, p+1)`` cable of ``T(2,3)`` and ``T(p, 2p-1)``).
The summation formulas are accumulated term by term, never simplified, so
comparing the two routes is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotCoprime
from .laurent import ONE, LaurentPoly, exact_div, substitute_power


def _check_pair(p: int, q: int) -> None:
    if p < 1:
        raise ValueError(f"winding number p must be >= 1, got {p}")
    if q < 1:
        raise ValueError(f"only positive torus knots are supported, got q={q}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {gcd(p, q)}")


@dataclass(frozen=True)
class CableWord:
    """Iterated cable ``T(p1,q1; p2,q2; ...)``: a torus knot, then cables of it.

    ``p`` is the longitudinal winding at every stage.
    """

    stages: tuple[tuple[int, int], ...]

    def __post_init__(self):
        stages = tuple((int(p), int(q)) for p, q in self.stages)
        if not stages:
            raise ValueError("a cable word needs at least one stage")
        for p, q in stages:
            _check_pair(p, q)
        object.__setattr__(self, "stages", stages)

    def genus(self) -> int:
        g = 0
        for p, q in self.stages:
            g = p * g + (p - 1) * (q - 1) // 2
        return g

    def hedden_ok(self) -> bool:
        """Every stage satisfies ``q/p >= 2 g(companion) - 1``, so each cable stays an L-space knot."""
        g = 0
        for p, q in self.stages:
            if Fraction(q, p) < 2 * g - 1:
                return False
            g = p * g + (p - 1) * (q - 1) // 2
        return True

    def __str__(self):
        return "T(" + "; ".join(f"{p},{q}" for p, q in self.stages) + ")"


def normalize(p: LaurentPoly) -> LaurentPoly:
    """Shift to lowest exponent 0 and fix the sign so the constant term is positive."""
    if p.is_zero():
        return p
    p = p.shift(-p.min_exponent())
    return -p if p.coeff(0) < 0 else p


def _binomial(e: int) -> LaurentPoly:
    """``t^e - 1``."""
    return LaurentPoly({e: 1, 0: -1})


def torus_alexander(p: int, q: int) -> LaurentPoly:
    _check_pair(p, q)
    num = _binomial(1) * _binomial(p * q)
    den = _binomial(p) * _binomial(q)
    return normalize(exact_div(num, den))


def cable_alexander(companion: LaurentPoly, p: int, q: int) -> LaurentPoly:
    """Alexander polynomial of the ``(p, q)`` cable: ``companion(t^p) * Delta_{T(p,q)}(t)``."""
    return normalize(substitute_power(companion, p) * torus_alexander(p, q))


def iterated_cable_alexander(word: CableWord) -> LaurentPoly:
    poly = ONE
    for p, q in word.stages:
        poly = cable_alexander(poly, p, q)
    return poly


def _accumulate(plus, minus) -> LaurentPoly:
    coeffs: dict[int, int] = {}
    for e in plus:
        coeffs[e] = coeffs.get(e, 0) + 1
    for e in minus:
        coeffs[e] = coeffs.get(e, 0) - 1
    return LaurentPoly(coeffs)


def closed_form_np1(p: int, n: int) -> LaurentPoly:
    """Summation formula for ``Delta`` of ``T(p, np+1)``."""
    if p < 2 or n < 1:
        raise ValueError(f"need p >= 2 and n >= 1, got p={p}, n={n}")
    plus = (i * p for i in range(n * (p - 1) + 1))
    minus = (k * p + j * (p * n + 1) + 1 for j in range(p - 1) for k in range(n))
    return _accumulate(plus, minus)


def closed_form_pcable(p: int) -> LaurentPoly:
    """Summation formula for ``Delta`` of the ``(p, p+1)`` cable of ``T(2,3)``."""
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    plus = [i * (p + 1) for i in range(p + 1)] + [i * p for i in range(2, p)]
    minus = [i * (p + 1) + 1 for i in range(p - 1)] + [i * (p + 1) - 1 for i in range(2, p + 1)]
    return _accumulate(plus, minus)


def closed_form_2pm1(p: int) -> LaurentPoly:
    """Summation formula for ``Delta`` of ``T(p, 2p-1)``."""
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    plus = []
    for i in range(p - 1):
        plus += [(2 * p - 1) * i, (2 * p - 1) * i + p]
    minus = [i * p + 1 for i in range(2 * (p - 2) + 1)]
    return _accumulate(plus, minus)
