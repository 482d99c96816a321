"""tau, nu, nu', epsilon and the ordering they induce.

The primary route is the definition: each invariant is an extremal ``s`` at
which a catalog map is nonzero on homology. Two facts shorten the scans
without changing the answer:

* ``v_s`` factors through the inclusion ``C{i=0, j<=s} -> C{i=0}``, so it
  vanishes for ``s < tau``;
* ``H(C{i=0})`` is one-dimensional and the quotient ``C{i=0} -> C{i=0, j>=s}``
  kills the generator of homology for ``s > tau``, so ``v'_s`` vanishes there.

``nu`` is therefore searched upward from ``tau`` and ``nu'`` downward from it.
``scan_*`` functions run the full window and serve as an independent check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvariantViolation, NotKnotLike, check_size
from .filtcx import (
    INCLUSION,
    QUOTIENT_COMPOSITE,
    FilteredComplex,
    Region,
    dual,
    essential_column_birth,
    induced_map_nontrivial,
    tensor,
)


def _knot_like_birth(c: FilteredComplex) -> int:
    births = essential_column_birth(c)
    if len(births) != 1:
        raise NotKnotLike(f"H(C{{i=0}}) has dimension {len(births)}")
    return births[0]


def _incl(c, s):
    return induced_map_nontrivial(c, Region.column_below(s), Region.column(), INCLUSION)


def _v(c, s):
    return induced_map_nontrivial(c, Region.a_s(s), Region.column(), QUOTIENT_COMPOSITE)


def _v_prime(c, s):
    return induced_map_nontrivial(c, Region.column(), Region.a_prime_s(s), QUOTIENT_COMPOSITE)


def tau(c: FilteredComplex) -> int:
    """Least ``s`` with ``H(C{i=0, j<=s}) -> H(C{i=0})`` nonzero."""
    t = _knot_like_birth(c)
    # the persistence birth is confirmed against the definition at both sides
    if not _incl(c, t) or _incl(c, t - 1):
        raise InvariantViolation(f"persistence birth {t} disagrees with the inclusion maps")
    return t


def nu(c: FilteredComplex, start: int | None = None) -> int:
    s = tau(c) if start is None else start
    top = int(c.alexander.max())
    while not _v(c, s):
        s += 1
        if s > top:
            raise InvariantViolation("v_s is zero even above the top Alexander grading")
    return s


def nu_prime(c: FilteredComplex, start: int | None = None) -> int:
    s = tau(c) if start is None else start
    bottom = int(c.alexander.min())
    while not _v_prime(c, s):
        s -= 1
        if s < bottom:
            raise InvariantViolation("v'_s is zero even below the bottom Alexander grading")
    return s


def _window(c: FilteredComplex) -> range:
    g = c.genus_bound()
    return range(-g - 1, g + 2)


def scan_tau(c: FilteredComplex) -> int:
    """``tau`` by testing every ``s`` in the window, without persistence."""
    _knot_like_birth(c)
    hits = [s for s in _window(c) if _incl(c, s)]
    return min(hits)


def scan_nu(c: FilteredComplex) -> int:
    _knot_like_birth(c)
    return min(s for s in _window(c) if _v(c, s))


def scan_nu_prime(c: FilteredComplex) -> int:
    _knot_like_birth(c)
    return max(s for s in _window(c) if _v_prime(c, s))


@dataclass(frozen=True)
class InvariantRecord:
    tau: int
    nu: int
    nu_prime: int
    epsilon: int
    digest: str = ""

    def __post_init__(self):
        if self.nu not in (self.tau, self.tau + 1):
            raise InvariantViolation(f"nu = {self.nu} with tau = {self.tau}")
        if self.nu_prime not in (self.tau, self.tau - 1):
            raise InvariantViolation(f"nu' = {self.nu_prime} with tau = {self.tau}")
        if self.epsilon != 2 * self.tau - self.nu - self.nu_prime:
            raise InvariantViolation("epsilon != 2 tau - nu - nu'")
        if self.epsilon not in (-1, 0, 1):
            raise InvariantViolation(f"epsilon = {self.epsilon}")

    def to_json(self) -> dict:
        return {
            "tau": self.tau,
            "nu": self.nu,
            "nu_prime": self.nu_prime,
            "epsilon": self.epsilon,
            "digest": self.digest,
        }


def invariants(c: FilteredComplex) -> InvariantRecord:
    t = tau(c)
    n = nu(c, t)
    n2 = nu_prime(c, t)
    return InvariantRecord(t, n, n2, 2 * t - n - n2, c.digest())


def epsilon(c: FilteredComplex) -> int:
    return invariants(c).epsilon


def difference(a: FilteredComplex, b: FilteredComplex, cap: int | None = None) -> FilteredComplex:
    """``a`` tensor the dual of ``b``."""
    check_size(len(a) * len(b), cap)
    return tensor(a, dual(b))


def epsilon_equivalent(a: FilteredComplex, b: FilteredComplex, cap: int | None = None) -> bool:
    return epsilon(difference(a, b, cap)) == 0


LESS, EQUAL, GREATER = "less", "equal", "greater"
_BY_SIGN = {-1: LESS, 0: EQUAL, 1: GREATER}


@dataclass(frozen=True)
class DominationEvidence:
    n_max: int
    verdicts: tuple[str, ...]
    first_failure: int | None

    @property
    def all_greater(self) -> bool:
        return self.first_failure is None and len(self.verdicts) == self.n_max

    def to_json(self) -> dict:
        return {
            "N": self.n_max,
            "verdicts": list(self.verdicts),
            "first_failure": self.first_failure,
            "all_greater": self.all_greater,
        }


@dataclass(frozen=True)
class ComparisonResult:
    relation: str
    digests: tuple[str, str] = ("", "")
    dominates_evidence: DominationEvidence | None = field(default=None)

    def swapped(self) -> "ComparisonResult":
        rel = {LESS: GREATER, GREATER: LESS, EQUAL: EQUAL}[self.relation]
        return ComparisonResult(rel, self.digests[::-1])

    def to_json(self) -> dict:
        out = {"relation": self.relation, "digests": list(self.digests)}
        if self.dominates_evidence is not None:
            out["dominates_evidence"] = self.dominates_evidence.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def compare(a: FilteredComplex, b: FilteredComplex, cap: int | None = None) -> ComparisonResult:
    """Order on epsilon-classes: the sign of ``epsilon(a - b)``."""
    e = epsilon(difference(a, b, cap))
    return ComparisonResult(_BY_SIGN[e], (a.digest(), b.digest()))


def absolute(c: FilteredComplex) -> FilteredComplex:
    """``c`` if it is at least the unknot, else its dual."""
    return c if epsilon(c) >= 0 else dual(c)


def dominates_bounded(
    a: FilteredComplex, b: FilteredComplex, n_max: int = 3, cap: int | None = 50_000
) -> DominationEvidence:
    """Compare ``|a|`` with ``n|b|`` for ``n = 1..n_max``; stops at the first non-greater verdict.

    Bounded evidence only: no finite run shows domination for every ``n``.
    """
    if n_max < 1:
        raise ValueError("N must be at least 1")
    abs_a, abs_b = absolute(a), absolute(b)
    check_size(len(abs_a) * len(abs_b) ** n_max, cap)
    verdicts = []
    multiple = abs_b
    for n in range(1, n_max + 1):
        if n > 1:
            multiple = tensor(multiple, abs_b)
        rel = compare(abs_a, multiple, cap).relation
        verdicts.append(rel)
        if rel != GREATER:
            return DominationEvidence(n_max, tuple(verdicts), n)
    return DominationEvidence(n_max, tuple(verdicts), None)
