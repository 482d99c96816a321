"""Exception types and resource limits shared across the package."""

from __future__ import annotations

import contextlib
import contextvars
import os
import time
from dataclasses import dataclass


class KFiltrationError(Exception):
    """Base class for every error raised by this package."""


class NotDivisible(KFiltrationError):
    pass


class NotCoprime(KFiltrationError):
    pass


class NotLSpaceForm(KFiltrationError):
    """The polynomial is not the Alexander polynomial of an L-space knot."""


class NotKnotLike(KFiltrationError):
    """C{i=0} does not have one-dimensional homology."""


class IncompatibleRegions(KFiltrationError):
    pass


class SimplificationFailed(KFiltrationError):
    pass


class ResourceLimit(KFiltrationError):
    pass


class NoClaim(KFiltrationError):
    pass


class NonTermination(KFiltrationError):
    pass


class InvariantViolation(KFiltrationError):
    """A structural identity that must always hold was observed to fail."""


DEFAULT_MAX_GENERATORS = 50_000
DEFAULT_MAX_N = 3
DEFAULT_CLAIM_BUDGET = 600.0


@dataclass(frozen=True)
class Caps:
    max_generators: int = DEFAULT_MAX_GENERATORS
    max_n: int = DEFAULT_MAX_N
    claim_budget: float = DEFAULT_CLAIM_BUDGET

    @classmethod
    def from_env(cls, **overrides) -> "Caps":
        """Defaults, then ``KFILTRATION_*`` environment variables, then explicit overrides."""
        values = {
            "max_generators": int(os.environ.get("KFILTRATION_MAX_GENERATORS", DEFAULT_MAX_GENERATORS)),
            "max_n": int(os.environ.get("KFILTRATION_MAX_N", DEFAULT_MAX_N)),
            "claim_budget": float(os.environ.get("KFILTRATION_CLAIM_BUDGET", DEFAULT_CLAIM_BUDGET)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar("deadline", default=None)


@contextlib.contextmanager
def budget(seconds: float | None):
    """Run the enclosed block under a wall-clock budget checked by ``check_deadline``."""
    token = _deadline.set(None if seconds is None else time.monotonic() + seconds)
    try:
        yield
    finally:
        _deadline.reset(token)


def check_deadline() -> None:
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise ResourceLimit("per-claim time budget exhausted")


def check_size(n_generators: int, cap: int | None) -> None:
    if cap is not None and n_generators > cap:
        raise ResourceLimit(f"complex would have {n_generators} generators (cap {cap})")
