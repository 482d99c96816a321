"""Knot families as staircase models, their claimed decompositions, and checks.

Every family here is an iterated cable whose first stage may be a Whitehead
double of ``T(2,3)``. That double is epsilon-equivalent to ``T(2,3)`` itself,
so it is modelled by the stage ``(2, 3)`` and nothing in the package stands
for the double directly.

Decompositions with an open tail are made concrete by cutting the computed
staircase: fixed summands take their stated number of steps from the half
sequence, the open summand takes what is left. The stated step values are
checked literally against the full step sequence.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .alexander import CableWord, iterated_cable_alexander
from .errors import Caps, NoClaim, NonTermination, NotLSpaceForm, ResourceLimit, budget, check_size
from .filtcx import FilteredComplex, dual, tensor
from .invariants import GREATER, dominates_bounded, epsilon
from .staircase import Staircase, StairSum, concat, stairsum_to_complex, to_complex

CONFIRMED, REFUTED, RESOURCE_LIMITED = "confirmed", "refuted", "resource-limited"


# -- knot specifications ----------------------------------------------------------


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def word(self) -> CableWord:
        return CableWord(((self.p, self.q),))

    def __str__(self):
        return f"T({self.p},{self.q})"


@dataclass(frozen=True)
class IteratedCable:
    cable: CableWord

    def word(self) -> CableWord:
        return self.cable

    def __str__(self):
        return str(self.cable)


@dataclass(frozen=True)
class KFamily:
    """``(n, n(p^2+p)+1)`` cable of the ``(p, p+1)`` cable of the double."""

    n: int
    p: int

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ValueError(f"n must be even and at least 4, got {self.n}")
        if self.p < 5:
            raise ValueError(f"p must be at least 5, got {self.p}")

    def word(self) -> CableWord:
        n, p = self.n, self.p
        return CableWord(((2, 3), (p, p + 1), (n, n * (p * p + p) + 1)))

    def __str__(self):
        return f"K({self.n},{self.p})"


@dataclass(frozen=True)
class SFamily:
    q: int

    def __post_init__(self):
        if self.q < 4:
            raise ValueError(f"q must be at least 4, got {self.q}")

    def word(self) -> CableWord:
        q = self.q
        stage = (q // 2 + 1, q + 1) if q % 2 == 0 else ((q + 1) // 2, q + 2)
        return CableWord(((2, 3), stage))

    def offset_torus_knot(self) -> TorusKnot:
        """Torus knot sharing the topological concordance class (the double is replaced by the unknot)."""
        (_, _), (p, q) = self.word().stages
        return TorusKnot(p, q)

    def __str__(self):
        return f"S({self.q})"


@dataclass(frozen=True)
class BigCable:
    """``(n, n(p^2+p)+1)`` cable of ``T(p, p+1)``."""

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")

    def word(self) -> CableWord:
        n, p = self.n, self.p
        return CableWord(((p, p + 1), (n, n * (p * p + p) + 1)))

    def __str__(self):
        return f"T({self.p},{self.p + 1};{self.n},{self.n * (self.p ** 2 + self.p) + 1})"


KnotSpec = TorusKnot | IteratedCable | KFamily | SFamily | BigCable


def model_staircase(k: KnotSpec) -> Staircase:
    word = k.word()
    if not word.hedden_ok():
        raise NotLSpaceForm(f"{word} fails the cabling criterion; its staircase model is not valid")
    return _staircase_of_word(word)


_WORD_CACHE: dict[CableWord, Staircase] = {}


def _staircase_of_word(word: CableWord) -> Staircase:
    from .staircase import staircase_from_alexander

    if word not in _WORD_CACHE:
        _WORD_CACHE[word] = staircase_from_alexander(iterated_cable_alexander(word))
    return _WORD_CACHE[word]


# -- decompositions with open tails ------------------------------------------------


@dataclass(frozen=True)
class Chunk:
    """A stated summand: its literal steps and whether it ends in an open tail."""

    steps: tuple[int, ...]
    open: bool = False


@dataclass(frozen=True)
class Split:
    summands: tuple[Staircase, ...]
    literal: tuple[int, ...]
    literal_ok: bool
    joins_ok: tuple[bool, ...]

    def as_sum(self, times: int = 1) -> StairSum:
        return StairSum([(s, times) for s in self.summands])


def split_staircase(st: Staircase, chunks: list[Chunk]) -> Split:
    """Cut ``st`` into the stated summands.

    Fixed chunks take as many steps of the half sequence as they state (fewer
    if the symmetry point comes first); an open chunk must be last and takes
    the remainder. Empty pieces are dropped. ``joins_ok`` records, for each
    cut, whether the concatenation hypothesis holds for the two sides.
    """
    if any(c.open for c in chunks[:-1]):
        raise ValueError("only the last stated summand may be open")
    literal = tuple(a for c in chunks for a in c.steps)
    full = st.gaps()
    literal_ok = tuple(full[: len(literal)]) == literal
    half, pos, pieces = st.half, 0, []
    for c in chunks:
        piece = half[pos:] if c.open else half[pos : pos + len(c.steps)]
        pos += len(piece)
        if piece:
            pieces.append(Staircase(piece))
    if pos < len(half):
        literal_ok = False  # stated summands do not exhaust the staircase
    joins = []
    for i in range(1, len(pieces)):
        head = Staircase(tuple(a for s in pieces[:i] for a in s.half))
        joins.append(concat(head, pieces[i])[1])
    return Split(tuple(pieces), literal, literal_ok, tuple(joins))


def _k_chunks(n: int, p: int) -> list[Chunk]:
    return [
        Chunk((1, n * (p + 1) - 1)),
        Chunk((1, n * (p - 1) - 1)),
        Chunk((1, 2 * n - 1, 1, n * (p - 2) - 1, 1, n - 1), open=True),
    ]


def _s_chunks(q: int) -> list[Chunk]:
    return [Chunk((1, q)), Chunk((2,), open=True)]


def _pp1_chunks(p: int) -> list[Chunk]:
    # at p = 2 the open summand is empty and has no stated steps
    tail = Chunk((2, p - 2), open=True) if p > 2 else Chunk((), open=True)
    return [Chunk((1, p - 1)), tail]


def _2pm1_chunks(p: int) -> list[Chunk]:
    return [Chunk((1, p - 1)), Chunk((1, p - 2)), Chunk((2,), open=True)]


def _bigcable_chunks(n: int, p: int) -> list[Chunk]:
    return [Chunk((1, n * p - 1)), Chunk((1, n - 1), open=True)]


def proposition_of(k: KnotSpec) -> tuple[str, dict]:
    if isinstance(k, KFamily):
        return "3.2", {"n": k.n, "p": k.p}
    if isinstance(k, SFamily):
        return "3.3", {"q": k.q}
    if isinstance(k, BigCable):
        return "3.6", {"n": k.n, "p": k.p}
    if isinstance(k, TorusKnot):
        p, q = k.p, k.q
        if p >= 2 and q > 1 and (q - 1) % p == 0:
            return "3.4", {"p": p, "n": (q - 1) // p}
        if p >= 3 and q == 2 * p - 1:
            return "3.5", {"p": p}
    raise NoClaim(f"no decomposition is stated for {k}")


def knot_of(claim: str, params: dict) -> KnotSpec:
    try:
        if claim == "3.2":
            return KFamily(params["n"], params["p"])
        if claim == "3.3":
            return SFamily(params["q"])
        if claim == "3.4":
            p, n = params["p"], params["n"]
            if p < 2 or n < 1:
                raise ValueError("need p >= 2 and n >= 1")
            return TorusKnot(p, n * p + 1)
        if claim == "3.5":
            if params["p"] < 3:
                raise ValueError("need p >= 3")
            return TorusKnot(params["p"], 2 * params["p"] - 1)
        if claim == "3.6":
            return BigCable(params["n"], params["p"])
    except KeyError as exc:
        raise ValueError(f"proposition {claim} needs parameter {exc.args[0]}") from None
    raise NoClaim(f"unknown proposition {claim!r}")


def claimed_split(k: KnotSpec) -> tuple[Split, int]:
    """The stated decomposition cut from the computed staircase, and its multiplicity."""
    claim, params = proposition_of(k)
    if claim == "3.2":
        return split_staircase(model_staircase(k), _k_chunks(k.n, k.p)), 1
    if claim == "3.3":
        return split_staircase(model_staircase(k), _s_chunks(k.q)), 1
    if claim == "3.4":
        p = params["p"]
        return split_staircase(model_staircase(TorusKnot(p, p + 1)), _pp1_chunks(p)), params["n"]
    if claim == "3.5":
        return split_staircase(model_staircase(k), _2pm1_chunks(k.p)), 1
    return split_staircase(model_staircase(k), _bigcable_chunks(k.n, k.p)), 1


def claimed_decomposition(k: KnotSpec) -> StairSum:
    split, times = claimed_split(k)
    return split.as_sum(times)


# -- reports -------------------------------------------------------------------------


@dataclass
class VerificationReport:
    claim: str
    params: dict
    verdict: str
    evidence: list = field(default_factory=list)
    digests: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def confirmed(self) -> bool:
        return self.verdict == CONFIRMED

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "claim": self.claim,
            "params": self.params,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "digests": self.digests,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    def certificate_name(self) -> str:
        def flat(v):
            return "-".join(flat(x) for x in v) if isinstance(v, (list, tuple)) else str(v)

        tag = "_".join(f"{k}{flat(v)}" for k, v in self.params.items())
        base = f"{self.claim}_{tag}" if tag else self.claim
        return "".join(ch if ch.isalnum() or ch in "._-" else "-" for ch in base) + ".json"


def _digest(obj) -> str:
    if isinstance(obj, FilteredComplex):
        return obj.digest()
    raw = json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj, sort_keys=True)
    return hashlib.sha256(raw.encode()).hexdigest()[:16]


def _run(claim: str, params: dict, caps: Caps | None, body: Callable[[VerificationReport, Caps], None]):
    caps = caps or Caps.from_env()
    report = VerificationReport(claim, dict(params), CONFIRMED)
    start = time.monotonic()
    try:
        with budget(caps.claim_budget):
            body(report, caps)
    except ResourceLimit as exc:
        report.verdict = RESOURCE_LIMITED
        report.evidence.append({"check": "resources", "detail": str(exc)})
    report.seconds = time.monotonic() - start
    return report


def _record(report: VerificationReport, check: str, ok: bool, **detail: Any) -> bool:
    report.evidence.append({"check": check, "holds": bool(ok), **detail})
    if not ok and report.verdict == CONFIRMED:
        report.verdict = REFUTED
    return ok


def _equivalence(report, label: str, left: FilteredComplex, right: FilteredComplex, cap: int) -> bool:
    check_size(len(left) * len(right), cap)
    e = epsilon(tensor(left, dual(right)))
    report.digests[label + ".left"] = left.digest()
    report.digests[label + ".right"] = right.digest()
    return _record(report, label, e == 0, epsilon=e, generators=len(left) * len(right))


# -- propositions ----------------------------------------------------------------------


def verify_proposition(claim: str, params: dict, caps: Caps | None = None) -> VerificationReport:
    k = knot_of(claim, params)

    def body(report: VerificationReport, caps: Caps):
        st = model_staircase(k)
        report.digests["staircase"] = _digest(st)
        report.evidence.append({"check": "model", "knot": str(k), "steps": len(st.half)})
        split, times = claimed_split(k)
        _record(
            report,
            "stated steps",
            split.literal_ok,
            stated=list(split.literal),
            computed=st.gaps()[: len(split.literal)],
        )
        claimed = split.as_sum(times)
        report.evidence.append(
            {"check": "decomposition", "sum": str(claimed), "cuts satisfy concatenation hypothesis": list(split.joins_ok)}
        )
        knot = to_complex(st)
        if claim == "3.4":
            base = model_staircase(TorusKnot(params["p"], params["p"] + 1))
            tensor_model = stairsum_to_complex(StairSum({base: params["n"]}), caps.max_generators)
            _equivalence(report, "equivalent to n-fold tensor", knot, tensor_model, caps.max_generators)
        _equivalence(report, "equivalent to decomposition", knot, stairsum_to_complex(claimed, caps.max_generators), caps.max_generators)

    return _run("prop" + claim, params, caps, body)


# -- lemmas ---------------------------------------------------------------------------


def _lemma_2_4_hypothesis(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """``b1 > a1``, or ``b1 == a1`` and ``b2 < a2`` (full step sequences)."""
    if b[0] != a[0]:
        return b[0] > a[0]
    return len(a) > 1 and len(b) > 1 and b[1] < a[1]


def lemma_2_4_hypothesis(a: Staircase, b: Staircase) -> bool:
    return _lemma_2_4_hypothesis(tuple(a.gaps()), tuple(b.gaps()))


def lemma_2_8_hypothesis(u: int, v: int, w: int) -> bool:
    return v >= u > w >= 1


def _domination(report, label, a: Staircase, b: Staircase, caps: Caps) -> bool:
    ev = dominates_bounded(to_complex(a), to_complex(b), caps.max_n, caps.max_generators)
    return _record(report, label, ev.all_greater, dominant=str(a), dominated=str(b), **ev.to_json())


def _lemma_2_8_checks(report, A: Staircase, B: Staircase, cap: int) -> None:
    a, b = to_complex(A), to_complex(B)
    check_size(len(a) * len(b) ** 2, cap)
    e1 = epsilon(tensor(a, dual(b)))
    _record(report, "A > B", e1 == 1, epsilon=e1, A=str(A), B=str(B))
    e2 = epsilon(tensor(tensor(b, b), dual(a)))
    _record(report, "2B > A", e2 == 1, epsilon=e2)


def verify_lemma(claim: str, params: dict, caps: Caps | None = None) -> VerificationReport:
    def body(report: VerificationReport, caps: Caps):
        if claim == "2.6":
            a, b = Staircase(tuple(params["a"])), Staircase(tuple(params["b"]))
            joined, hyp = concat(a, b)
            report.evidence.append({"check": "hypothesis", "holds": hyp, "concatenation": str(joined)})
            left = tensor(to_complex(a), to_complex(b))
            check_size(len(left) * len(to_complex(joined)), caps.max_generators)
            e = epsilon(tensor(left, dual(to_complex(joined))))
            equivalent = e == 0
            report.evidence.append({"check": "tensor equivalent to concatenation", "holds": equivalent, "epsilon": e})
            if hyp and not equivalent:
                report.verdict = REFUTED
        elif claim == "2.4":
            a, b = Staircase(tuple(params["a"])), Staircase(tuple(params["b"]))
            if not lemma_2_4_hypothesis(a, b):
                raise NoClaim(f"hypothesis fails for a={a}, b={b}")
            report.evidence.append({"check": "hypothesis", "holds": True})
            _domination(report, "a dominates b", a, b, caps)
        elif claim == "2.5":
            x, c, d = params["a"], params["c"], params["d"]
            if not (x > 0 and c > 0 and 0 <= d < c):
                raise NoClaim(f"hypothesis fails for a={x}, c={c}, d={d}")
            report.evidence.append({"check": "hypothesis", "holds": True})
            big, small = Staircase((1, x, 1, x + c)), Staircase((1, x, 1, x + d))
            _domination(report, "(1,a,1,a+c) dominates (1,a,1,a+d)", big, small, caps)
        elif claim == "2.8":
            u, v, w = params["u"], params["v"], params["w"]
            if not lemma_2_8_hypothesis(u, v, w):
                raise NoClaim(f"hypothesis fails for u={u}, v={v}, w={w}")
            _lemma_2_8_checks(report, Staircase((1, u, 1, v, 1, w)), Staircase((1, u, 1, v)), caps.max_generators)
        else:
            raise NoClaim(f"unknown lemma {claim!r}")

    return _run("lemma" + claim, params, caps, body)


# -- the cancellation procedure -----------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    n_prime: int
    p_prime: int
    A: Staircase
    B0: StairSum
    obstructions0: StairSum


def construction(n: int, p: int) -> Construction:
    if n < 0 or p < 0:
        raise ValueError("n and p must be non-negative")
    n2, p2 = 2 * (n + 2), p + 5
    k_split, _ = claimed_split(KFamily(n2, p2))
    big_split, _ = claimed_split(BigCable(n2, p2))
    if not (k_split.literal_ok and big_split.literal_ok):
        raise NotLSpaceForm("the stated leading steps do not match the computed staircases")
    A = k_split.summands[2]
    B0 = -StairSum([(s, 1) for s in big_split.summands[1:]])
    obstructions = StairSum(
        {
            Staircase((1, n2 * (p2 + 1) - 1)): 1,
            Staircase((1, n2 * (p2 - 1) - 1)): 1,
            Staircase((1, n2 * p2 - 1)): -1,
        }
    )
    return Construction(n2, p2, A, B0, obstructions)


def _absorbable(s: Staircase, A: Staircase) -> str | None:
    """Reason ``s`` is dominated by ``A`` (first-step comparison), or ``None``."""
    a, b = A.gaps(), s.gaps()
    if b[0] > a[0]:
        return f"first step {b[0]} > {a[0]}"
    if b[0] == a[0] and b[1] < a[1]:
        return f"first steps equal, second step {b[1]} < {a[1]}"
    return None


def _offset_pieces(q: int) -> tuple[StairSum, StairSum, TorusKnot]:
    """``S_q`` and its offsetting torus knot, as cut decompositions."""
    s = SFamily(q)
    torus = s.offset_torus_knot()
    return claimed_decomposition(s), claimed_decomposition(torus), torus


@dataclass
class BuildResult:
    steps: list[StairSum]
    final: StairSum
    certificate: dict


def build_T(n: int, p: int, max_steps: int = 64) -> BuildResult:
    con = construction(n, p)
    A, floor = con.A, 2 * con.n_prime - 1
    B = con.B0
    obstructions = con.obstructions0
    steps = [obstructions + StairSum({A: 1}) + B]
    log = []
    prev_max = max(s.half[1] for s, _ in obstructions.items())
    for i in range(1, max_steps + 1):
        if not obstructions:
            break
        added = StairSum()
        actions = []
        for s, c in obstructions.items():
            q = s.half[1]
            s_sum, torus_sum, torus = _offset_pieces(q)
            # -c S_q cancels c (1, q); +c torus knot keeps the sum slice
            added = added - s_sum * c + torus_sum * c
            actions.append({"summand": str(s), "coeff": c, "S": q, "offset torus knot": str(torus)})
        residue = obstructions + added
        new_obs, absorbed = StairSum(), []
        for s, c in residue.items():
            if s == A:
                raise NonTermination("a cancellation produced a copy of A")
            reason = _absorbable(s, A)
            if reason is None:
                if len(s.half) != 2 or s.half[0] != 1:
                    raise NonTermination(f"summand {s} is neither absorbable nor of the form (1, q)")
                new_obs = new_obs + StairSum({s: c})
            else:
                B = B + StairSum({s: c})
                absorbed.append({"summand": str(s), "coeff": c, "reason": reason})
        qs = [s.half[1] for s, _ in new_obs.items()]
        decreasing = all(q < prev_max for q in qs)
        above_floor = all(q >= floor for q in qs)
        if not decreasing:
            raise NonTermination(f"step {i}: q-values {qs} do not decrease below {prev_max}")
        log.append(
            {
                "step": i,
                "actions": actions,
                "absorbed": absorbed,
                "remaining": str(new_obs),
                "max q": max(qs, default=None),
                "q above floor": above_floor,
            }
        )
        prev_max = max(qs, default=0)
        obstructions = new_obs
        steps.append(obstructions + StairSum({A: 1}) + B)
    else:
        raise NonTermination(f"obstructions remain after {max_steps} steps")
    final = steps[-1]
    certificate = {
        "n": n,
        "p": p,
        "n'": con.n_prime,
        "p'": con.p_prime,
        "A prefix": list(A.half[:6]),
        "floor 2n'-1": floor,
        "initial": str(steps[0]),
        "steps": log,
        "final terms": len(final),
    }
    return BuildResult(steps, final, certificate)


def final_form_ok(result: BuildResult, A: Staircase) -> bool:
    """The final sum is ``A`` plus terms each dominated by ``A``."""
    terms = result.final.terms
    if terms.get(A) != 1:
        return False
    return all(_absorbable(s, A) is not None for s in terms if s != A)


# -- theorem witness ------------------------------------------------------------------------


def a_staircase(n: int, p: int) -> Staircase:
    return construction(n, p).A


def _quad(n: int, p: int) -> tuple[int, int, int]:
    n2, p2 = 2 * (n + 2), p + 5
    return 2 * n2 - 1, n2 * (p2 - 2) - 1, n2 - 1


def witness_theorem(pairs: list[tuple[int, int]], caps: Caps | None = None) -> VerificationReport:
    """Check the lemma hypotheses ordering consecutive ``A``-staircases."""
    ordered = sorted({tuple(pq) for pq in pairs})

    def body(report: VerificationReport, caps: Caps):
        if len(ordered) < 2:
            report.evidence.append({"check": "pairs", "relation": "equal", "detail": "a single class"})
            return
        for (n1, p1), (n2, p2) in zip(ordered, ordered[1:]):
            lo, hi = a_staircase(n1, p1), a_staircase(n2, p2)
            step = {"from": [n1, p1], "to": [n2, p2]}
            if n1 != n2:
                ok = lemma_2_4_hypothesis(hi, lo)
                _record(report, "lemma 2.4", ok, **step, larger=list(hi.half[:2]), smaller=list(lo.half[:2]))
                continue
            u1, v1, w1 = _quad(n1, p1)
            u2, v2, w2 = _quad(n2, p2)
            _record(report, "steps match A", lo.half[:6] == (1, u1, 1, v1, 1, w1) and hi.half[:6] == (1, u2, 1, v2, 1, w2), **step)
            _record(report, "lemma 2.8 hypothesis", lemma_2_8_hypothesis(u1, v1, w1) and lemma_2_8_hypothesis(u2, v2, w2), **step, uvw=[[u1, v1, w1], [u2, v2, w2]])
            a, c, d = u1, v2 - u1, v1 - u1
            _record(report, "lemma 2.5 hypothesis", u1 == u2 and a > 0 and 0 <= d < c, **step, a=a, c=c, d=d)
            # corroboration on the truncated representatives
            small, big = Staircase((1, a, 1, a + d)), Staircase((1, a, 1, a + c))
            try:
                _domination(report, "bounded domination of representatives", big, small, caps)
            except ResourceLimit as exc:
                report.evidence.append({"check": "bounded domination of representatives", "skipped": str(exc)})

    return _run("theorem", {"pairs": [list(x) for x in ordered]}, caps, body)


def equal_relation(report: VerificationReport) -> bool:
    return any(e.get("relation") == "equal" for e in report.evidence)


__all__ = [
    "BigCable",
    "CONFIRMED",
    "GREATER",
    "IteratedCable",
    "KFamily",
    "REFUTED",
    "RESOURCE_LIMITED",
    "SFamily",
    "TorusKnot",
    "VerificationReport",
    "build_T",
    "claimed_decomposition",
    "model_staircase",
    "verify_lemma",
    "verify_proposition",
    "witness_theorem",
]
