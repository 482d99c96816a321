"""Acceptance criteria 1-12, one test and one report line each.

Every test records a ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary, and then asserts the criterion at its stated tolerance.
"""

import json
import os
import random
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES
from kfiltration.alexander import (
    CableWord,
    closed_form_2pm1,
    closed_form_np1,
    closed_form_pcable,
    iterated_cable_alexander,
    torus_alexander,
)
from kfiltration.basis import epsilon_by_basis
from kfiltration.errors import Caps, SimplificationFailed
from kfiltration.families import (
    CONFIRMED,
    TorusKnot,
    build_T,
    construction,
    final_form_ok,
    model_staircase,
    verify_lemma,
    verify_proposition,
    witness_theorem,
)
from kfiltration.filtcx import FilteredComplex, column_homology_dimension, dual, tensor
from kfiltration.invariants import invariants, tau
from kfiltration.laurent import LaurentPoly
from kfiltration.staircase import Staircase, stairsum_to_complex, to_complex
from oracle import describe, factors_to_complex, mixed_suite, random_sum

SEED = 20261018
SUITE_SIZE = 120


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)


@pytest.fixture(scope="module")
def random_suite():
    """The shared random suite of criteria 4, 5 and 12: tensor products of staircases and duals."""
    rng = random.Random(SEED)
    suite = mixed_suite(rng, SUITE_SIZE)
    sums = [describe(f) for f in suite]
    start = time.monotonic()
    complexes = [factors_to_complex(f) for f in suite]
    records = [invariants(c) for c in complexes]
    return sums, complexes, records, time.monotonic() - start


def test_criterion_01_closed_forms():
    start = time.monotonic()
    bad = [("np1", p, n) for p in range(2, 9) for n in range(1, 6) if closed_form_np1(p, n) != torus_alexander(p, n * p + 1)]
    bad += [
        ("pcable", p, None)
        for p in range(2, 11)
        if closed_form_pcable(p) != iterated_cable_alexander(CableWord(((2, 3), (p, p + 1))))
    ]
    bad += [("2pm1", p, None) for p in range(2, 9) if closed_form_2pm1(p) != torus_alexander(p, 2 * p - 1)]
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 1.0
    report(1, ok, f"35 + 9 + 7 closed forms equal, {len(bad)} mismatches, {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_02_figure():
    poly = torus_alexander(2, 5)
    st = model_staircase(TorusKnot(2, 5))
    ok = poly == LaurentPoly.from_coeffs([1, -1, 1, -1, 1]) and st == Staircase.of(1, 1)
    report(2, ok, f"T(2,5): staircase {st}, polynomial {poly}")
    assert ok


def test_criterion_03_ground_truths():
    start = time.monotonic()
    rows, ok = [], True
    for p, q in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)]:
        c = to_complex(model_staircase(TorusKnot(p, q)))
        rec, back = invariants(c), invariants(dual(c))
        good = rec.tau == (p - 1) * (q - 1) // 2 and rec.epsilon == 1 and back.epsilon == -1
        ok &= good
        rows.append(f"T({p},{q}) tau={rec.tau} eps={rec.epsilon}/{back.epsilon}")
    unknot = invariants(FilteredComplex.unknot()).epsilon
    elapsed = time.monotonic() - start
    ok = ok and unknot == 0 and elapsed < 5.0
    report(3, ok, f"{'; '.join(rows)}; unknot eps={unknot}; {elapsed:.2f} s (< 5 s)")
    assert ok


def test_criterion_04_defining_identities(random_suite):
    sums, complexes, records, elapsed = random_suite
    bad = [
        str(s)
        for s, r in zip(sums, records)
        if not (
            r.nu in (r.tau, r.tau + 1)
            and r.nu_prime in (r.tau, r.tau - 1)
            and r.epsilon == 2 * r.tau - r.nu - r.nu_prime
            and r.epsilon in (-1, 0, 1)
        )
    ]
    sizes = [len(c) for c in complexes]
    ok = not bad and len(sums) >= 100 and max(sizes) <= 200 and elapsed < 120
    spread = {e: sum(r.epsilon == e for r in records) for e in (-1, 0, 1)}
    report(4, ok, f"{len(sums)} random tensor/dual combinations (<= {max(sizes)} generators), {len(bad)} violations, epsilon counts {spread}, {elapsed:.1f} s (< 120 s)")
    assert ok


def test_criterion_05_cross_oracle(random_suite):
    sums, complexes, records, _ = random_suite
    agree = disagree = failed = 0
    mismatches = []
    for s, c, r in zip(sums, complexes, records):
        try:
            e = epsilon_by_basis(c)
        except SimplificationFailed:
            failed += 1
            continue
        if e == r.epsilon:
            agree += 1
        else:
            disagree += 1
            mismatches.append(str(s))
    ok = disagree == 0
    report(5, ok, f"basis reading agrees on {agree}, disagrees on {disagree}, did not simplify on {failed} of {len(sums)}")
    assert ok, mismatches


def _verdicts(reports):
    return [(r.claim, r.params, r.verdict, [e.get("epsilon") for e in r.evidence if "epsilon" in e]) for r in reports]


def test_criterion_06_prop_3_4():
    start = time.monotonic()
    grid = [(2, 2), (2, 3), (3, 2), (4, 2), (5, 2)]
    reports = [verify_proposition("3.4", {"p": p, "n": n}) for p, n in grid]
    elapsed = time.monotonic() - start
    eps = [e for r in reports for e in r.evidence if "epsilon" in e]
    ok = all(r.verdict == CONFIRMED for r in reports) and all(e["epsilon"] == 0 for e in eps) and elapsed < 120
    report(6, ok, f"{len(reports)} cases, {len(eps)} equivalence checks all eps=0: {ok}, {elapsed:.1f} s (< 120 s)")
    assert ok, _verdicts(reports)


def test_criterion_07_props_3_5_3_3_3_6():
    reports = [verify_proposition("3.5", {"p": p}) for p in range(3, 7)]
    reports += [verify_proposition("3.3", {"q": q}) for q in range(4, 10)]
    reports += [verify_proposition("3.6", {"n": n, "p": p}) for n, p in [(2, 2), (3, 2), (2, 3)]]
    confirmed = sum(r.verdict == CONFIRMED for r in reports)
    ok = confirmed == len(reports)
    report(7, ok, f"{confirmed}/{len(reports)} confirmed (3.5 p=3..6, 3.3 q=4..9, 3.6 at 3 pairs)")
    assert ok, _verdicts(reports)


_RAISED = """
import json, time
from kfiltration.errors import Caps
from kfiltration.families import verify_proposition
start = time.monotonic()
r = verify_proposition("3.2", {"n": 4, "p": 5}, Caps(max_generators=1_000_000, claim_budget=600))
print(json.dumps({"verdict": r.verdict, "evidence": r.evidence, "seconds": time.monotonic() - start}))
"""


def _raised_cap_run() -> str:
    """The same claim with the generator cap lifted to 10^6, in a separate process."""
    if os.environ.get("KFILTRATION_SKIP_RAISED_CAP"):
        return "raised-cap run skipped"
    proc = subprocess.run([sys.executable, "-c", _RAISED], capture_output=True, text=True, timeout=900, check=False)
    if proc.returncode:
        return f"raised-cap run failed: {proc.stderr.strip().splitlines()[-1:]}"
    doc = json.loads(proc.stdout)
    eps = [e["epsilon"] for e in doc["evidence"] if "epsilon" in e]
    return f"with the cap at 10^6: {doc['verdict']}, eps={eps}, {doc['seconds']:.0f} s"


def test_criterion_08_prop_3_2():
    start = time.monotonic()
    r = verify_proposition("3.2", {"n": 4, "p": 5}, Caps(max_generators=50_000))
    elapsed = time.monotonic() - start
    stated = next(e for e in r.evidence if e["check"] == "stated steps")
    prefix_ok = stated["holds"] and stated["computed"] == [1, 23, 1, 15, 1, 7, 1, 11, 1, 3]
    ok = prefix_ok and r.verdict == CONFIRMED and elapsed < 600
    limit = next((e["detail"] for e in r.evidence if e["check"] == "resources"), "")
    report(
        8,
        ok,
        f"prefix {'matches' if prefix_ok else 'differs'}; verdict {r.verdict} under the 5*10^4 cap"
        + (f" ({limit})" if limit else "")
        + f"; {_raised_cap_run()}",
    )
    assert ok


def test_criterion_09_lemma_2_8():
    reports = [verify_lemma("2.8", {"u": u, "v": v, "w": w}) for u, v, w in [(2, 2, 1), (3, 5, 2), (4, 4, 3)]]
    eps = [[e["epsilon"] for e in r.evidence if "epsilon" in e] for r in reports]
    ok = all(r.verdict == CONFIRMED for r in reports) and all(pair == [1, 1] for pair in eps)
    report(9, ok, f"eps(A - B), eps(2B - A) = {eps}")
    assert ok


def test_criterion_10_bounded_domination():
    reports = [
        verify_lemma("2.4", {"a": [1, 3], "b": [2, 1]}),
        verify_lemma("2.5", {"a": 2, "c": 3, "d": 2}),
    ]
    verdicts = [e["verdicts"] for r in reports for e in r.evidence if "verdicts" in e]
    ok = all(r.verdict == CONFIRMED for r in reports) and all(v == ["greater"] * 3 for v in verdicts)
    report(10, ok, f"N=3 verdicts: lemma 2.4 (1,3) vs (2,1) {verdicts[0]}; lemma 2.5 a=2 c=3 d=2 {verdicts[1]}")
    assert ok


def test_criterion_11_build_and_witness():
    start = time.monotonic()
    result = build_T(0, 0)
    steps = result.certificate["steps"]
    qs = [s["max q"] for s in steps]
    decreasing = all(a is None or (b is None or b < a) for a, b in zip([23] + qs, qs))
    final_ok = final_form_ok(result, construction(0, 0).A)
    certified = all(all("reason" in a for a in s["absorbed"]) for s in steps)
    w = witness_theorem([(0, 0), (0, 1), (1, 0)])
    elapsed = time.monotonic() - start
    ok = decreasing and final_ok and certified and w.verdict == CONFIRMED and elapsed < 60
    report(11, ok, f"build_T(0,0) ends after {len(steps)} steps, max q {qs}, final form ok {final_ok}; witness {w.verdict}; {elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_12_structure(random_suite):
    sums, complexes, _, _ = random_suite
    rng = random.Random(SEED + 1)
    checked = 0
    for c in complexes:
        c.validate()
        dual(c).validate()
        assert column_homology_dimension(c) == 1
        checked += 1
    additive = 0
    for _ in range(50):
        a = stairsum_to_complex(random_sum(rng, 14))
        b = stairsum_to_complex(random_sum(rng, 14))
        ab = tensor(a, b)
        ab.validate()
        additive += tau(ab) == tau(a) + tau(b)
    ok = additive == 50
    report(12, ok, f"d^2=0 and dim H(C{{i=0}})=1 on {checked} complexes and their duals; tau additive on {additive}/50 pairs")
    assert ok
