import pytest

from kfiltration.errors import Caps, NoClaim, NotLSpaceForm
from kfiltration.families import (
    CONFIRMED,
    REFUTED,
    RESOURCE_LIMITED,
    BigCable,
    IteratedCable,
    KFamily,
    SFamily,
    TorusKnot,
    a_staircase,
    build_T,
    claimed_decomposition,
    claimed_split,
    construction,
    final_form_ok,
    lemma_2_4_hypothesis,
    lemma_2_8_hypothesis,
    model_staircase,
    proposition_of,
    verify_lemma,
    verify_proposition,
    witness_theorem,
)
from kfiltration.alexander import CableWord
from kfiltration.staircase import Staircase, StairSum

S_HALVES = {
    4: (1, 4, 2),
    5: (1, 5, 2, 1),
    6: (1, 6, 2, 3, 1),
    7: (1, 7, 2, 2, 1, 3),
    8: (1, 8, 2, 4, 1, 2, 3),
    9: (1, 9, 2, 3, 1, 4, 3, 2),
}


@pytest.mark.parametrize("q", sorted(S_HALVES))
def test_s_family_staircases(q):
    assert model_staircase(SFamily(q)).half == S_HALVES[q]


def test_k_family_prefix():
    st = model_staircase(KFamily(4, 5))
    assert st.half[:10] == (1, 23, 1, 15, 1, 7, 1, 11, 1, 3)
    assert len(st.half) == 90


def test_family_validation():
    with pytest.raises(ValueError):
        KFamily(3, 5)
    with pytest.raises(ValueError):
        KFamily(4, 4)
    with pytest.raises(ValueError):
        SFamily(3)


def test_non_lspace_cable_is_refused():
    with pytest.raises(NotLSpaceForm):
        model_staircase(IteratedCable(CableWord(((2, 3), (3, 7), (2, 31)))))


def test_proposition_dispatch():
    assert proposition_of(TorusKnot(3, 7)) == ("3.4", {"p": 3, "n": 2})
    assert proposition_of(TorusKnot(4, 7)) == ("3.5", {"p": 4})
    assert proposition_of(KFamily(4, 5))[0] == "3.2"
    assert proposition_of(SFamily(5))[0] == "3.3"
    assert proposition_of(BigCable(2, 2))[0] == "3.6"
    with pytest.raises(NoClaim):
        proposition_of(TorusKnot(3, 4 + 4))


@pytest.mark.parametrize(
    "knot,expected",
    [
        (TorusKnot(4, 7), "(1, 2) + (1, 3) + (2)"),
        (BigCable(2, 2), "(1, 1, 1, 1) + (1, 3)"),
        (TorusKnot(2, 5), "2(1)"),
    ],
)
def test_claimed_decompositions(knot, expected):
    assert str(claimed_decomposition(knot)) == expected


def test_split_pieces_cover_the_staircase():
    split, times = claimed_split(SFamily(7))
    assert times == 1 and split.literal_ok
    assert sum(s.genus for s in split.summands) == model_staircase(SFamily(7)).genus


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2)])
def test_proposition_3_4(p, n):
    r = verify_proposition("3.4", {"p": p, "n": n})
    assert r.verdict == CONFIRMED
    assert [e["epsilon"] for e in r.evidence if "epsilon" in e] == [0, 0]


def test_proposition_3_2_exceeds_default_cap():
    r = verify_proposition("3.2", {"n": 4, "p": 5}, Caps())
    assert r.verdict == RESOURCE_LIMITED
    assert r.evidence[1]["holds"]


def test_unknown_claims():
    with pytest.raises(NoClaim):
        verify_proposition("9.9", {})
    with pytest.raises(NoClaim):
        verify_lemma("2.8", {"u": 1, "v": 2, "w": 1})
    with pytest.raises(NoClaim):
        verify_lemma("2.4", {"a": [2, 1], "b": [1, 3]})


def test_lemmas():
    assert verify_lemma("2.8", {"u": 2, "v": 2, "w": 1}).verdict == CONFIRMED
    assert verify_lemma("2.4", {"a": [1, 3], "b": [2, 1]}).verdict == CONFIRMED
    assert verify_lemma("2.5", {"a": 2, "c": 3, "d": 2}).verdict == CONFIRMED
    assert verify_lemma("2.6", {"a": [1, 4], "b": [2, 3]}).verdict == CONFIRMED


def test_lemma_2_6_without_hypothesis_is_recorded_not_refuted():
    r = verify_lemma("2.6", {"a": [1], "b": [5]})
    assert r.verdict == CONFIRMED
    assert r.evidence[0]["holds"] is False
    assert r.evidence[1]["epsilon"] == -1


def test_hypotheses():
    assert lemma_2_8_hypothesis(2, 2, 1) and not lemma_2_8_hypothesis(2, 2, 2)
    assert lemma_2_4_hypothesis(Staircase.of(1, 3), Staircase.of(2, 1))
    assert lemma_2_4_hypothesis(Staircase.of(1, 7), Staircase.of(1, 3))
    assert not lemma_2_4_hypothesis(Staircase.of(1, 3), Staircase.of(1, 7))


def test_construction_at_origin():
    con = construction(0, 0)
    assert (con.n_prime, con.p_prime) == (4, 5)
    assert con.A.half[:6] == (1, 7, 1, 11, 1, 3)
    assert con.obstructions0 == StairSum({Staircase.of(1, 23): 1, Staircase.of(1, 15): 1, Staircase.of(1, 19): -1})


def test_build_terminates_with_decreasing_q():
    result = build_T(0, 0)
    steps = result.certificate["steps"]
    assert len(steps) == 2
    assert steps[0]["max q"] == 11 and steps[1]["max q"] is None
    assert final_form_ok(result, a_staircase(0, 0))
    assert result.final.terms[a_staircase(0, 0)] == 1


def test_witness():
    r = witness_theorem([(1, 0), (0, 0), (0, 1)])
    assert r.verdict == CONFIRMED
    assert r.params["pairs"] == [[0, 0], [0, 1], [1, 0]]
    assert all(e.get("holds", True) for e in r.evidence)
    single = witness_theorem([(0, 0)])
    assert single.evidence[0]["relation"] == "equal"


def test_refuted_verdict_on_a_false_claim(monkeypatch):
    import kfiltration.families as fam

    # a misstated first summand fails the literal step check
    monkeypatch.setattr(fam, "_s_chunks", lambda q: [fam.Chunk((1, q + 1)), fam.Chunk((2,), open=True)])
    r = verify_proposition("3.3", {"q": 5})
    assert r.verdict == REFUTED
    assert not r.evidence[1]["holds"]


def test_refuted_verdict_on_a_false_equivalence(monkeypatch):
    import kfiltration.families as fam

    real = fam.claimed_split

    def wrong(knot):
        split, times = real(knot)
        return fam.Split(split.summands[:1], split.literal, split.literal_ok, ()), times

    monkeypatch.setattr(fam, "claimed_split", wrong)
    r = verify_proposition("3.5", {"p": 4})
    assert r.verdict == REFUTED
    assert r.evidence[-1]["epsilon"] != 0


def test_report_json_has_no_timing_by_default():
    r = verify_lemma("2.8", {"u": 2, "v": 2, "w": 1})
    assert "seconds" not in r.to_json() and "seconds" in r.to_json(timing=True)
    assert r.certificate_name() == "lemma2.8_u2_v2_w1.json"
