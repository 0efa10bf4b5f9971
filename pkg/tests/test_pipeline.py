import itertools
import json
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from conftest import doc, load_docs, sent, tok
from verbfill.config import RuleConfig
from verbfill.corpus_index import build_index
from verbfill.model import Candidate, Category, InputError, Kind, Proposal, Scored, Token
from verbfill.pipeline import (
    aggregate_proposals,
    assign_category,
    propose,
    resolve_document,
    resolve_documents,
)
from verbfill.similarity import Thesaurus

CV = Candidate.context_verb
CORP = Candidate.corpus_verb


def test_aggregate_sums_identical_candidates():
    top = aggregate_proposals([Proposal(CV(1, 3), 5, 2), Proposal(CV(1, 3), 8, 3)])[0]
    assert (top.candidate, top.total) == (CV(1, 3), 13)
    assert [p.rule_id for p in top.contributors] == [2, 3]


def test_aggregate_fig4_score_table():
    ranked = aggregate_proposals([Proposal(CV(1, 3), 0, 5), Proposal(CORP("ARIMASU"), 1, 7)])
    assert [(s.candidate, s.total) for s in ranked] == [(CORP("ARIMASU"), 1), (CV(1, 3), 0)]


@pytest.mark.parametrize("order", list(itertools.permutations(range(2))))
def test_aggregate_tie_prefers_context_over_corpus(order):
    props = [Proposal(CV(2, 4), 5, 4), Proposal(CORP("X"), 5, 7)]
    assert aggregate_proposals([props[i] for i in order])[0].candidate == CV(2, 4)


def test_aggregate_full_tie_priority():
    cands = [Candidate.interrogative(), CORP("B"), CORP("A"), CV(1, 5), CV(2, 1), CV(2, 3),
             Candidate.no_ellipsis()]
    expected = [Candidate.no_ellipsis(), CV(2, 3), CV(2, 1), CV(1, 5), CORP("A"), CORP("B"),
                Candidate.interrogative()]
    for perm in itertools.islice(itertools.permutations(cands), 0, 5040, 37):
        ranked = aggregate_proposals([Proposal(c, 1.0, 5) for c in perm])
        assert [s.candidate for s in ranked] == expected


def test_aggregate_empty():
    assert aggregate_proposals([]) == []


def _winner(*contrib):
    cand = CV(1, 1)
    return Scored(cand, sum(p for _, p in contrib), tuple(Proposal(cand, p, r) for r, p in contrib))


@pytest.mark.parametrize("contrib, expected", [
    (((3, 8), (5, 0)), Category.SUPPLEMENT),
    (((2, 5), (4, 5)), Category.QUESTION_ANSWER),
    (((3, -2), (5, 0)), Category.SUPPLEMENT),
    (((2, 5), (3, 18), (5, 0)), Category.SUPPLEMENT),
    (((2, 5), (5, 0)), Category.QUESTION_ANSWER),
])
def test_assign_category_context(contrib, expected):
    assert assign_category(_winner(*contrib)) is expected


def test_assign_category_corpus_and_fixed_kinds():
    w = Scored(CORP("ARIMASU"), 1, (Proposal(CORP("ARIMASU"), 1, 7),))
    assert assign_category(w) is Category.COMMON_SENSE
    ne = Scored(Candidate.no_ellipsis(), 30, (Proposal(Candidate.no_ellipsis(), 30, 1),))
    assert assign_category(ne) is Category.NO_ELLIPSIS
    q = Scored(Candidate.interrogative(), 3, (Proposal(Candidate.interrogative(), 3, 6),))
    assert assign_category(q) is Category.INTERROGATIVE


def test_single_terminal_sentence_has_no_ellipsis():
    d = doc(sent(1, [tok("KUNINI", "noun"), tok("ATTA", "verb", "ARU", conj="terminal"), tok(".", "punct")]))
    (r,) = resolve_document(d)
    assert (r.has_ellipsis, r.category, r.recovered, r.total_score) == (False, Category.NO_ELLIPSIS, None, 30)


def test_question_answer_two_sentences():
    d = doc(
        sent(1, [tok("NANI", "pronoun", head=2), tok("WO", "particle", role="wo", head=2),
                 tok("KOWASHITA", "verb", "KOWASU", conj="terminal"), tok("?", "punct")]),
        sent(2, [tok("KORE", "pronoun"), tok("WO", "particle", role="wo"), tok(".", "punct")]),
    )
    r = resolve_document(d)[1]
    assert r.recovered == CV(1, 2)
    assert r.category is Category.QUESTION_ANSWER
    assert r.total_score == 5
    assert r.recovered_lemma == "KOWASU"
    assert sorted(p.rule_id for p in r.breakdown[0].contributors) == [2, 5]


def test_fig4_dialogue():
    (d,) = load_docs("fig4_dialogue.jsonl")
    corpus = "ONEGAI GA ARIMASU。\n" * 5 + "ONEGAI GA ARU。\n" * 3
    res = resolve_document(d, build_index(corpus))
    r = res[2]
    assert r.recovered == CORP("ARIMASU") and r.total_score == 1
    assert r.category is Category.COMMON_SENSE
    assert [(s.candidate, s.total) for s in r.breakdown] == [(CORP("ARIMASU"), 1), (CV(2, 1), 0)]
    assert res[0].has_ellipsis is False


def test_dangling_head_is_input_error():
    d = doc(sent(4, [tok("KAGI", "noun", head=7), tok("NAKUSHITA", "verb", conj="terminal")]))
    with pytest.raises(InputError, match="sentence 4, token 0"):
        resolve_document(d)


def test_head_must_be_predicate():
    d = doc(sent(1, [tok("KAGI", "noun", head=0)]))
    with pytest.raises(InputError, match="not a verb"):
        resolve_document(d)


def test_rule_skipping_without_resources():
    docs = load_docs("bench_docs.jsonl")
    with_idx = resolve_documents(docs, build_index("お願いがあります。"), None)
    without = resolve_documents(docs, None, None)
    for a_doc, b_doc in zip(with_idx, without):
        for a, b in zip(a_doc, b_doc):
            kept = [[p.rule_id for p in s.contributors if p.rule_id != 7] for s in a.breakdown]
            assert [k for k in kept if k] == [[p.rule_id for p in s.contributors] for s in b.breakdown]


# exhaustive rule-1 dominance over extremal point combinations

def _dominance_cases(cfg):
    c1, c2 = CV(1, 1), CV(2, 1)
    r3_points = (cfg.rule3_scale * 0 + cfg.rule3_offset, cfg.rule3_scale * 1 + cfg.rule3_offset)
    targets = (None, c1, c2)
    for r2, r4, r5 in itertools.product(targets, repeat=3):
        for r3a, r3b in itertools.product((None,) + r3_points, repeat=2):
            for r6 in (False, True):
                for r7 in (None, cfg.rule7_low, cfg.rule7_high):
                    props = [Proposal(Candidate.no_ellipsis(), cfg.point(1), 1)]
                    for rid, t in ((2, r2), (4, r4), (5, r5)):
                        if t is not None:
                            props.append(Proposal(t, cfg.point(rid), rid))
                    for t, p in ((c1, r3a), (c2, r3b)):
                        if p is not None:
                            props.append(Proposal(t, p, 3))
                    if r6:
                        props.append(Proposal(Candidate.interrogative(), cfg.point(6), 6))
                    if r7 is not None:
                        props.append(Proposal(CORP("X"), r7, 7))
                    yield props


def test_rule1_dominance_exhaustive():
    n = 0
    for props in _dominance_cases(RuleConfig()):
        assert aggregate_proposals(props)[0].candidate.kind is Kind.NO_ELLIPSIS
        n += 1
    assert n == 27 * 9 * 2 * 3


# generated documents

VOCAB = ["KAGI", "INU", "NEKO", "HON", "DARE", "NANI", "MO", "WA", "GA", "WO", "NE", "YO",
         "IKU", "ARU", "SURU", "DA", "MOTTOMO", "."]
POS = ["noun", "verb", "aux", "particle", "adverb", "pronoun", "punct", "other"]
ROLES = [None, "ga", "wo", "ni", "wa", "mo", "no", "other"]

THES = Thesaurus({"KAGI": [("a", "b", "c")], "INU": [("x", "y")], "NEKO": [("x", "z")],
                  "HON": [("a", "b", "d")]})
IDX = build_index("KAGI GA ARU。INU GA IKU。NEKO MO IKU。HON WO YOMU。HON WO KAU。")


@st.composite
def token_lists(draw):
    n = draw(st.integers(1, 6))
    toks = []
    for _ in range(n):
        w = draw(st.sampled_from(VOCAB))
        toks.append(Token(w, w, draw(st.sampled_from(POS)), draw(st.sampled_from(ROLES)),
                          draw(st.sampled_from([None, "terminal", "other"])), None))
    preds = [i for i, t in enumerate(toks) if t.is_predicate]
    if preds:
        toks = [replace(t, head=draw(st.sampled_from([None] + preds))) for t in toks]
    return toks


@st.composite
def documents(draw):
    n = draw(st.integers(1, 5))
    sents = []
    for i in range(n):
        toks = draw(token_lists())
        sents.append(sent(i + 1, toks, speaker=draw(st.sampled_from(["A", "B", None]))))
    return doc(*sents)


@pytest.mark.property
@given(documents())
@settings(max_examples=300, deadline=None)
def test_resolution_invariants(d):
    cfg = RuleConfig()
    res = resolve_document(d, IDX, THES, cfg)
    assert len(res) == len(d.sentences)
    for i, r in enumerate(res):
        assert r.sentence_id == d.sentences[i].id
        if r.breakdown:
            assert all(s.total <= r.breakdown[0].total for s in r.breakdown)
        winner = r.breakdown[0].candidate if r.breakdown else Candidate.no_ellipsis()
        assert r.has_ellipsis == (winner.kind is not Kind.NO_ELLIPSIS)
        assert (r.category is Category.INTERROGATIVE) == (winner.kind is Kind.INTERROGATIVE)
        assert (r.recovered is None) == (not r.has_ellipsis)
        for s in r.breakdown:
            if s.candidate.kind is Kind.CONTEXT_VERB:
                assert s.candidate.sentence_id < r.sentence_id
                ref = d.sentence_by_id(s.candidate.sentence_id).tokens[s.candidate.token_index]
                assert ref.is_predicate
        props = propose(d, i, IDX, THES, cfg)
        if any(p.rule_id == 1 for p in props):
            assert not r.has_ellipsis
    again = resolve_document(d, IDX, THES, cfg)
    assert [json.dumps(r.to_dict()) for r in res] == [json.dumps(r.to_dict()) for r in again]


def test_threads_match_serial():
    docs = load_docs("bench_docs.jsonl") * 4
    idx = build_index("お願いがあります。うまくいくとは思えない。")
    serial = resolve_documents(docs, idx, THES, workers=1)
    threaded = resolve_documents(docs, idx, THES, workers=8)
    dump = lambda rs: [[json.dumps(r.to_dict(), ensure_ascii=False) for r in d] for d in rs]  # noqa: E731
    assert dump(serial) == dump(threaded)
