"""Run the rules over a document, sum proposals per candidate, pick the winner."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

from . import rules
from .config import RuleConfig
from .corpus_index import CorpusIndex
from .model import (
    Candidate,
    Category,
    Document,
    Kind,
    Proposal,
    Resolution,
    Scored,
    validate_document,
)
from .similarity import SimilarityProvider

log = logging.getLogger(__name__)

RULE_CATEGORY = {
    1: Category.NO_ELLIPSIS,
    2: Category.QUESTION_ANSWER,
    3: Category.SUPPLEMENT,
    4: Category.SUPPLEMENT,
    5: Category.SUPPLEMENT,
    6: Category.INTERROGATIVE,
    7: Category.COMMON_SENSE,
}


def aggregate_proposals(proposals: Iterable[Proposal]) -> list[Scored]:
    """Sum points per candidate; rank by total, then the fixed tie priority."""
    groups: dict[Candidate, list[Proposal]] = {}
    for p in proposals:
        groups.setdefault(p.candidate, []).append(p)
    scored = [
        Scored(c, sum(p.point for p in ps), tuple(sorted(ps, key=lambda p: p.rule_id)))
        for c, ps in groups.items()
    ]
    scored.sort(key=lambda sc: (-sc.total, sc.candidate.priority_key()))
    return scored


def assign_category(winner: Scored) -> Category:
    kind = winner.candidate.kind
    if kind is Kind.NO_ELLIPSIS:
        return Category.NO_ELLIPSIS
    if kind is Kind.INTERROGATIVE:
        return Category.INTERROGATIVE
    # largest single contribution decides; lower rule id on ties
    top = min(winner.contributors, key=lambda p: (-p.point, p.rule_id))
    return RULE_CATEGORY[top.rule_id]


def propose(
    doc: Document,
    position: int,
    index: CorpusIndex | None,
    sim: SimilarityProvider | None,
    cfg: RuleConfig,
) -> list[Proposal]:
    s = doc.sentences[position]
    history = doc.sentences[:position]
    prev = history[-1] if history else None
    out = rules.rule1_no_ellipsis(s, cfg)
    out += rules.rule2_question_answer(s, prev, cfg)
    if sim is not None:
        out += rules.rule3_supplement_similarity(s, prev, sim, cfg)
    out += rules.rule4_repetition(s, history, cfg)
    out += rules.rule5_default_previous(s, prev, cfg)
    out += rules.rule6_interrogative(s, cfg)
    if index is not None:
        out += rules.rule7_corpus(s, index, cfg)
    return out


def _resolution(doc: Document, sid: int, ranked: list[Scored]) -> Resolution:
    if not ranked or ranked[0].candidate.kind is Kind.NO_ELLIPSIS:
        total = ranked[0].total if ranked else 0.0
        return Resolution(sid, False, Category.NO_ELLIPSIS, None, total, ranked, doc.doc_id)
    win = ranked[0]
    cand = win.candidate
    surface = lemma = None
    if cand.kind is Kind.CONTEXT_VERB:
        tok = doc.sentence_by_id(cand.sentence_id).tokens[cand.token_index]
        surface, lemma = tok.surface, tok.lemma
    elif cand.kind is Kind.CORPUS_VERB:
        surface = lemma = cand.text
    return Resolution(
        sentence_id=sid,
        has_ellipsis=True,
        category=assign_category(win),
        recovered=cand,
        total_score=win.total,
        breakdown=ranked,
        doc_id=doc.doc_id,
        recovered_surface=surface,
        recovered_lemma=lemma,
    )


def resolve_document(
    doc: Document,
    index: CorpusIndex | None = None,
    sim: SimilarityProvider | None = None,
    cfg: RuleConfig | None = None,
) -> list[Resolution]:
    """One Resolution per sentence, left to right.

    A sentence for which no rule proposes anything is reported as having no
    ellipsis, since there is nothing to recover.
    """
    cfg = cfg or RuleConfig()
    validate_document(doc)
    return [
        _resolution(doc, s.id, aggregate_proposals(propose(doc, i, index, sim, cfg)))
        for i, s in enumerate(doc.sentences)
    ]


def resolve_documents(
    docs: Sequence[Document],
    index: CorpusIndex | None = None,
    sim: SimilarityProvider | None = None,
    cfg: RuleConfig | None = None,
    workers: int = 1,
) -> list[list[Resolution]]:
    """Resolve many documents; output order follows input order."""
    if workers <= 1:
        return [resolve_document(d, index, sim, cfg) for d in docs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda d: resolve_document(d, index, sim, cfg), docs))
