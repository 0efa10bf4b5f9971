"""The seven published heuristic rules, each a condition -> proposals function.

Rules only read Token annotations (pos, particle_role, conj_form, head,
lemma, surface); no morphology is inspected, so romanized and kana text
behave the same.
"""

from __future__ import annotations

import logging
from typing import Sequence

from .config import RuleConfig
from .corpus_index import CorpusIndex, latter_part_frequencies, trim_latter
from .model import Candidate, Proposal, Sentence
from .similarity import SimilarityProvider

log = logging.getLogger(__name__)

# topic/binding particles are claimed by the repetition and interrogative rules
_NON_CASE_ROLES = frozenset({"wa", "mo", "other"})


def _final_noun_particle(s: Sentence) -> tuple[int, str] | None:
    """(noun index, particle role) when the sentence ends in noun + particle."""
    end = s.content_end()
    if end is None:
        return None
    last = s.tokens[end]
    if last.pos == "particle" and last.particle_role and end > 0:
        if s.tokens[end - 1].pos == "noun":
            return end - 1, last.particle_role
        return None
    if last.pos == "noun" and last.particle_role:
        return end, last.particle_role
    return None


def _noun_particle_pairs(s: Sentence):
    """Yield (noun index, particle role, governing predicate index or None)."""
    toks = s.tokens
    for i, t in enumerate(toks):
        if t.pos != "noun":
            continue
        role, head = t.particle_role, t.head
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        if role is None and nxt is not None and nxt.pos == "particle":
            role = nxt.particle_role
            if head is None:
                head = nxt.head
        if role is not None:
            yield i, role, head


def _governing_verb(s: Sentence, i: int) -> int | None:
    head = s.tokens[i].head
    if head is not None:
        return head
    verbs = [j for j, t in enumerate(s.tokens) if t.pos == "verb"]
    if verbs:
        return verbs[-1]
    auxes = [j for j, t in enumerate(s.tokens) if t.pos == "aux"]
    return auxes[-1] if auxes else None


def rule1_no_ellipsis(s: Sentence, cfg: RuleConfig) -> list[Proposal]:
    """Sentence ends in a finite verb form or a terminal particle (YO, NE)."""
    end = s.content_end()
    if end is None:
        return []
    last = s.tokens[end]
    fires = (last.is_predicate and last.conj_form == "terminal") or (
        last.pos == "particle" and last.surface in cfg.terminal_particles
    )
    return [Proposal(Candidate.no_ellipsis(), cfg.point(1), 1)] if fires else []


def rule2_question_answer(
    s: Sentence, prev: Sentence | None, cfg: RuleConfig
) -> list[Proposal]:
    if prev is None:
        return []
    out: dict[Candidate, Proposal] = {}
    for i, t in enumerate(prev.tokens):
        if t.lemma not in cfg.interrogative_pronouns:
            continue
        v = _governing_verb(prev, i)
        if v is None:
            continue
        cand = Candidate.context_verb(prev.id, v)
        out.setdefault(cand, Proposal(cand, cfg.point(2), 2))
    return list(out.values())


def rule3_supplement_similarity(
    s: Sentence, prev: Sentence | None, sim: SimilarityProvider, cfg: RuleConfig
) -> list[Proposal]:
    """Final noun X + case particle matched against same-particle nouns Y in prev.

    Point is s*20 - 2 with s = sim(X, Y), unclamped. When several Y share a
    governing verb only the best-scoring one is kept, so a verb collects at
    most one rule-3 proposal.
    """
    if prev is None:
        return []
    end = _final_noun_particle(s)
    if end is None or end[1] in _NON_CASE_ROLES:
        return []
    x_idx, role = end
    x = s.tokens[x_idx].lemma
    best: dict[Candidate, Proposal] = {}
    try:
        for y_idx, y_role, head in _noun_particle_pairs(prev):
            if y_role != role or head is None:
                continue
            sv = float(sim.similarity(x, prev.tokens[y_idx].lemma))
            cand = Candidate.context_verb(prev.id, head)
            p = Proposal(cand, sv * cfg.rule3_scale + cfg.rule3_offset, 3)
            if cand not in best or p.point > best[cand].point:
                best[cand] = p
    except Exception as exc:  # provider is user-pluggable
        log.warning("rule 3 skipped for sentence %s: similarity failed (%s)", s.id, exc)
        return []
    return list(best.values())


def _ends_in_mo(s: Sentence) -> bool:
    end = s.content_end()
    if end is None:
        return False
    last = s.tokens[end]
    return last.particle_role == "mo" and last.pos in ("particle", "noun")


def rule4_repetition(
    s: Sentence, history: Sequence[Sentence], cfg: RuleConfig
) -> list[Proposal]:
    """Repetition of the same speaker's previous sentence.

    `history` holds the sentences before `s`, oldest first.
    """
    if not history:
        return []
    if not (_ends_in_mo(s) or any(t.lemma in cfg.repetition_markers for t in s.tokens)):
        return []
    target: Sentence | None = None
    if s.speaker is not None:
        for prior in reversed(history):
            if prior.speaker == s.speaker and prior.end_verb() is not None:
                target = prior
                break
    if target is None:
        target = history[-1]
    v = target.end_verb()
    if v is None:
        return []
    return [Proposal(Candidate.context_verb(target.id, v), cfg.point(4), 4)]


def rule5_default_previous(
    s: Sentence, prev: Sentence | None, cfg: RuleConfig | None = None
) -> list[Proposal]:
    if prev is None:
        return []
    v = prev.end_verb()
    if v is None:
        return []
    point = (cfg or RuleConfig()).point(5)
    return [Proposal(Candidate.context_verb(prev.id, v), point, 5)]


def rule6_interrogative(s: Sentence, cfg: RuleConfig | None = None) -> list[Proposal]:
    end = _final_noun_particle(s)
    if end is None or end[1] != "wa":
        return []
    return [Proposal(Candidate.interrogative(), (cfg or RuleConfig()).point(6), 6)]


def rule7_corpus(s: Sentence, index: CorpusIndex, cfg: RuleConfig) -> list[Proposal]:
    """Most frequent latter part after the longest corpus match of the sentence end."""
    query = trim_latter(s.text)
    try:
        k, occs = index.longest_suffix_matches(
            query, cfg.rule7_min_match_chars, cfg.rule7_max_window_chars
        )
    except (OSError, ValueError) as exc:
        log.warning("rule 7 skipped for sentence %s: index query failed (%s)", s.id, exc)
        return []
    if k < cfg.rule7_min_match_chars:
        return []
    freq = latter_part_frequencies(occs)
    if not freq:
        return []
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    top, f1 = ranked[0]
    f2 = ranked[1][1] if len(ranked) > 1 else 0
    point = cfg.rule7_high if f1 >= cfg.rule7_margin_ratio * f2 else cfg.rule7_low
    return [Proposal(Candidate.corpus_verb(top), point, 7)]
