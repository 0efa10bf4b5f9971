"""Document, candidate and resolution data model plus JSON Lines codecs."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator


class InputError(ValueError):
    """Malformed input document or schema violation."""


POS_TAGS = ("noun", "verb", "aux", "particle", "adverb", "pronoun", "punct", "other")
PARTICLE_ROLES = ("ga", "wo", "ni", "de", "to", "wa", "mo", "no", "other")
CONJ_FORMS = ("terminal", "other")
PREDICATE_POS = ("verb", "aux")


class Category(str, enum.Enum):
    NO_ELLIPSIS = "NoEllipsis"
    QUESTION_ANSWER = "QuestionAnswer"
    SUPPLEMENT = "Supplement"
    INTERROGATIVE = "Interrogative"
    COMMON_SENSE = "CommonSense"

    @property
    def in_context(self) -> bool:
        return self in (Category.QUESTION_ANSWER, Category.SUPPLEMENT)


class Kind(str, enum.Enum):
    NO_ELLIPSIS = "NoEllipsis"
    CONTEXT_VERB = "ContextVerb"
    CORPUS_VERB = "CorpusVerb"
    INTERROGATIVE = "Interrogative"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    particle_role: str | None = None
    conj_form: str | None = None
    head: int | None = None

    @property
    def is_predicate(self) -> bool:
        return self.pos in PREDICATE_POS


@dataclass(frozen=True)
class Sentence:
    id: int
    text: str
    tokens: tuple[Token, ...]
    speaker: str | None = None

    def content_end(self) -> int | None:
        """Index of the last token that is not punctuation."""
        for i in range(len(self.tokens) - 1, -1, -1):
            if self.tokens[i].pos != "punct":
                return i
        return None

    def end_verb(self) -> int | None:
        """Main verb of the sentence-final predicate chain.

        The last non-punct token must be a verb or aux. Trailing auxiliaries
        are skipped back to the verb they attach to; an aux-only chain yields
        its last aux.
        """
        end = self.content_end()
        if end is None or not self.tokens[end].is_predicate:
            return None
        i = end
        while i >= 0 and self.tokens[i].is_predicate:
            if self.tokens[i].pos == "verb":
                return i
            i -= 1
        return end


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]

    def sentence_by_id(self, sid: int) -> Sentence:
        for s in self.sentences:
            if s.id == sid:
                return s
        raise KeyError(sid)


@dataclass(frozen=True)
class Candidate:
    """A possible recovered verb. Identity is the kind plus its payload."""

    kind: Kind
    sentence_id: int | None = None
    token_index: int | None = None
    text: str | None = None

    @classmethod
    def no_ellipsis(cls) -> Candidate:
        return cls(Kind.NO_ELLIPSIS)

    @classmethod
    def context_verb(cls, sentence_id: int, token_index: int) -> Candidate:
        return cls(Kind.CONTEXT_VERB, sentence_id=sentence_id, token_index=token_index)

    @classmethod
    def corpus_verb(cls, text: str) -> Candidate:
        if not text:
            raise ValueError("CorpusVerb text must be non-empty")
        return cls(Kind.CORPUS_VERB, text=text)

    @classmethod
    def interrogative(cls) -> Candidate:
        return cls(Kind.INTERROGATIVE)

    def priority_key(self) -> tuple:
        """Sort key for ties: NoEllipsis, then ContextVerb (newest sentence,
        then larger token index), then CorpusVerb (lexicographic), then
        Interrogative."""
        if self.kind is Kind.NO_ELLIPSIS:
            return (0,)
        if self.kind is Kind.CONTEXT_VERB:
            return (1, -self.sentence_id, -self.token_index)
        if self.kind is Kind.CORPUS_VERB:
            return (2, self.text)
        return (3,)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind.value}
        if self.kind is Kind.CONTEXT_VERB:
            d["sentence_id"] = self.sentence_id
            d["token_index"] = self.token_index
        elif self.kind is Kind.CORPUS_VERB:
            d["text"] = self.text
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Candidate:
        kind = Kind(d["kind"])
        if kind is Kind.CONTEXT_VERB:
            return cls.context_verb(int(d["sentence_id"]), int(d["token_index"]))
        if kind is Kind.CORPUS_VERB:
            return cls.corpus_verb(d["text"])
        return cls(kind)


@dataclass(frozen=True)
class Proposal:
    candidate: Candidate
    point: float
    rule_id: int


@dataclass(frozen=True)
class Scored:
    """One aggregated candidate: its summed point and the proposals behind it."""

    candidate: Candidate
    total: float
    contributors: tuple[Proposal, ...]


@dataclass
class Resolution:
    sentence_id: int
    has_ellipsis: bool
    category: Category
    recovered: Candidate | None
    total_score: float
    breakdown: list[Scored] = field(default_factory=list)
    doc_id: str = ""
    recovered_surface: str | None = None
    recovered_lemma: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "sentence_id": self.sentence_id,
            "has_ellipsis": self.has_ellipsis,
            "category": self.category.value,
            "recovered": self.recovered.to_dict() if self.recovered else None,
            "recovered_surface": self.recovered_surface,
            "recovered_lemma": self.recovered_lemma,
            "total_score": self.total_score,
            "breakdown": [
                {
                    "candidate": sc.candidate.to_dict(),
                    "total": sc.total,
                    "proposals": [
                        {"rule_id": p.rule_id, "point": p.point} for p in sc.contributors
                    ],
                }
                for sc in self.breakdown
            ],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Resolution:
        breakdown = []
        for row in d.get("breakdown", []):
            cand = Candidate.from_dict(row["candidate"])
            props = tuple(
                Proposal(cand, float(p["point"]), int(p["rule_id"])) for p in row["proposals"]
            )
            breakdown.append(Scored(cand, float(row["total"]), props))
        rec = d.get("recovered")
        return cls(
            sentence_id=int(d["sentence_id"]),
            has_ellipsis=bool(d["has_ellipsis"]),
            category=Category(d["category"]),
            recovered=Candidate.from_dict(rec) if rec else None,
            total_score=float(d["total_score"]),
            breakdown=breakdown,
            doc_id=d.get("doc_id", ""),
            recovered_surface=d.get("recovered_surface"),
            recovered_lemma=d.get("recovered_lemma"),
        )


# --- JSON Lines ------------------------------------------------------------

_TOKEN_KEYS = {"surface", "lemma", "pos", "particle_role", "conj_form", "head"}
_SENTENCE_KEYS = {"id", "speaker", "text", "tokens"}


def _where(doc_id: str, sid: Any = None, tok: Any = None) -> str:
    loc = f"doc {doc_id!r}"
    if sid is not None:
        loc += f", sentence {sid}"
    if tok is not None:
        loc += f", token {tok}"
    return loc


def _opt_str(d: dict, key: str, allowed: tuple[str, ...] | None, loc: str) -> str | None:
    v = d.get(key)
    if v is None:
        return None
    if not isinstance(v, str) or (allowed is not None and v not in allowed):
        raise InputError(f"{loc}: field {key!r} has invalid value {v!r}")
    return v


def _parse_token(d: Any, loc: str) -> Token:
    if not isinstance(d, dict):
        raise InputError(f"{loc}: token must be an object")
    extra = set(d) - _TOKEN_KEYS
    if extra:
        raise InputError(f"{loc}: unknown field(s) {sorted(extra)}")
    for key in ("surface", "lemma", "pos"):
        if not isinstance(d.get(key), str):
            raise InputError(f"{loc}: field {key!r} missing or not a string")
    if d["pos"] not in POS_TAGS:
        raise InputError(f"{loc}: field 'pos' has invalid value {d['pos']!r}")
    head = d.get("head")
    if head is not None and (not isinstance(head, int) or isinstance(head, bool)):
        raise InputError(f"{loc}: field 'head' must be an integer")
    return Token(
        surface=d["surface"],
        lemma=d["lemma"],
        pos=d["pos"],
        particle_role=_opt_str(d, "particle_role", PARTICLE_ROLES, loc),
        conj_form=_opt_str(d, "conj_form", CONJ_FORMS, loc),
        head=head,
    )


def validate_document(doc: Document) -> None:
    """Check ordering, head and surface invariants; raise InputError naming the spot."""
    if not doc.sentences:
        raise InputError(f"{_where(doc.doc_id)}: document has no sentences")
    prev_id = None
    for s in doc.sentences:
        if prev_id is not None and s.id <= prev_id:
            raise InputError(f"{_where(doc.doc_id, s.id)}: sentence ids not strictly increasing")
        prev_id = s.id
        for i, t in enumerate(s.tokens):
            if t.head is None:
                continue
            if not 0 <= t.head < len(s.tokens):
                raise InputError(
                    f"{_where(doc.doc_id, s.id, i)}: dangling head index {t.head}"
                )
            if not s.tokens[t.head].is_predicate:
                raise InputError(
                    f"{_where(doc.doc_id, s.id, i)}: head {t.head} is not a verb/aux"
                )
        joined = "".join(t.surface for t in s.tokens)
        if "".join(joined.split()) != "".join(s.text.split()):
            raise InputError(
                f"{_where(doc.doc_id, s.id)}: token surfaces do not spell the sentence text"
            )


def document_from_dict(d: Any) -> Document:
    if not isinstance(d, dict) or not isinstance(d.get("doc_id"), str):
        raise InputError("document: 'doc_id' missing or not a string")
    doc_id = d["doc_id"]
    extra = set(d) - {"doc_id", "sentences"}
    if extra:
        raise InputError(f"{_where(doc_id)}: unknown field(s) {sorted(extra)}")
    raw = d.get("sentences")
    if not isinstance(raw, list):
        raise InputError(f"{_where(doc_id)}: 'sentences' missing or not a list")
    sentences = []
    for n, sd in enumerate(raw):
        if not isinstance(sd, dict):
            raise InputError(f"{_where(doc_id, f'#{n}')}: sentence must be an object")
        sid = sd.get("id")
        if not isinstance(sid, int) or isinstance(sid, bool):
            raise InputError(f"{_where(doc_id, f'#{n}')}: field 'id' missing or not an integer")
        extra = set(sd) - _SENTENCE_KEYS
        if extra:
            raise InputError(f"{_where(doc_id, sid)}: unknown field(s) {sorted(extra)}")
        if not isinstance(sd.get("text"), str):
            raise InputError(f"{_where(doc_id, sid)}: field 'text' missing or not a string")
        speaker = _opt_str(sd, "speaker", None, _where(doc_id, sid))
        toks = sd.get("tokens")
        if not isinstance(toks, list):
            raise InputError(f"{_where(doc_id, sid)}: field 'tokens' missing or not a list")
        tokens = tuple(_parse_token(t, _where(doc_id, sid, i)) for i, t in enumerate(toks))
        sentences.append(Sentence(id=sid, text=sd["text"], tokens=tokens, speaker=speaker))
    doc = Document(doc_id=doc_id, sentences=tuple(sentences))
    validate_document(doc)
    return doc


def document_to_dict(doc: Document) -> dict[str, Any]:
    sentences = []
    for s in doc.sentences:
        sd: dict[str, Any] = {"id": s.id}
        if s.speaker is not None:
            sd["speaker"] = s.speaker
        sd["text"] = s.text
        sd["tokens"] = [
            {k: v for k, v in vars(t).items() if v is not None} for t in s.tokens
        ]
        sentences.append(sd)
    return {"doc_id": doc.doc_id, "sentences": sentences}


def iter_jsonl(lines: Iterable[str]) -> Iterator[tuple[int, Any]]:
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {lineno}: invalid JSON ({exc.msg})") from exc


def read_documents(lines: Iterable[str]) -> list[Document]:
    return [document_from_dict(obj) for _, obj in iter_jsonl(lines)]


def read_resolutions(lines: Iterable[str]) -> list[Resolution]:
    out = []
    for lineno, obj in iter_jsonl(lines):
        try:
            out.append(Resolution.from_dict(obj))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"line {lineno}: bad resolution record ({exc})") from exc
    return out


def dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)
