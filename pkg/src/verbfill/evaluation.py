"""Recall/precision scoring against gold annotations, broken down by category.

Recall is correct / sentences that truly end in an ellipsis; precision is
correct / sentences the system judged elliptical. Sentences with no ellipsis
on either side enter neither denominator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .corpus_index import trim_latter
from .model import Category, InputError, Kind, Resolution, iter_jsonl


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class GoldEntry:
    sentence_id: int
    has_ellipsis: bool
    category: Category
    acceptable_lemmas: frozenset[str] = frozenset()
    doc_id: str = ""

    def __post_init__(self):
        if self.has_ellipsis == (self.category is Category.NO_ELLIPSIS):
            raise ValueError(
                f"sentence {self.sentence_id}: has_ellipsis inconsistent with category"
            )
        needs = self.has_ellipsis and self.category is not Category.INTERROGATIVE
        if needs != bool(self.acceptable_lemmas):
            raise ValueError(
                f"sentence {self.sentence_id}: acceptable_lemmas must be non-empty "
                "exactly for non-interrogative ellipses"
            )

    @property
    def key(self) -> tuple[str, int]:
        return self.doc_id, self.sentence_id

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> GoldEntry:
        return cls(
            sentence_id=int(d["sentence_id"]),
            has_ellipsis=bool(d["has_ellipsis"]),
            category=Category(d["category"]),
            acceptable_lemmas=frozenset(d.get("acceptable_lemmas", ())),
            doc_id=d.get("doc_id", ""),
        )


def read_gold(lines: Iterable[str]) -> list[GoldEntry]:
    out = []
    for lineno, obj in iter_jsonl(lines):
        try:
            out.append(GoldEntry.from_dict(obj))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"gold line {lineno}: {exc}") from exc
    return out


@dataclass
class Counts:
    correct: int = 0
    gold_ellipses: int = 0
    predicted_ellipses: int = 0

    @property
    def recall(self) -> float | None:
        return self.correct / self.gold_ellipses if self.gold_ellipses else None

    @property
    def precision(self) -> float | None:
        return self.correct / self.predicted_ellipses if self.predicted_ellipses else None

    def add(self, other: Counts) -> None:
        self.correct += other.correct
        self.gold_ellipses += other.gold_ellipses
        self.predicted_ellipses += other.predicted_ellipses


LEAF_CATEGORIES = (
    Category.QUESTION_ANSWER,
    Category.SUPPLEMENT,
    Category.INTERROGATIVE,
    Category.COMMON_SENSE,
)


@dataclass
class Metrics:
    per_category: dict[Category, Counts] = field(
        default_factory=lambda: {c: Counts() for c in LEAF_CATEGORIES}
    )

    def _sum(self, cats) -> Counts:
        out = Counts()
        for c in cats:
            out.add(self.per_category[c])
        return out

    @property
    def total(self) -> Counts:
        return self._sum(LEAF_CATEGORIES)

    @property
    def in_context(self) -> Counts:
        return self._sum(c for c in LEAF_CATEGORIES if c.in_context)

    @property
    def not_in_context(self) -> Counts:
        return self._sum(c for c in LEAF_CATEGORIES if not c.in_context)

    def rows(self) -> list[tuple[str, int, Counts]]:
        """(label, indent level, counts) in Table-2 order."""
        pc = self.per_category
        return [
            ("Total", 0, self.total),
            ("In the context", 1, self.in_context),
            ("Question-Answer", 2, pc[Category.QUESTION_ANSWER]),
            ("Supplement", 2, pc[Category.SUPPLEMENT]),
            ("Not in the context", 1, self.not_in_context),
            ("Interrogative sentence", 2, pc[Category.INTERROGATIVE]),
            ("Other ellipses", 2, pc[Category.COMMON_SENSE]),
        ]

    def to_dict(self) -> dict[str, Any]:
        def row(c: Counts) -> dict[str, Any]:
            return {
                "correct": c.correct,
                "gold_ellipses": c.gold_ellipses,
                "predicted_ellipses": c.predicted_ellipses,
                "recall": c.recall,
                "precision": c.precision,
            }

        return {
            "total": row(self.total),
            "in_context": row(self.in_context),
            "not_in_context": row(self.not_in_context),
            "categories": {c.value: row(self.per_category[c]) for c in LEAF_CATEGORIES},
        }


def recovered_lemma(pred: Resolution, lemma_map: Mapping[str, str] | None = None) -> str | None:
    rec = pred.recovered
    if rec is None:
        return None
    if rec.kind is Kind.CORPUS_VERB:
        s = trim_latter(rec.text)
        return (lemma_map or {}).get(s, s)
    return pred.recovered_lemma


def match_prediction(
    pred: Resolution, gold: GoldEntry, lemma_map: Mapping[str, str] | None = None
) -> bool:
    if (pred.doc_id, pred.sentence_id) != gold.key:
        raise EvaluationError(
            f"prediction {pred.doc_id!r}/{pred.sentence_id} paired with gold "
            f"{gold.doc_id!r}/{gold.sentence_id}"
        )
    if not (pred.has_ellipsis and gold.has_ellipsis):
        return False
    if gold.category is Category.INTERROGATIVE or pred.category is Category.INTERROGATIVE:
        return gold.category is pred.category
    return recovered_lemma(pred, lemma_map) in gold.acceptable_lemmas


def evaluate(
    preds: Iterable[Resolution],
    gold: Iterable[GoldEntry],
    lemma_map: Mapping[str, str] | None = None,
) -> Metrics:
    """Score predictions; ids must align one-to-one with the gold entries.

    Gold ellipses count under the gold category. A correct prediction counts
    under the gold category too; a wrong one under its predicted category.
    """
    gold_by_key: dict[tuple[str, int], GoldEntry] = {}
    for g in gold:
        if g.key in gold_by_key:
            raise EvaluationError(f"duplicate gold entry {g.doc_id!r}/{g.sentence_id}")
        gold_by_key[g.key] = g
    if not gold_by_key:
        raise EvaluationError("gold set is empty")
    m = Metrics()
    seen = set()
    for p in preds:
        key = (p.doc_id, p.sentence_id)
        g = gold_by_key.get(key)
        if g is None:
            raise EvaluationError(f"no gold entry for doc {p.doc_id!r}, sentence {p.sentence_id}")
        if key in seen:
            raise EvaluationError(f"duplicate prediction for {p.doc_id!r}/{p.sentence_id}")
        seen.add(key)
        if g.has_ellipsis:
            m.per_category[g.category].gold_ellipses += 1
        if p.has_ellipsis:
            if match_prediction(p, g, lemma_map):
                m.per_category[g.category].correct += 1
                m.per_category[g.category].predicted_ellipses += 1
            else:
                m.per_category[p.category].predicted_ellipses += 1
    missing = sorted(set(gold_by_key) - seen)
    if missing:
        d, s = missing[0]
        raise EvaluationError(
            f"{len(missing)} gold entries without a prediction, first: doc {d!r}, sentence {s}"
        )
    return m


def _cell(num: int, den: int, rate: float | None, width: int) -> str:
    pct = "---" if rate is None else f"{100 * rate:.0f}"
    return f"{pct:>3}% ({num:>{width}}/{den:>{width}})"


def format_table(m: Metrics) -> str:
    rows = m.rows()
    width = max(2, *(len(str(max(c.gold_ellipses, c.predicted_ellipses))) for _, _, c in rows))
    label_w = max(len(label) + 2 * lvl for label, lvl, _ in rows)
    lines = [f"{'':<{label_w}}  {'Recall':<{width * 2 + 8}}  Precision"]
    for label, lvl, c in rows:
        name = ("  " * lvl + label).ljust(label_w)
        lines.append(
            f"{name}  {_cell(c.correct, c.gold_ellipses, c.recall, width)}"
            f"  {_cell(c.correct, c.predicted_ellipses, c.precision, width)}"
        )
    return "\n".join(lines)


def metrics_json(m: Metrics) -> str:
    return json.dumps(m.to_dict(), indent=2)


def parse_lemma_map(lines: Iterable[str]) -> dict[str, str]:
    """``surface<TAB>lemma`` lines, used to normalise corpus-recovered strings."""
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise InputError(f"lemma map line {lineno}: expected 'surface<TAB>lemma'")
        out[parts[0].strip()] = parts[1].strip()
    return out
