"""Thesaurus-backed semantic similarity for the supplement rule.

A thesaurus file has one ``lemma<TAB>cat/sub/leaf`` line per sense. Similarity
between two lemmas is the Wu-Palmer style ratio 2*depth(lca)/(depth(a)+depth(b))
maximised over sense pairs.
"""

from __future__ import annotations

import os
from collections import defaultdict
from pathlib import Path
from typing import Protocol

MAX_DEPTH = 16


class ThesaurusParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class SimilarityProvider(Protocol):
    def similarity(self, a: str, b: str) -> float: ...


class Thesaurus:
    def __init__(self, senses: dict[str, list[tuple[str, ...]]] | None = None):
        self._senses: dict[str, list[tuple[str, ...]]] = defaultdict(list)
        for lemma, paths in (senses or {}).items():
            for p in paths:
                self.add(lemma, p)

    def add(self, lemma: str, path: tuple[str, ...]) -> None:
        if not path or len(path) > MAX_DEPTH:
            raise ValueError(f"path depth must be 1..{MAX_DEPTH}")
        if path not in self._senses[lemma]:
            self._senses[lemma].append(path)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self._senses

    def __len__(self) -> int:
        return len(self._senses)

    def senses(self, lemma: str) -> list[tuple[str, ...]]:
        return list(self._senses.get(lemma, ()))

    def similarity(self, a: str, b: str) -> float:
        sa, sb = self._senses.get(a), self._senses.get(b)
        if not sa or not sb:
            return 0.0
        best = 0.0
        for pa in sa:
            for pb in sb:
                lca = 0
                for x, y in zip(pa, pb):
                    if x != y:
                        break
                    lca += 1
                best = max(best, 2 * lca / (len(pa) + len(pb)))
        return best


def parse_thesaurus(lines) -> Thesaurus:
    th = Thesaurus()
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise ThesaurusParseError(lineno, "expected 'lemma<TAB>path'")
        lemma, path = line.split("\t", 1)
        lemma = lemma.strip()
        segs = tuple(s.strip() for s in path.strip().strip("/").split("/"))
        if not lemma:
            raise ThesaurusParseError(lineno, "empty lemma")
        if not segs or any(not s for s in segs):
            raise ThesaurusParseError(lineno, f"empty segment in path {path!r}")
        if len(segs) > MAX_DEPTH:
            raise ThesaurusParseError(lineno, f"path deeper than {MAX_DEPTH}")
        th.add(lemma, segs)
    return th


def load_thesaurus(path: str | os.PathLike) -> Thesaurus:
    with Path(path).open(encoding="utf-8") as fh:
        return parse_thesaurus(fh)
