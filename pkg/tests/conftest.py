from __future__ import annotations

from importlib import resources

import pytest

from verbfill.model import Document, Sentence, Token, read_documents

DATA = resources.files("verbfill") / "data"


def tok(surface, pos, lemma=None, role=None, conj=None, head=None) -> Token:
    return Token(surface, lemma or surface, pos, role, conj, head)


def sent(i, tokens, speaker=None, text=None) -> Sentence:
    if text is None:
        text = " ".join(t.surface for t in tokens)
    return Sentence(i, text, tuple(tokens), speaker)


def doc(*sentences, doc_id="t") -> Document:
    return Document(doc_id, tuple(sentences))


def load_docs(name: str) -> list[Document]:
    with (DATA / name).open(encoding="utf-8") as fh:
        return read_documents(fh)


class TableSimilarity:
    """Symmetric lookup table for rule-3 tests."""

    def __init__(self, pairs: dict[tuple[str, str], float]):
        self.pairs = {frozenset(k): v for k, v in pairs.items()}

    def similarity(self, a, b):
        if a == b:
            return 1.0
        return self.pairs.get(frozenset((a, b)), 0.0)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
