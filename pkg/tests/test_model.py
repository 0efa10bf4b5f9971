import json

import pytest

from conftest import DATA, load_docs
from verbfill.model import (
    Candidate,
    InputError,
    Resolution,
    document_from_dict,
    document_to_dict,
    read_documents,
)
from verbfill.pipeline import resolve_document


def _raw():
    with (DATA / "bench_docs.jsonl").open(encoding="utf-8") as fh:
        return json.loads(fh.readline())


def test_roundtrip_document():
    raw = _raw()
    assert document_to_dict(document_from_dict(raw)) == raw


@pytest.mark.parametrize("mutate, msg", [
    (lambda d: d["sentences"][0]["tokens"][0].update(pos="verbal"), "token 0: field 'pos'"),
    (lambda d: d["sentences"][1].pop("text"), "sentence 2: field 'text'"),
    (lambda d: d["sentences"][0]["tokens"][0].update(head=99), "dangling head"),
    (lambda d: d["sentences"][0]["tokens"][0].update(particle_role="xx"), "particle_role"),
    (lambda d: d["sentences"][0]["tokens"][0].update(extra=1), "unknown field"),
    (lambda d: d["sentences"][1].update(id=1), "strictly increasing"),
    (lambda d: d["sentences"][0].update(text="SOMETHING ELSE"), "do not spell"),
    (lambda d: d.update(sentences=[]), "no sentences"),
])
def test_schema_errors_name_location(mutate, msg):
    raw = _raw()
    mutate(raw)
    with pytest.raises(InputError, match=msg):
        document_from_dict(raw)


def test_bad_json_line():
    with pytest.raises(InputError, match="line 2"):
        read_documents(["", "{not json"])


def test_corpus_verb_must_be_nonempty():
    with pytest.raises(ValueError):
        Candidate.corpus_verb("")


def test_resolution_json_roundtrip():
    for d in load_docs("bench_docs.jsonl"):
        for r in resolve_document(d):
            back = Resolution.from_dict(json.loads(json.dumps(r.to_dict())))
            assert back.to_dict() == r.to_dict()


def test_end_verb_skips_trailing_aux():
    d = load_docs("bench_docs.jsonl")[0]
    assert d.sentences[0].end_verb() == 2
    assert d.sentences[1].end_verb() is None
