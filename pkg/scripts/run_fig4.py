"""Resolve the bundled three-sentence dialogue against its mini-corpus and print the score table."""

from importlib import resources

from verbfill.corpus_index import build_index_from_file
from verbfill.model import read_documents
from verbfill.pipeline import resolve_document

DATA = resources.files("verbfill") / "data"


def main():
    with (DATA / "fig4_dialogue.jsonl").open(encoding="utf-8") as fh:
        (doc,) = read_documents(fh)
    idx = build_index_from_file(DATA / "fig4_corpus.txt")
    for s, r in zip(doc.sentences, resolve_document(doc, idx)):
        print(f"[{s.id}] {s.text}")
        if not r.has_ellipsis:
            print("    no ellipsis")
            continue
        print(f"    -> {r.recovered_surface}  ({r.category.value}, total {r.total_score:g})")
        for sc in r.breakdown:
            rules = ", ".join(f"rule {p.rule_id}: {p.point:g}" for p in sc.contributors)
            print(f"       {sc.candidate.to_dict()}  total {sc.total:g}  [{rules}]")


if __name__ == "__main__":
    main()
