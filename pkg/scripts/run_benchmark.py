"""Run the 20-sentence bundled benchmark end to end and print the recall/precision table.

Usage: python scripts/run_benchmark.py [--workers N]
"""

import argparse
import time
from importlib import resources

from verbfill.corpus_index import build_index_from_file
from verbfill.evaluation import evaluate, format_table, parse_lemma_map, read_gold
from verbfill.model import read_documents, read_resolutions
from verbfill.pipeline import resolve_documents
from verbfill.similarity import load_thesaurus

DATA = resources.files("verbfill") / "data"


def _lines(name):
    with (DATA / name).open(encoding="utf-8") as fh:
        return fh.readlines()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    docs = read_documents(_lines("bench_docs.jsonl"))
    idx = build_index_from_file(DATA / "bench_corpus.txt")
    sim = load_thesaurus(DATA / "bench_thesaurus.tsv")
    preds = [r for d in resolve_documents(docs, idx, sim, workers=args.workers) for r in d]
    trace = read_resolutions(_lines("bench_trace.jsonl"))
    agree = sum(
        (p.recovered, p.category, p.has_ellipsis) == (t.recovered, t.category, t.has_ellipsis)
        for p, t in zip(preds, trace)
    )
    print(f"hand-trace agreement: {agree}/{len(trace)}  ({time.perf_counter() - t0:.3f}s)\n")
    m = evaluate(preds, read_gold(_lines("bench_gold.jsonl")), parse_lemma_map(_lines("bench_lemmas.tsv")))
    print(format_table(m))


if __name__ == "__main__":
    main()
