"""verbfill command line: index a corpus, resolve documents, evaluate output."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .corpus_index import (
    CorpusDecodeError,
    IndexLoadError,
    build_index_from_file,
    load_index,
    save_index,
)
from .evaluation import (
    EvaluationError,
    evaluate,
    format_table,
    metrics_json,
    parse_lemma_map,
    read_gold,
)
from .model import InputError, dumps, read_documents, read_resolutions
from .pipeline import resolve_documents
from .similarity import ThesaurusParseError, load_thesaurus

log = logging.getLogger("verbfill")

EXIT_USAGE = 2


def _fail(msg: str) -> int:
    print(f"verbfill: error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def cmd_index(args) -> int:
    try:
        idx = build_index_from_file(args.corpus)
        save_index(idx, args.output)
    except (OSError, CorpusDecodeError) as exc:
        return _fail(str(exc))
    print(f"sentences: {idx.n_sentences}  text length: {len(idx)}")
    return 0


def cmd_resolve(args) -> int:
    try:
        cfg = load_config(args.config).with_overrides(
            rule7_max_window_chars=args.window,
            rule7_min_match_chars=args.min_match,
            rule7_margin_ratio=args.margin_ratio,
        )
        with open(args.docs, encoding="utf-8") as fh:
            docs = read_documents(fh)
        index = load_index(args.index) if args.index else None
        sim = load_thesaurus(args.thesaurus) if args.thesaurus else None
    except (OSError, InputError, IndexLoadError, ThesaurusParseError, ValueError) as exc:
        return _fail(str(exc))
    if index is None:
        log.warning("no --index given; corpus rule (7) skipped")
    if sim is None:
        log.warning("no --thesaurus given; similarity rule (3) skipped")
    results = resolve_documents(docs, index, sim, cfg, workers=args.workers)
    out = sys.stdout
    for doc_res in results:
        for r in doc_res:
            out.write(dumps(r.to_dict()) + "\n")
    return 0


def cmd_evaluate(args) -> int:
    try:
        with open(args.preds, encoding="utf-8") as fh:
            preds = read_resolutions(fh)
        with open(args.gold, encoding="utf-8") as fh:
            gold = read_gold(fh)
        lemma_map = None
        if args.lemmas:
            with open(args.lemmas, encoding="utf-8") as fh:
                lemma_map = parse_lemma_map(fh)
        m = evaluate(preds, gold, lemma_map)
    except (OSError, InputError, EvaluationError) as exc:
        return _fail(str(exc))
    print(format_table(m))
    print(metrics_json(m))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verbfill", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("index", help="build a suffix-array index over a raw corpus")
    pi.add_argument("corpus", type=Path)
    pi.add_argument("-o", "--output", type=Path, required=True)
    pi.set_defaults(func=cmd_index)

    pr = sub.add_parser("resolve", help="resolve sentence-final verb ellipses")
    pr.add_argument("docs", type=Path)
    pr.add_argument("--index", type=Path)
    pr.add_argument("--thesaurus", type=Path)
    pr.add_argument("--config", type=Path, help="JSON or TOML; defaults to $VERBFILL_CONFIG")
    pr.add_argument("--window", type=int, help="corpus match window (code points)")
    pr.add_argument("--min-match", type=int, help="minimum corpus match length")
    pr.add_argument("--margin-ratio", type=float, help="top/second frequency ratio for 9 points")
    pr.add_argument("--workers", type=int, default=1)
    pr.set_defaults(func=cmd_resolve)

    pe = sub.add_parser("evaluate", help="score predictions against gold")
    pe.add_argument("preds", type=Path)
    pe.add_argument("gold", type=Path)
    pe.add_argument("--lemmas", type=Path, help="surface<TAB>lemma table for corpus verbs")
    pe.set_defaults(func=cmd_evaluate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
