"""Sentence-final verb ellipsis resolution with scored rules and corpus examples."""

from .config import RuleConfig, load_config
from .corpus_index import (
    CorpusIndex,
    Occurrence,
    build_index,
    latter_part_frequencies,
    load_index,
    save_index,
)
from .evaluation import GoldEntry, Metrics, evaluate, match_prediction
from .model import (
    Candidate,
    Category,
    Document,
    InputError,
    Kind,
    Proposal,
    Resolution,
    Sentence,
    Token,
)
from .pipeline import aggregate_proposals, assign_category, resolve_document, resolve_documents
from .similarity import SimilarityProvider, Thesaurus, load_thesaurus

__all__ = [
    "Candidate", "Category", "CorpusIndex", "Document", "GoldEntry", "InputError", "Kind",
    "Metrics", "Occurrence", "Proposal", "Resolution", "RuleConfig", "Sentence",
    "SimilarityProvider", "Thesaurus", "Token", "aggregate_proposals", "assign_category",
    "build_index", "evaluate", "latter_part_frequencies", "load_config", "load_index",
    "load_thesaurus", "match_prediction", "resolve_document", "resolve_documents", "save_index",
]
