"""Knowledge base: five collections, full-text and vector search, term standardization."""

from .index import Embedder, HashingEmbedder, IndexError_, InvertedIndex, VectorIndex, cosine
from .store import (
    COLLECTIONS,
    REFERENCE_RE,
    Hit,
    ImportIssue,
    ImportReport,
    KbError,
    KbRecord,
    KnowledgeBase,
    SchemaError,
    Standardized,
    append_records,
    fixture_dir,
    load_fixture_kb,
    make_record,
    ne_values,
)
from .tokenizer import Token, Tokenizer, default_lexicon, default_tokenizer, is_cjk, read_lexicon

__all__ = [
    "COLLECTIONS",
    "Embedder",
    "HashingEmbedder",
    "Hit",
    "ImportIssue",
    "ImportReport",
    "IndexError_",
    "InvertedIndex",
    "KbError",
    "KbRecord",
    "KnowledgeBase",
    "REFERENCE_RE",
    "SchemaError",
    "Standardized",
    "Token",
    "Tokenizer",
    "VectorIndex",
    "append_records",
    "cosine",
    "default_lexicon",
    "default_tokenizer",
    "fixture_dir",
    "is_cjk",
    "load_fixture_kb",
    "make_record",
    "ne_values",
    "read_lexicon",
]
