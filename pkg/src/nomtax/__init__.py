"""nomtax: noun-class lexical semantics pipeline.

Parses a class-annotated dictionary into records, grounds definitions in a
WordNet noun taxonomy through embedding similarity, scores class-hypernym
association with weighted PMI, and trains a linear classification baseline
over the same embeddings.
"""

__version__ = "0.1.0"

from .classes import ClassLabel, make_class_label
from .embeddings import (
    EmbeddingStore,
    SimilarityMatch,
    StoreManifest,
    cosine,
    load_store,
    text_key,
    top_k_matches,
    write_store,
)
from .records import (
    CorrectionTable,
    LexicalRecord,
    ParseWarning,
    RawEntry,
    class_distribution,
    filter_top_classes,
    parse_entry_page,
)
from .taxonomy import (
    JointDistribution,
    build_joint,
    class_cohesion,
    descriptor_table,
    hypernym_weights,
    match_records,
    pmi,
    total_dependency,
    wpmi,
)
from .wordnet import SynsetId, TaxonomyGraph, hypernym_paths, is_hyponym_of, parse_wordnet

__all__ = [
    "ClassLabel",
    "CorrectionTable",
    "EmbeddingStore",
    "JointDistribution",
    "LexicalRecord",
    "ParseWarning",
    "RawEntry",
    "SimilarityMatch",
    "StoreManifest",
    "SynsetId",
    "TaxonomyGraph",
    "build_joint",
    "class_cohesion",
    "class_distribution",
    "cosine",
    "descriptor_table",
    "filter_top_classes",
    "hypernym_paths",
    "hypernym_weights",
    "is_hyponym_of",
    "load_store",
    "make_class_label",
    "match_records",
    "parse_entry_page",
    "parse_wordnet",
    "pmi",
    "text_key",
    "top_k_matches",
    "total_dependency",
    "wpmi",
    "write_store",
]
