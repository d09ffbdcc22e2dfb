"""Typed series documents, query language, and the inverted search index."""

from .document import (
    DATE,
    KW,
    NUM,
    PN,
    TEXT,
    FieldValue,
    SeriesDocument,
    canonical_number,
    doc_from_json,
    doc_to_json,
    merge_instance,
    normalize_date,
    to_document,
)
from .errors import (
    FieldNotInDistribution,
    MissingSeriesUid,
    SeriesUidMismatch,
    UnknownSeries,
)
from .index import (
    FacetDistribution,
    FieldFacet,
    MAX_PAGE_SIZE,
    MetadataIndex,
    SearchResults,
    export_csv,
    tokenize,
)
from .query import (
    And,
    FieldMatch,
    MatchAll,
    Node,
    Not,
    Or,
    ParseError,
    Phrase,
    Range,
    Term,
    compile_pattern,
    has_wildcards,
    parse_query,
    print_query,
)

__all__ = [
    "SeriesDocument",
    "FieldValue",
    "KW",
    "TEXT",
    "PN",
    "DATE",
    "NUM",
    "to_document",
    "merge_instance",
    "normalize_date",
    "canonical_number",
    "doc_to_json",
    "doc_from_json",
    "MetadataIndex",
    "SearchResults",
    "FacetDistribution",
    "FieldFacet",
    "MAX_PAGE_SIZE",
    "export_csv",
    "tokenize",
    "parse_query",
    "print_query",
    "compile_pattern",
    "has_wildcards",
    "ParseError",
    "MatchAll",
    "Term",
    "Phrase",
    "FieldMatch",
    "Range",
    "Not",
    "And",
    "Or",
    "Node",
    "MissingSeriesUid",
    "SeriesUidMismatch",
    "UnknownSeries",
    "FieldNotInDistribution",
]
