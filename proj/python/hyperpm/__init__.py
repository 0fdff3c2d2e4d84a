"""Subhypergraph matching over labelled hypergraphs."""

from ._core import (
    CapacityError,
    ContractViolation,
    Error,
    GenerationError,
    Hypergraph,
    LabelTable,
    NormalizationError,
    ParseError,
    ReferenceError,
    ScaleGuardError,
    SignatureIndex,
    ValidationError,
    gen_query,
    gen_random_hypergraph,
    load,
    match,
    numbered_labels,
    oracle_subsets,
    oracle_vertexiso,
    parse,
    run_cli,
    serialize,
    validate_query,
)

__all__ = [
    "CapacityError",
    "ContractViolation",
    "Error",
    "GenerationError",
    "Hypergraph",
    "LabelTable",
    "NormalizationError",
    "ParseError",
    "ReferenceError",
    "ScaleGuardError",
    "SignatureIndex",
    "ValidationError",
    "gen_query",
    "gen_random_hypergraph",
    "load",
    "match",
    "numbered_labels",
    "oracle_subsets",
    "oracle_vertexiso",
    "parse",
    "run_cli",
    "serialize",
    "validate_query",
]
