"""Certified topological entropy of Lorenz interval maps.

The entropy of a Lorenz map is bracketed by bisecting over the slope of the
uniform (constant-slope) family and comparing critical itineraries
lexicographically; independent Markov, Parry, and word-count oracles are
included for cross-checking.
"""

from .engine import (
    EntropyResult,
    IterationRecord,
    entropy_bracket_invariant_check,
    estimate_entropy,
    estimate_entropy_from_critical,
    expected_iterations,
)
from .expressions import MapExpression, ParseError, parse_expression
from .kneading import (
    CriticalItineraries,
    EmbeddingReport,
    EmbedStatus,
    KneadingComparison,
    Membership,
    check_embedding,
    count_words,
    critical_itineraries,
    entropy_estimate_wordcount,
    hs_member,
    kneading_compare,
)
from .maps import (
    AdmissiblePair,
    InvalidMapError,
    LorenzMapSpec,
    Orientation,
    ValidationReport,
    eval_map,
    eval_uniform,
    itinerary,
    load_map_spec,
    validate_lorenz,
)
from .oracles import (
    MarkovPartitionModel,
    NotMarkovError,
    build_markov,
    parry_reference,
    spectral_radius,
)
from .words import CodingValue, SymbolWord, WordOrder, coding_map, lex_compare, metric_d, shift

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePair",
    "CodingValue",
    "CriticalItineraries",
    "EmbeddingReport",
    "EmbedStatus",
    "EntropyResult",
    "InvalidMapError",
    "IterationRecord",
    "KneadingComparison",
    "LorenzMapSpec",
    "MapExpression",
    "MarkovPartitionModel",
    "Membership",
    "NotMarkovError",
    "Orientation",
    "ParseError",
    "SymbolWord",
    "ValidationReport",
    "WordOrder",
    "build_markov",
    "check_embedding",
    "coding_map",
    "count_words",
    "critical_itineraries",
    "entropy_bracket_invariant_check",
    "entropy_estimate_wordcount",
    "estimate_entropy",
    "estimate_entropy_from_critical",
    "eval_map",
    "eval_uniform",
    "expected_iterations",
    "hs_member",
    "itinerary",
    "kneading_compare",
    "lex_compare",
    "load_map_spec",
    "metric_d",
    "parry_reference",
    "parse_expression",
    "shift",
    "spectral_radius",
    "validate_lorenz",
]
