"""Longest common substring of d out of m documents, from constant to linear workspace."""
from .approx import ApproxResult, Decision, approximate_lcs, decide
from .corpus import Corpus, CorpusError, DocSpan, Window, load_corpus, resolve
from .exact import ExactResult, InvariantViolation, build_window_lists, exact_lcs
from .matcher import count_containing_documents, find_occurrences, shortest_period_capped
from .meter import METER, WorkspaceMeter
from .oracle import brute_force_lcs, classic_lcs, element_bidistinctness

__all__ = [
    "ApproxResult", "Corpus", "CorpusError", "Decision", "DocSpan", "ExactResult", "InvariantViolation",
    "METER", "Window", "WorkspaceMeter", "approximate_lcs", "brute_force_lcs", "build_window_lists",
    "classic_lcs", "count_containing_documents", "decide", "element_bidistinctness", "exact_lcs",
    "find_occurrences", "load_corpus", "resolve", "shortest_period_capped",
]
