"""Exact search and proof auditing for forbidden subposets of the Boolean lattice."""

from .lattice import (
    DomainError,
    Family,
    FullChain,
    Interval,
    ResourceError,
    binom,
    chains_in_interval,
    full_chains,
    level,
    parse_family,
    format_family,
    sigma,
    subset,
)
from .patterns import Embedding, Pattern, contains, detect_y, dual, make_butterfly, make_chain, make_diamond, make_y, parse_pattern
from .search import SearchResult, conjecture_scan, extremal, witness_exceeding_sigma
from .constructions import equality_case_same_parity, from_levels, middle_levels, LevelSpec
from .discharging import full_audit, lym_check, double_count, moreempty_check

__version__ = "0.1.0"
