"""Import service package for reading rating, score and manifest tables."""

from .constants import HEADER_ALIASES, RATINGS_COLUMNS
from .parsers import canonical_header, parse_csv, parse_xlsx, read_table
from .readers import read_dmos, read_manifest, read_objective, read_ratings, read_report, read_view_scores

__all__ = [
    "HEADER_ALIASES",
    "RATINGS_COLUMNS",
    "canonical_header",
    "parse_csv",
    "parse_xlsx",
    "read_dmos",
    "read_manifest",
    "read_objective",
    "read_ratings",
    "read_report",
    "read_table",
    "read_view_scores",
]
