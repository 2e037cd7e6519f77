"""The case studies N = 6, 14, 57, 206 as executable data."""
from .catalog import (
    build_family,
    cm_catalog,
    involution,
    record_summary,
    verify_catalog,
    verify_cm_record,
    witness_surface,
)
from .common import CatalogCorrupt, Chart, CMRecord, CMReport, FamilyDescriptor, Witness, chart_limit
from .n6 import n6_chart, solve_square_section_n6
from .n57 import n57_rational_points
from .n206 import x206_verify

__all__ = [
    "CMRecord", "CMReport", "CatalogCorrupt", "Chart", "FamilyDescriptor", "Witness",
    "build_family", "chart_limit", "cm_catalog", "involution", "n57_rational_points",
    "n6_chart", "record_summary", "solve_square_section_n6", "verify_catalog",
    "verify_cm_record", "witness_surface", "x206_verify",
]
