"""Unsupervised structure discovery and record extraction for fixed-column
text reports."""

from .extraction import ExtractionPlan, Record, build_plan, extract
from .hierarchy import HierarchyResult, Pattern, build_hierarchy, collapse_runs, render_dss
from .pipeline import RunConfig, analyze, read_document, run_extraction
from .scoring import (
    DEFAULT_MAP,
    EVEN_MAP,
    adapt_map,
    classify_char,
    classify_event,
    compare_lines,
    position_roles,
    vary_element,
)
from .templates import Template, TemplateSet, detect_templates, gap_threshold, match_line

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MAP",
    "EVEN_MAP",
    "ExtractionPlan",
    "HierarchyResult",
    "Pattern",
    "Record",
    "RunConfig",
    "Template",
    "TemplateSet",
    "adapt_map",
    "analyze",
    "build_hierarchy",
    "build_plan",
    "classify_char",
    "classify_event",
    "collapse_runs",
    "compare_lines",
    "detect_templates",
    "extract",
    "gap_threshold",
    "match_line",
    "position_roles",
    "read_document",
    "render_dss",
    "run_extraction",
    "vary_element",
]
