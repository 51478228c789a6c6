"""Synthetic documents with ground truth, and brute-force oracles."""

from .figure3 import FIGURE3_COUNTS_200, FIGURE3_DSS, FIGURE3_ROLES, figure3_document, figure3_line
from .generator import (
    FieldSpec,
    GroundTruth,
    NoiseSpec,
    PatternSpec,
    StructureSpec,
    TemplateSpec,
    gen_document,
    random_spec,
    single_line_spec,
)
from .layout import place
from .oracles import oracle_repeats, oracle_score

__all__ = [
    "FIGURE3_COUNTS_200",
    "FIGURE3_DSS",
    "FIGURE3_ROLES",
    "figure3_document",
    "figure3_line",
    "FieldSpec",
    "GroundTruth",
    "NoiseSpec",
    "PatternSpec",
    "StructureSpec",
    "TemplateSpec",
    "gen_document",
    "random_spec",
    "single_line_spec",
    "place",
    "oracle_repeats",
    "oracle_score",
]
