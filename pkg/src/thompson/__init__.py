"""Exact computation in Thompson's group F and its eventually periodic extension."""

from .diagrams import (
    IDENTITY,
    TreeDiagram,
    apply,
    conj,
    fixed_set,
    generator,
    hamming,
    inverse,
    multiply,
    parse_element,
    slope,
    support,
)
from .errors import ConstraintError, DepthError, DomainError, ParseError, StructureError, ThompsonError
from .numbers import Point, canonicalize, from_fraction, parse_point, to_fraction
from .wordcalc import GroupWord, diagram_to_word, parse_word, word_to_diagram

__all__ = [
    "IDENTITY",
    "TreeDiagram",
    "apply",
    "conj",
    "fixed_set",
    "generator",
    "hamming",
    "inverse",
    "multiply",
    "parse_element",
    "slope",
    "support",
    "ConstraintError",
    "DepthError",
    "DomainError",
    "ParseError",
    "StructureError",
    "ThompsonError",
    "Point",
    "canonicalize",
    "from_fraction",
    "parse_point",
    "to_fraction",
    "GroupWord",
    "diagram_to_word",
    "parse_word",
    "word_to_diagram",
]
