"""Exact computations of gl2 link homology, Rozansky-Willis homology of
links in connected sums of S^1 x S^2, and skein lasagna module dimensions
of 2-handlebodies, everything over Q."""

from .cobcat import FrobeniusSpec, KHOVANOV, LEE
from .diagram import DiagramError, LinkDiagram, parse_diagram
from .gradings import DimTable, Grading, Window, parse_window

__all__ = [
    "DiagramError",
    "DimTable",
    "FrobeniusSpec",
    "Grading",
    "KHOVANOV",
    "LEE",
    "LinkDiagram",
    "Window",
    "parse_diagram",
    "parse_window",
]
