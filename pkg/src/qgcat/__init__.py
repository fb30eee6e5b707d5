"""Exact computations with two-coloured and cyclically extended
representation categories of compact matrix quantum groups.

Everything is computed over the Gaussian rationals; all subspace
predicates are exact, none are numerical.
"""

__version__ = "0.1.0"

from .linalg import Scalar, LinMap, Subspace, span
from .words import (
    ExtWord,
    colour_invert,
    colour_sum,
    enumerate_words,
    ext_concat,
    glue_word,
    square_count,
    word_star,
)
from .frame import Frame, make_frame

__all__ = [
    "ExtWord",
    "Frame",
    "LinMap",
    "Scalar",
    "Subspace",
    "colour_invert",
    "colour_sum",
    "enumerate_words",
    "ext_concat",
    "glue_word",
    "make_frame",
    "span",
    "square_count",
    "word_star",
]
