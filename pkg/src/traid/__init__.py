"""Traid (twin) groups T_N, pure traid groups PT_N and three-body anyons on a line."""
from .core import (
    Permutation,
    Verdict,
    Word,
    WordError,
    brute_force_equals,
    codimension,
    equals,
    format_word,
    geodesic_length,
    inverse,
    is_pure,
    make_word,
    multiply,
    normal_form,
    parse_word,
    perm_image,
)

__version__ = "0.1.0"
