"""Computational toolkit for finite semiheaps, heaps and their geometry.

Exhaustive law verification on finite carriers, the heapification /
groupification functor pair, translations, actions and bundles at desk
scale, and a numerical layer realizing matrix Lie groups as heaps.
"""

from .core import (
    FiniteHeap,
    FiniteSemiheap,
    InvalidTable,
    LawError,
    PointedSemiheap,
    SemiheapHom,
    TernaryTable,
    is_abelian,
    is_biunitary,
    is_heap,
    is_homomorphism,
    is_subsemiheap,
    opposite,
    product,
    verify_para_associative,
)
from .functors import check_fully_faithful, groupify, groupify_diagnose, heapify
from .groups import FiniteGroup, corpus

__all__ = [
    "FiniteGroup", "FiniteHeap", "FiniteSemiheap", "InvalidTable", "LawError",
    "PointedSemiheap", "SemiheapHom", "TernaryTable",
    "check_fully_faithful", "corpus", "groupify", "groupify_diagnose",
    "heapify", "is_abelian", "is_biunitary", "is_heap", "is_homomorphism",
    "is_subsemiheap", "opposite", "product", "verify_para_associative",
]
