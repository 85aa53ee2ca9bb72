"""Exact construction and verification of cocycle bicrossed-product quantum groups."""

from .group_core import (
    FiniteGroup,
    GroupError,
    build_group,
    cyclic_group,
    direct_product,
    semidirect_product,
    symmetric_group,
)
from .matched_pair import MatchedPair, exact_factorization, verify_matched_identities

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup",
    "GroupError",
    "MatchedPair",
    "build_group",
    "cyclic_group",
    "direct_product",
    "exact_factorization",
    "semidirect_product",
    "symmetric_group",
    "verify_matched_identities",
]
