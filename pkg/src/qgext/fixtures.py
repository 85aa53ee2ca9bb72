"""Bundled matched pairs used by the tests, the benchmarks and the ``--fixtures`` flag."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .group_core import cyclic_group, semidirect_product, swap_semidirect, symmetric_group
from .matched_pair import MatchedPair, exact_factorization


def swap_pair(m: int) -> MatchedPair:
    """``(Z/m x Z/m) x| Z/2`` factored as ``Z/2`` times the normal subgroup ``Z/m x Z/m``."""
    G = swap_semidirect(m)
    return exact_factorization(G, [0, 1], [2 * x for x in range(m * m)])


def kac_paljutkin_pair() -> MatchedPair:
    return swap_pair(2)


def s4_pair() -> MatchedPair:
    """``S4 = S3 . Z/4`` with ``S3`` the stabilizer of the point 4 and ``Z/4`` generated by a 4-cycle."""
    G = symmetric_group(4)
    stab = [k for k, lab in enumerate(G.labels) if "4" not in lab]
    cyc = G.generated_subgroup([G.labels.index("(1 2 3 4)")])
    return exact_factorization(G, stab, cyc)


def dihedral_group(m: int = 4):
    """``Z/m x| Z/2`` with the reflection acting by inversion."""
    N, H = cyclic_group(m), cyclic_group(2)
    idx = np.arange(m)
    return semidirect_product(N, H, np.stack([idx, (-idx) % m]), name=f"D{2 * m}")


def dihedral_pair(m: int = 4) -> MatchedPair:
    """Dihedral group factored as reflection subgroup times rotation subgroup."""
    return exact_factorization(dihedral_group(m), [0, 1], [2 * x for x in range(m)])


def fixture_pairs() -> dict[str, MatchedPair]:
    return {
        "kp": kac_paljutkin_pair(),
        "swap3": swap_pair(3),
        "swap4": swap_pair(4),
        "s4": s4_pair(),
        "dihedral": dihedral_pair(4),
    }


def pair_document(pair: MatchedPair) -> dict:
    """A ``pair_from_json`` document reproducing ``pair``."""
    return {
        "ambient": pair.G.to_json(),
        "h1": [int(x) for x in pair.i],
        "h2": [int(x) for x in pair.G.inverse[pair.j]],
    }


def write_fixtures(directory) -> list[str]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, pair in fixture_pairs().items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(pair_document(pair), indent=1) + "\n")
        written.append(str(path))
    return written
