"""Exact factorizations G = H1·H2 and the actions they induce.

The first factor is embedded by inclusion ``i`` and the second by the
anti-homomorphism ``j(s) = s^{-1}``.  With these conventions the relation
``i(g) j(s) = j(alpha_g(s)) i(beta_s(g))`` defines the two action tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .group_core import FiniteGroup, GroupError, direct_product


class FactorizationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MatchedPair:
    G: FiniteGroup
    G1: FiniteGroup
    G2: FiniteGroup
    i: np.ndarray  # G1 index -> G index (homomorphism)
    j: np.ndarray  # G2 index -> G index, j(s) = s^{-1} (anti-homomorphism)
    alpha: np.ndarray  # alpha[g, s] = alpha_g(s)
    beta: np.ndarray  # beta[s, g] = beta_s(g)

    @property
    def n1(self) -> int:
        return self.G1.order

    @property
    def n2(self) -> int:
        return self.G2.order

    @property
    def n(self) -> int:
        return self.n1 * self.n2

    def flipped(self) -> "MatchedPair":
        """The pair with the roles of the two factors exchanged.

        Its first factor is embedded by ``j(s)^{-1}`` and its second by
        ``i(g)^{-1}``, so the new action tables are the old ones swapped.
        """
        G = self.G
        return MatchedPair(G, self.G2, self.G1, G.inverse[self.j], G.inverse[self.i],
                           self.beta.copy(), self.alpha.copy())

    def to_json(self) -> dict:
        return {
            "ambient": self.G.to_json(),
            "h1": self.i.tolist(),
            "h2": self.G.inverse[self.j].tolist(),
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
        }


def derive_actions(G: FiniteGroup, i: np.ndarray, j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``j(alpha_g(s)) i(beta_s(g)) = i(g) j(s)`` by inverting ``rho(g,s) = j(s) i(g)``."""
    n1, n2 = len(i), len(j)
    rho = G.table[j[None, :], i[:, None]]  # rho[g, s] = j(s) i(g)
    inv_g = np.full(G.order, -1, dtype=np.int64)
    inv_s = np.full(G.order, -1, dtype=np.int64)
    gg, ss = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    inv_g[rho.ravel()] = gg.ravel()
    inv_s[rho.ravel()] = ss.ravel()
    if np.any(inv_g < 0):
        raise FactorizationError("rho(g,s) = j(s)i(g) is not surjective")
    theta = G.table[i[:, None], j[None, :]]  # theta[g, s] = i(g) j(s)
    alpha = inv_s[theta]  # alpha[g, s]
    beta = inv_g[theta].T.copy()  # beta[s, g]
    return alpha, beta


def exact_factorization(G: FiniteGroup, H1: Sequence[int], H2: Sequence[int]) -> MatchedPair:
    """Matched pair from two complementary subgroups of ``G``."""
    H1 = [int(x) for x in dict.fromkeys(H1)]
    H2 = [int(x) for x in dict.fromkeys(H2)]
    problems = []
    if not G.is_subgroup(H1):
        problems.append("H1 is not a subgroup")
    if not G.is_subgroup(H2):
        problems.append("H2 is not a subgroup")
    if len(set(H1) & set(H2)) > 1:
        problems.append("H1 and H2 intersect nontrivially")
    if len(H1) * len(H2) != G.order:
        problems.append(f"|H1||H2| = {len(H1) * len(H2)} differs from |G| = {G.order}")
    if problems:
        raise FactorizationError("; ".join(problems))
    G1, i = G.subgroup(H1, name="G1")
    G2, incl2 = G.subgroup(H2, name="G2")
    j = G.inverse[incl2]
    theta = G.table[i[:, None], j[None, :]]
    if len(np.unique(theta)) != G.order:
        raise FactorizationError("theta(g,s) = g s^{-1} is not surjective")
    alpha, beta = derive_actions(G, i, j)
    return MatchedPair(G, G1, G2, i, j, alpha, beta)


def trivial_pair(G1: FiniteGroup, G2: FiniteGroup) -> MatchedPair:
    """Direct-product pair: both actions trivial."""
    G = direct_product(G1, G2)
    h1 = [g * G2.order for g in range(G1.order)]
    h2 = list(range(G2.order))
    return exact_factorization(G, h1, h2)


def verify_matched_identities(pair: MatchedPair, max_witnesses: int = 5) -> dict:
    """Check the matched-pair axioms exhaustively.

    Returns ``{"ok": bool, "violations": [...]}``; each violation names the
    identity and lists up to ``max_witnesses`` offending index tuples.
    """
    G, G1, G2 = pair.G, pair.G1, pair.G2
    a, b = pair.alpha, pair.beta
    m1, m2 = G1.table, G2.table
    n1, n2 = pair.n1, pair.n2
    g = np.arange(n1)[:, None, None]
    h = np.arange(n1)[None, :, None]
    s = np.arange(n2)[None, None, :]
    checks = {}
    checks["i homomorphism"] = (
        pair.i[m1] == G.table[pair.i[:, None], pair.i[None, :]]
    )
    checks["j anti-homomorphism"] = (
        pair.j[m2] == G.table[pair.j[None, :], pair.j[:, None]]
    )
    theta = G.table[pair.i[:, None], pair.j[None, :]]
    counts = np.bincount(theta.ravel(), minlength=G.order)
    checks["theta bijective"] = (counts == 1)
    checks["factorization i(g)j(s) = j(alpha)i(beta)"] = (
        theta == G.table[pair.j[a], pair.i[b.T]]
    )
    # alpha_{hg}(s) = alpha_h(alpha_g(s)); arrays indexed [g, h, s]
    checks["alpha_{hg}(s) = alpha_h(alpha_g(s))"] = (
        a[m1[h, g], s] == a[h, a[g, s]]
    )
    # beta_s(hg) = beta_{alpha_g(s)}(h) beta_s(g)
    checks["beta_s(hg) = beta_{alpha_g(s)}(h) beta_s(g)"] = (
        b[s, m1[h, g]] == m1[b[a[g, s], h], b[s, g]]
    )
    t = np.arange(n2)[None, :, None]
    s3 = np.arange(n2)[None, None, :]
    g3 = np.arange(n1)[:, None, None]
    # arrays indexed [g, t, s]
    checks["beta_{ts}(g) = beta_t(beta_s(g))"] = (
        b[m2[t, s3], g3] == b[t, b[s3, g3]]
    )
    checks["alpha_g(ts) = alpha_{beta_s(g)}(t) alpha_g(s)"] = (
        a[g3, m2[t, s3]] == m2[a[b[s3, g3], t], a[g3, s3]]
    )
    checks["alpha_g(e) = e"] = (a[:, 0] == 0)
    checks["alpha_e(s) = s"] = (a[0, :] == np.arange(n2))
    checks["beta_s(e) = e"] = (b[:, 0] == 0)
    checks["beta_e(g) = g"] = (b[0, :] == np.arange(n1))
    checks["alpha_g bijective"] = np.array([len(np.unique(a[x])) == n2 for x in range(n1)])
    checks["beta_s bijective"] = np.array([len(np.unique(b[x])) == n1 for x in range(n2)])
    violations = []
    for name, ok in checks.items():
        bad = np.argwhere(~np.asarray(ok, dtype=bool))
        if len(bad):
            violations.append({
                "identity": name,
                "count": int(len(bad)),
                "witnesses": [[int(x) for x in w] for w in bad[:max_witnesses]],
            })
    return {"ok": not violations, "violations": violations}


def pair_from_json(doc: dict, base_dir=None) -> MatchedPair:
    """Matched pair from ``{"ambient": <group doc or path>, "h1": [...], "h2": [...]}``."""
    import json
    from pathlib import Path

    from .group_core import build_group

    amb = doc.get("ambient", doc.get("group"))
    if isinstance(amb, str):
        path = Path(amb)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        amb = json.loads(path.read_text())
    if not isinstance(amb, dict):
        raise GroupError("matched-pair document needs an 'ambient' group")
    G = build_group(amb)
    return exact_factorization(G, doc["h1"], doc["h2"])
