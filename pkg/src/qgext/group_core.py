"""Finite groups stored as dense multiplication tables.

Every group element is an integer index in ``range(order)`` and index 0 is
always the identity.  Groups are immutable once built; the tables are numpy
``int64`` arrays flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_ORDER = 512
EXHAUSTIVE_LIMIT = 64


class GroupError(ValueError):
    """Raised when a table or generator set does not describe a group."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[a, b]`` is the index of the product ``a*b``.
    """

    table: np.ndarray
    labels: tuple[str, ...]
    name: str = "G"
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        inv = np.argmax(table == 0, axis=1).astype(np.int64)
        inv.setflags(write=False)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k):
            x = int(self.table[x, a])
        return x

    def element_order(self, a: int) -> int:
        k, x = 1, int(a)
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    def center(self) -> list[int]:
        t = self.table
        return [a for a in range(self.order) if np.array_equal(t[a, :], t[:, a])]

    def generated_subgroup(self, gens: Sequence[int]) -> list[int]:
        """Closure of ``gens`` under multiplication, sorted by index."""
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(int(x) for x in elems)
        if 0 not in s:
            return False
        idx = np.array(sorted(s), dtype=np.int64)
        prods = self.table[np.ix_(idx, self.inverse[idx])]
        return set(np.unique(prods).tolist()) <= s

    def subgroup(self, elems: Sequence[int], name: str | None = None) -> tuple["FiniteGroup", np.ndarray]:
        """Return the subgroup on ``elems`` together with its inclusion map.

        The identity is placed first; the remaining elements keep the order
        in which they were given.
        """
        if not self.is_subgroup(elems):
            raise GroupError("element set is not a subgroup")
        order = [0] + [int(x) for x in dict.fromkeys(elems) if int(x) != 0]
        incl = np.array(order, dtype=np.int64)
        pos = {g: k for k, g in enumerate(order)}
        table = [[pos[int(self.table[a, b])] for b in order] for a in order]
        labels = tuple(self.labels[g] for g in order)
        return FiniteGroup(table, labels, name or f"sub({self.name})"), incl

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FiniteGroup":
        """Group isomorphic to ``self`` where old element ``perm[k]`` becomes ``k``.

        ``perm[0]`` must be 0 so that the identity stays at index 0.
        """
        perm = np.asarray(perm, dtype=np.int64)
        if perm[0] != 0 or sorted(perm.tolist()) != list(range(self.order)):
            raise GroupError("relabeling must be a permutation fixing 0")
        pos = np.empty_like(perm)
        pos[perm] = np.arange(self.order)
        table = pos[self.table[np.ix_(perm, perm)]]
        labels = tuple(self.labels[p] for p in perm)
        return FiniteGroup(table, labels, name or self.name)

    def automorphism_images(self, auto: Sequence[int]) -> bool:
        a = np.asarray(auto, dtype=np.int64)
        return bool(np.array_equal(a[self.table], self.table[np.ix_(a, a)]))

    def to_json(self) -> dict:
        return {"name": self.name, "order": self.order, "table": self.table.tolist()}


def validate_table(table: np.ndarray, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                   rng: np.random.Generator | None = None) -> None:
    """Raise ``GroupError`` unless ``table`` is the Cayley table of a group with identity 0."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError("table must be a non-empty square array")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
        raise GroupError("element 0 is not a two-sided identity")
    for a in range(n):
        if not np.any(t[a] == 0):
            raise GroupError(f"no inverse for element {a}")
        b = int(np.argmax(t[a] == 0))
        if t[b, a] != 0:
            raise GroupError(f"no two-sided inverse for element {a}")
    if n <= exhaustive_limit:
        left = t[t[:, :, None], ar[None, None, :]]
        right = t[ar[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            raise GroupError(f"table is not associative at {tuple(int(x) for x in bad)}")
    else:
        rng = rng or np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 20000))
        if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
            raise GroupError("table is not associative (sampled)")
    for a in range(n):
        if len(np.unique(t[a])) != n:
            raise GroupError(f"row {a} is not a permutation")


def group_from_table(table, labels: Sequence[str] | None = None, name: str = "G") -> FiniteGroup:
    t = np.asarray(table, dtype=np.int64)
    if t.ndim == 2 and t.shape[0] > MAX_ORDER:
        raise GroupError(f"order {t.shape[0]} exceeds bound {MAX_ORDER}")
    validate_table(t)
    if labels is None:
        labels = [str(k) for k in range(t.shape[0])]
    return FiniteGroup(t, tuple(labels), name)


def _perm_label(p: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = p[x]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def group_from_permutations(generators: Sequence[Sequence[int]], degree: int | None = None,
                            name: str = "G", max_order: int = MAX_ORDER) -> FiniteGroup:
    """Enumerate the permutation group generated by ``generators``.

    Permutations are given as image lists of ``0..degree-1``.  Products are
    composed as functions: ``(p*q)(x) = p(q(x))``.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupError(f"generator {list(g)} is not a permutation of {degree} points")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[x]] for x in range(degree))
                if q not in index:
                    if len(elems) >= max_order:
                        raise GroupError(f"generated group exceeds order bound {max_order}")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    arr = np.array(elems, dtype=np.int64)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prods = arr[a][arr]
        table[a] = [index[tuple(row)] for row in prods.tolist()]
    return FiniteGroup(table, tuple(_perm_label(p) for p in elems), name)


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, tuple(str(k) for k in range(n)), name or f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Element ``(g, h)`` gets index ``g*|H| + h``."""
    n = G.order * H.order
    if n > MAX_ORDER:
        raise GroupError(f"order {n} exceeds bound {MAX_ORDER}")
    g = np.repeat(np.arange(G.order), H.order)
    h = np.tile(np.arange(H.order), G.order)
    table = G.table[g[:, None], g[None, :]] * H.order + H.table[h[:, None], h[None, :]]
    labels = tuple(f"({G.labels[a]},{H.labels[b]})" for a, b in zip(g, h))
    return FiniteGroup(table, labels, name or f"{G.name}x{H.name}")


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action, name: str | None = None) -> FiniteGroup:
    """The group on ``N x H`` with ``(n,h)(m,k) = (n * action[h](m), hk)``.

    ``action`` is an ``|H| x |N|`` table: ``action[h][m]`` is the image of
    ``m`` under the automorphism attached to ``h``.  Element ``(n, h)`` gets
    index ``n*|H| + h`` so the trivial action reproduces ``direct_product``.
    """
    act = np.asarray(action, dtype=np.int64)
    if act.shape != (H.order, N.order):
        raise GroupError("action table must have shape |H| x |N|")
    for h in range(H.order):
        if sorted(act[h].tolist()) != list(range(N.order)) or not N.automorphism_images(act[h]):
            raise GroupError(f"action of element {h} is not an automorphism")
    for h in range(H.order):
        for k in range(H.order):
            if not np.array_equal(act[h][act[k]], act[H.table[h, k]]):
                raise GroupError("action is not a homomorphism")
    size = N.order * H.order
    if size > MAX_ORDER:
        raise GroupError(f"order {size} exceeds bound {MAX_ORDER}")
    n = np.repeat(np.arange(N.order), H.order)
    h = np.tile(np.arange(H.order), N.order)
    first = N.table[n[:, None], act[h[:, None], n[None, :]]]
    second = H.table[h[:, None], h[None, :]]
    table = first * H.order + second
    labels = tuple(f"({N.labels[a]},{H.labels[b]})" for a, b in zip(n, h))
    return FiniteGroup(table, labels, name or f"{N.name}:{H.name}")


def build_group(doc: dict) -> FiniteGroup:
    """Build a group from a JSON-style document.

    Accepted shapes are ``{"name", "order", "table"}`` and
    ``{"name", "degree", "generators"}``.
    """
    name = doc.get("name", "G")
    if "table" in doc:
        table = doc["table"]
        if "order" in doc and int(doc["order"]) != len(table):
            raise GroupError("declared order does not match table size")
        return group_from_table(table, doc.get("labels"), name)
    if "generators" in doc:
        return group_from_permutations(doc["generators"], doc.get("degree"), name)
    raise GroupError("group document needs either 'table' or 'generators'")


def swap_action_on_square(m: int) -> tuple[FiniteGroup, FiniteGroup, np.ndarray]:
    """``Z/m x Z/m`` with ``Z/2`` acting by exchanging the two factors."""
    Zm = cyclic_group(m)
    N = direct_product(Zm, Zm, name=f"Z{m}xZ{m}")
    H = cyclic_group(2)
    idx = np.arange(N.order)
    swapped = (idx % m) * m + idx // m
    return N, H, np.stack([idx, swapped])


def swap_semidirect(m: int) -> FiniteGroup:
    N, H, act = swap_action_on_square(m)
    return semidirect_product(N, H, act, name=f"(Z{m}xZ{m}):Z2")


def symmetric_group(k: int) -> FiniteGroup:
    if k == 1:
        return cyclic_group(1, "S1")
    cycle = list(range(1, k)) + [0]
    transposition = [1, 0] + list(range(2, k))
    return group_from_permutations([cycle, transposition], k, name=f"S{k}")
