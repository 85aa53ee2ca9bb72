import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SLOW, pairs, representatives
from oracles import extension_group_oracle
from qgext.cohomology import (
    CocyclePair,
    CohomologyError,
    are_cohomologous,
    coboundary,
    cocycle_representatives,
    extension_group,
    is_cocycle,
    is_normalized,
    normalize_cocycle,
)
from qgext.fixtures import dihedral_pair
from qgext.group_core import cyclic_group
from qgext.matched_pair import trivial_pair

# Expected groups were produced by ``oracles.extension_group_oracle`` (dense
# Smith form of the tuple-by-tuple equation matrix) and frozen here.
FROZEN = {
    "kp": (0, [2]),
    "swap3": (0, [3]),
    "swap4": (0, [4]),
    "s4": (0, []),
    "dihedral": (0, [2]),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_extension_group_matches_frozen_oracle(name):
    inv = extension_group(pairs()[name])
    assert (inv.torus_rank, list(inv.invariant_factors)) == FROZEN[name]


@pytest.mark.parametrize("name", ["kp", "swap3", "s4", "dihedral"] + (["swap4"] if SLOW else []))
def test_extension_group_matches_live_oracle(name):
    pair = pairs()[name]
    assert extension_group(pair).to_json() == extension_group_oracle(pair)


@pytest.mark.parametrize("pair", [
    trivial_pair(cyclic_group(2), cyclic_group(2)),
    trivial_pair(cyclic_group(4), cyclic_group(2)),
    trivial_pair(cyclic_group(3), cyclic_group(3)),
    trivial_pair(cyclic_group(2), cyclic_group(3)),
    dihedral_pair(3),
    dihedral_pair(6),
], ids=["z2z2", "z4z2", "z3z3", "z2z3", "d6", "d12"])
def test_extension_group_on_extra_pairs_matches_oracle(pair):
    assert extension_group(pair).to_json() == extension_group_oracle(pair)


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_representatives_are_normalized_pairwise_distinct_cocycles(name):
    pair = pairs()[name]
    reps = representatives(name)
    order = 1
    for d in FROZEN[name][1]:
        order *= d
    assert len(reps) == order
    for c in reps:
        assert is_cocycle(pair, c)["ok"]
        assert is_normalized(c)
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            assert not are_cohomologous(pair, reps[a], reps[b])[0]


def test_first_representative_is_trivial():
    pair = pairs()["kp"]
    c = representatives("kp")[0]
    assert c.equals(CocyclePair.trivial(pair))


def test_representatives_warn_on_short_order():
    with pytest.warns(UserWarning, match="exponent"):
        reps = cocycle_representatives(pairs()["swap4"], 2)
    assert len(reps) == 2


@pytest.mark.parametrize("name", ["kp", "s4", "dihedral"])
@given(seed=st.integers(0, 2**32 - 1), den=st.sampled_from([2, 3, 5, 12]))
@settings(max_examples=10, deadline=None)
def test_coboundaries_are_trivial_classes(name, seed, den):
    pair = pairs()[name]
    R = np.random.default_rng(seed).integers(0, den, (pair.n1, pair.n2))
    c = coboundary(pair, R, den)
    assert is_cocycle(pair, c)["ok"]
    same, wit = are_cohomologous(pair, c, CocyclePair.trivial(pair))
    assert same
    R2, d2 = wit
    assert coboundary(pair, R2, d2).equals(c)


@pytest.mark.parametrize("name", ["kp", "swap3", "dihedral"])
@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=8, deadline=None)
def test_normalization_keeps_the_class(name, seed):
    pair = pairs()[name]
    reps = representatives(name)
    rng = np.random.default_rng(seed)
    base = reps[int(rng.integers(len(reps)))]
    den = base.den * 6
    R = rng.integers(0, den, (pair.n1, pair.n2))
    c = base.with_den(den) + coboundary(pair, R, den)
    n = normalize_cocycle(pair, c)
    assert is_normalized(n)
    assert is_cocycle(pair, n)["ok"]
    assert are_cohomologous(pair, n, base)[0]


def test_sum_of_representatives_stays_in_the_group():
    pair = pairs()["swap4"]
    reps = representatives("swap4")
    total = reps[1] + reps[1]
    assert is_cocycle(pair, total)["ok"]
    same = [are_cohomologous(pair, total, r)[0] for r in reps]
    assert sum(same) == 1


def test_non_cocycle_is_reported_with_witness():
    pair = pairs()["kp"]
    c = CocyclePair.trivial(pair).with_den(2)
    U = c.U.copy()
    U[1, 1, 1] = 1
    bad = CocyclePair(U, c.V, 2)
    rep = is_cocycle(pair, bad)
    assert not rep["ok"]
    assert rep["violations"][0]["witnesses"]
    with pytest.raises(CohomologyError):
        normalize_cocycle(pair, bad)


def test_cocycle_json_round_trip():
    c = representatives("swap3")[1]
    assert CocyclePair.from_json(c.to_json()).equals(c)
