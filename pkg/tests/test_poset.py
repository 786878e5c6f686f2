import pytest
from hypothesis import given
from hypothesis import strategies as st

from opcalab.errors import EmptySeed, NotADownset, OrderError, SizeLimit, UnknownElement
from opcalab.fixtures import A2, C2, ONE, V3
from opcalab.poset import (Downset, FinPoset, all_posets, downset_closure, downset_masks,
                           downset_poset, nonempty_downsets, popcount, product_poset)

CHAIN = C2.order
VEE = V3.order


@pytest.mark.parametrize("poset, seed, expected", [
    (CHAIN, ["1"], {"0", "1"}),
    (CHAIN, ["0"], {"0"}),
    (VEE, ["a"], {"⊥", "a"}),
    (VEE, ["a", "b"], {"⊥", "a", "b"}),
])
def test_downset_closure(poset, seed, expected):
    assert set(downset_closure(poset, seed).members) == expected


def test_closure_of_empty_seed_raises():
    with pytest.raises(EmptySeed):
        downset_closure(CHAIN, [])


def test_unknown_element():
    with pytest.raises(UnknownElement):
        downset_closure(CHAIN, ["7"])


def test_downset_rejects_non_downsets():
    with pytest.raises(NotADownset):
        Downset(CHAIN, CHAIN.mask_of(["1"]))
    with pytest.raises(NotADownset):
        Downset(CHAIN, 0)


def test_cycle_is_rejected():
    with pytest.raises(OrderError):
        FinPoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_duplicate_names_rejected():
    with pytest.raises(OrderError):
        FinPoset(["a", "a"])


def test_relations_are_closed():
    p = FinPoset(["x", "y", "z"], [("x", "y"), ("y", "z")])
    assert p.le(p.index("x"), p.index("z"))
    assert not p.le(p.index("z"), p.index("x"))


def test_product_one_one():
    assert len(product_poset(ONE.order, ONE.order)) == 1


def test_product_of_chains_is_grid():
    g = product_poset(CHAIN, CHAIN)
    pairs = {(x, y) for x in g.elements for y in g.elements if g.le(g.index(x), g.index(y))}
    assert len(pairs) == 9
    assert ("(0,1)", "(1,1)") in pairs and ("(0,1)", "(1,0)") not in pairs


def test_product_of_antichains_is_antichain():
    g = product_poset(A2, A2)
    assert len(g) == 4
    assert all(popcount(g.below[i]) == 1 for i in range(4))


@pytest.mark.parametrize("poset, expected", [
    (CHAIN, [{"0"}, {"0", "1"}]),
    (VEE, [{"⊥"}, {"⊥", "a"}, {"⊥", "b"}, {"⊥", "a", "b"}]),
    (ONE.order, [{"*"}]),
])
def test_nonempty_downsets(poset, expected):
    got = [set(d.members) for d in nonempty_downsets(poset)]
    assert sorted(map(sorted, got)) == sorted(map(sorted, expected))


def test_downset_limit():
    with pytest.raises(SizeLimit):
        downset_masks(FinPoset.antichain([str(j) for j in range(6)]), limit=10)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 5), (4, 16)])
def test_all_posets_counts(n, count):
    assert len(all_posets(n)) == count


posets = st.sampled_from([p for n in (1, 2, 3, 4) for p in all_posets(n)] + [VEE, A2])


@given(posets, st.data())
def test_closure_is_least_downset_above(p, data):
    seed = data.draw(st.sets(st.sampled_from(p.elements), min_size=1))
    d = downset_closure(p, seed)
    assert p.is_downset(d.mask)
    assert set(seed) <= set(d.members)
    for m in downset_masks(p):
        if p.mask_of(seed) & ~m == 0:
            assert d.mask & ~m == 0


@given(posets)
def test_downset_enumeration_matches_brute_force(p):
    brute = [m for m in range(1, 1 << len(p)) if p.is_downset(m)]
    assert downset_masks(p) == brute


@given(posets)
def test_downset_poset_is_inclusion(p):
    q, masks = downset_poset(p)
    for i, m in enumerate(masks):
        for j, m2 in enumerate(masks):
            assert q.le(i, j) == (m & ~m2 == 0)
