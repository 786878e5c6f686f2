from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opcalab import fixtures
from opcalab.errors import Mismatch, NotAMorphism, SizeLimit, SourceMismatch
from opcalab.fixtures import C2, C3, ONE, V3
from opcalab.morphisms import (all_maps, bang, cd_holds, check_adjunction, check_cd, check_cdm, compose, constant,
                               construct_m_from_n, equivalent, find_inequality_realizer, find_left_adjoint,
                               find_order_realizer, find_tracker, hom_set, identity, is_discrete, is_zero_morphism,
                               leq, morphism, point, realizer_violation, try_morphism)
from opcalab.products import product

PAIRS = list(cartesian(fixtures.OPCAS.values(), repeat=2))
HOMS = {(a.name, b.name): hom_set(a, b) for a, b in PAIRS}
ALL_MORPHISMS = [f for fs in HOMS.values() for f in fs]
morphisms = st.sampled_from(ALL_MORPHISMS)

TOP, BOT = C2.index("1"), C2.index("0")


def test_tracker_identity_meet_chain():
    assert C2.element(find_tracker(C2, C2, (0, 1))) == "1"


def test_tracker_into_one():
    assert find_tracker(C2, ONE, (0, 0)) == 0


def test_tracker_constant_bottom():
    assert find_tracker(C2, C2, (BOT, BOT)) is not None


def test_order_realizers():
    assert C2.element(find_order_realizer(C2, C2, (0, 1))) == "1"
    assert find_order_realizer(V3, ONE, (0, 0, 0)) == 0
    swap = (BOT, TOP)  # 1 -> 0, 0 -> 1 reverses the order
    assert C2.element(find_order_realizer(C2, C2, swap)) == "0"


@pytest.mark.parametrize("f, g, realizer", [
    (identity(C2), identity(C2), "1"),
    (constant(C2, C2, TOP), constant(C2, C2, BOT), "0"),
])
def test_inequality_realizers(f, g, realizer):
    assert C2.element(find_inequality_realizer(f, g).realizer) == realizer


def test_identity_below_constant_top():
    assert leq(identity(C2), constant(C2, C2, TOP))


def test_parallel_checks():
    with pytest.raises(SourceMismatch):
        leq(identity(C2), identity(V3))
    with pytest.raises(Mismatch):
        compose(identity(C2), identity(V3))


def test_maps_by_name():
    assert morphism(C2, C2, {"1": "1", "0": "0"}).map == (0, 1)


def test_partial_map_rejected():
    with pytest.raises(NotAMorphism):
        morphism(C2, C2, {"1": "1"})


def test_composition_identity():
    assert compose(identity(C2), identity(C2)) == identity(C2)


def test_bang_point_is_identity_on_one():
    assert equivalent(compose(point(C2), bang(C2)), identity(ONE)) is not None


def test_point_bang_is_zero():
    z = compose(bang(C2), point(C2))
    assert is_zero_morphism(z).holds


@pytest.mark.parametrize("f", [bang(C2), identity(C2)])
def test_zero_examples(f):
    assert is_zero_morphism(f).holds


def test_cd_examples(fixture_opca):
    a = fixture_opca
    assert check_cd(bang(a)) == 0
    ident = identity(a)
    assert check_cd(ident) is not None
    assert cd_holds(ident, a.i)


def test_point_is_cd_on_trivial():
    assert check_cd(point(C2)) is not None


def test_cdm_identity_meet_chain():
    m = construct_m_from_n(identity(C2), TOP)
    assert m is not None


def test_cdm_into_one():
    assert check_cdm(bang(V3)) == 0


def test_discrete_examples():
    assert is_discrete(identity(V3)).holds
    assert is_discrete(bang(C2)).holds


def test_adjunction_bang_point():
    pair = check_adjunction(bang(C2), point(C2))
    assert pair is not None


def test_adjunction_projection_coprojection():
    P = product(C2, C2)
    assert check_adjunction(P.projections[0], P.coprojections[0]) is not None


def test_identity_adjunction_realizer_is_i(fixture_opca):
    a = fixture_opca
    assert check_adjunction(identity(a), identity(a)) is not None
    diag = range(len(a))
    assert realizer_violation(a, diag, diag, a.i) is None


def test_find_left_adjoint_of_point():
    assert find_left_adjoint(point(C2)) is not None


def test_hom_budget():
    with pytest.raises(SizeLimit):
        hom_set(C3, C3, budget=5)


def test_hom_set_counts():
    assert len(HOMS["C2", "ONE"]) == 1
    assert len(HOMS["ONE", "C2"]) == 2
    assert len(HOMS["C2", "C2"]) == 4


# -- exhaustive sweeps and properties ---------------------------------------------------

@pytest.mark.parametrize("a, b", PAIRS, ids=[f"{a.name}-{b.name}" for a, b in PAIRS])
def test_cd_iff_cdm(a, b):
    for f in HOMS[a.name, b.name]:
        n = check_cd(f)
        assert (n is not None) == (check_cdm(f) is not None)
        if n is not None:
            construct_m_from_n(f, n)


@pytest.mark.parametrize("a, b", PAIRS, ids=[f"{a.name}-{b.name}" for a, b in PAIRS])
def test_zero_characterizations_agree(a, b):
    for f in HOMS[a.name, b.name]:
        is_zero_morphism(f)


@pytest.mark.parametrize("a, b", PAIRS, ids=[f"{a.name}-{b.name}" for a, b in PAIRS])
def test_hom_set_is_exactly_the_trackable_maps(a, b):
    found = {f.map for f in HOMS[a.name, b.name]}
    for m in all_maps(a, b):
        assert (m in found) == (try_morphism(a, b, m) is not None)


@given(morphisms, morphisms)
def test_composites_are_morphisms(f, g):
    if f.target == g.source:
        h = compose(f, g)
        assert h.map == tuple(g.map[x] for x in f.map)


@given(morphisms)
def test_preorder_reflexive(f):
    assert leq(f, f)


@given(morphisms, st.data())
def test_preorder_transitive(f, data):
    hom = HOMS[f.source.name, f.target.name]
    g, h = data.draw(st.sampled_from(hom)), data.draw(st.sampled_from(hom))
    if leq(f, g) and leq(g, h):
        assert leq(f, h)


@given(morphisms, st.data())
def test_precomposition_is_monotone(f, data):
    hom = HOMS[f.source.name, f.target.name]
    g = data.draw(st.sampled_from(hom))
    pre = data.draw(st.sampled_from([e for (s, t), es in HOMS.items() if t == f.source.name for e in es]))
    if leq(f, g):
        assert leq(compose(pre, f), compose(pre, g))


@given(morphisms)
def test_identity_is_neutral(f):
    assert compose(identity(f.source), f) == f
    assert compose(f, identity(f.target)) == f


@given(morphisms)
def test_discrete_when_source_trivial(f):
    assert is_discrete(f).holds
