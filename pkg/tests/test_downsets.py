from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opcalab import downsets as ds
from opcalab import fixtures
from opcalab.errors import NotAMorphism, NotApplicable, SizeLimit
from opcalab.fixtures import A2, A3, C2, C3, ONE, V3
from opcalab.morphisms import (bang, check_cd, compose, constant, equivalent, hom_set, identity, morphism,
                               try_morphism)
from opcalab.opas import opca
from opcalab.poset import FinPoset, bits, downset_masks
from opcalab.products import product

FIX = list(fixtures.OPCAS.values())
SMALL = [ONE, C2, V3]
TOP, BOT = C2.index("1"), C2.index("0")


def mask(a, *names):
    return a.order.down(a.order.mask_of(names))


def all_applicatives(a, b):
    masks = downset_masks(b.order)
    out = []
    for fmap in cartesian(masks, repeat=len(a)):
        f = ds.try_applicative(a, b, fmap)
        if f is not None:
            out.append(f)
    return out


APPS = {(a.name, b.name): all_applicatives(a, b) for a in SMALL for b in SMALL}
ALL_APPS = [f for fs in APPS.values() for f in fs]
applicatives = st.sampled_from(ALL_APPS)


# -- T on objects and morphisms ---------------------------------------------------------

def test_T_of_one():
    assert len(ds.build_T(ONE)) == 1


def test_T_of_chain_is_chain():
    T = ds.build_T(C2)
    assert len(T) == 2
    d = ds.delta_map(C2)
    assert sorted(d.map) == [0, 1]
    for x, y in cartesian(range(2), repeat=2):
        assert T.opca.app(d.map[x], d.map[y]) == d.map[C2.app(x, y)]


def test_T_of_vee_is_diamond():
    T = ds.build_T(V3)
    assert len(T) == 4
    a = T.of_mask(mask(V3, "a"))
    b = T.of_mask(mask(V3, "b"))
    assert T.mask(T.opca.app(a, b)) == mask(V3, "⊥")


def test_T_of_identity():
    assert equivalent(ds.T_on_morphism(identity(C2)), identity(ds.build_T(C2).opca)) is not None


def test_T_of_bang_is_unique():
    TC2, T1 = ds.build_T(C2).opca, ds.build_T(ONE).opca
    assert len(hom_set(TC2, T1)) == 1
    assert ds.T_on_morphism(bang(C2)).map == (0, 0)


def test_T_of_constant_top():
    T = ds.build_T(C2)
    f = ds.T_on_morphism(constant(C2, C2, TOP))
    assert set(f.map) == {T.principal(TOP)}


@pytest.mark.parametrize("a", [ONE, C2, V3, C3], ids=["ONE", "C2", "V3", "C3"])
def test_monad_laws(a):
    laws = ds.monad_law_check(a)
    assert laws.holds


def test_monad_laws_strict_on_one():
    assert all(ds.monad_law_check(ONE).strict.values())


def test_double_T_of_vee():
    TT = ds.build_T(ds.build_T(V3).opca, ds.TT_LIMIT)
    assert len(TT) == len(downset_masks(ds.build_T(V3).opca.order))


# -- applicative morphisms ---------------------------------------------------------------

def test_delta_is_kleisli_unit():
    f = ds.applicative(C2, V3, {"1": ["a", "b"], "0": ["⊥"]})
    assert ds.applicative_compose(ds.delta(C2), f) == f
    assert ds.applicative_compose(f, ds.delta(V3)) == f


def test_constants_compose_to_constant():
    f = ds.applicative(C2, V3, {"1": ["a"], "0": ["a"]})
    g = ds.applicative(V3, C2, {"a": ["0"], "b": ["0"], "⊥": ["0"]})
    h = ds.applicative_compose(f, g)
    assert len(set(h.map)) == 1


def test_projectives_compose_to_projective():
    f, g = ds.projective(bang(C2)), ds.projective(morphism(ONE, V3, (V3.index("a"),)))
    assert ds.projectivity_search(ds.applicative_compose(f, g)) is not None


def test_not_applicable_maps_rejected():
    with pytest.raises(NotAMorphism):
        ds.applicative(C2, V3, {"1": ["a"]})


def test_order_normalize_monotone_unchanged():
    g, _ = ds.order_normalize(ds.delta(C2))
    assert g == ds.delta(C2)


def test_order_normalize_fills_in():
    f = ds.applicative(C2, V3, {"1": ["⊥"], "0": ["a"]})
    g, (i, u) = ds.order_normalize(f)
    assert g.map[TOP] == mask(V3, "a")
    assert ds.order_normalize(g)[0] == g


def test_tilde_of_delta_is_identity():
    t = ds.tilde_lift(ds.delta(V3))
    assert equivalent(t.morphism, identity(ds.build_T(V3).opca)) is not None


def test_tilde_of_constant_is_constant():
    f = ds.applicative(C2, V3, {"1": ["a"], "0": ["a"]})
    assert len(set(ds.tilde_lift(f).morphism.map)) == 1


def test_projectivity_of_delta_composite():
    g = morphism(C2, V3, {"1": "a", "0": "⊥"})
    w = ds.projectivity_search(ds.projective(g))
    assert w is not None
    assert equivalent(morphism(C2, V3, w.function), g) is not None


def test_whole_carrier_is_projective():
    f = ds.applicative(C2, C2, {"1": ["1"], "0": ["1"]})
    assert ds.projectivity_search(f) is not None


def test_delta_is_cd(fixture_opca):
    assert ds.applicative_cd(ds.delta(fixture_opca)) is not None


def test_into_one_is_cd():
    f = ds.applicative(V3, ONE, {"a": ["*"], "b": ["*"], "⊥": ["*"]})
    assert ds.applicative_cd(f) == 0


# -- the right adjoint construction ------------------------------------------------------

def test_right_adjoint_of_identity_is_delta():
    ra = ds.right_adjoint_construct(identity(C2), TOP)
    assert ra.g.map == ds.delta(C2).map


def test_right_adjoint_of_bang():
    ra = ds.right_adjoint_construct(bang(V3))
    assert set(ra.g.map) == {V3.order.full}


def test_extraction_from_delta():
    ext = ds.adjoint_to_projective_cd(ds.delta(C2), ds.delta(C2))
    assert ext.function == (0, 1)


def test_right_adjoint_rejects_bad_m():
    # b·x is undefined, so b cannot serve as m for the identity
    order = FinPoset(["a", "b"], [("a", "b")])
    a = opca(order, {("a", "a"): "a", ("a", "b"): "a"}, k="a", s="a")
    with pytest.raises(NotApplicable):
        ds.right_adjoint_construct(identity(a), a.index("b"))


CD_MORPHISMS = [f for a in FIX for b in FIX for f in hom_set(a, b) if check_cd(f) is not None]


@pytest.mark.parametrize("f", CD_MORPHISMS, ids=[f"{f.source.name}-{f.target.name}-{f.map}" for f in CD_MORPHISMS])
def test_right_adjoint_round_trip(f):
    ra = ds.right_adjoint_construct(f)
    fp = ds.projective(f)
    assert ds.check_applicative_adjunction(fp, ra.g) is not None
    ext = ds.adjoint_to_projective_cd(fp, ra.g)
    assert equivalent(morphism(f.source, f.target, ext.function), f) is not None


# -- coproducts, h maps and mediators ------------------------------------------------------

def test_pca_cotuple_deltas_are_meets():
    c = ds.pca_cotuple(ds.delta(C2), ds.delta(C2))
    P = product(C2, C2)
    for x, y in cartesian(range(2), repeat=2):
        assert c.morphism.map[P.pair(x, y)] == C2.order.below[C2.order.meet(x, y)]


def test_pca_cotuple_into_one():
    f = ds.projective(bang(C2))
    c = ds.pca_cotuple(f, f)
    assert set(c.morphism.map) == {1}


def test_pca_cotuple_preserves_cd():
    c = ds.pca_cotuple(ds.delta(C2), ds.delta(C2))
    assert ds.applicative_cd(c.morphism) is not None


def test_h_maps_one():
    h = ds.h_maps(ONE, ONE)
    assert h.lower.map == (0,) and h.upper.map == (0,)


def test_h_maps_chain_values():
    h = ds.h_maps(C2, C2)
    P = product(C2, C2)
    T0, T1, TP = h.T0, h.T1, h.TP
    Q = product(T0.opca, T1.opca)
    low = h.lower.map[Q.pair(T0.of_mask(mask(C2, "0")), T1.of_mask(mask(C2, "1")))]
    assert TP.mask(low) == 1 << P.pair(BOT, TOP) | 1 << P.pair(BOT, BOT)
    alpha = TP.of_mask(1 << P.pair(BOT, BOT))
    up = h.upper.map[alpha]
    x, y = Q.split(up)
    assert T0.mask(x) == mask(C2, "0") and T1.mask(y) == mask(C2, "0")


@pytest.mark.parametrize("a0, a1", [(x, y) for x in SMALL for y in SMALL])
def test_h_maps_adjoint_and_iso(a0, a1):
    h = ds.h_maps(a0, a1)
    assert h.adjunction is not None and h.iso is not None


def test_maximal_mediator_deltas():
    g = ds.maximal_mediator(ds.delta(C2), ds.delta(C2))
    P = product(C2, C2)
    for x in range(2):
        assert g.map[x] == ds.product_mask(P, C2.order.below[x], C2.order.below[x])


@pytest.mark.parametrize("f0, f1", [
    (ds.delta(C2), ds.delta(C2)),
    (ds.delta(C2), ds.projective(bang(C2))),
    (ds.projective(bang(V3)), ds.projective(bang(V3))),
    (ds.applicative(C2, C2, {"1": ["1"], "0": ["0"]}), ds.applicative(C2, C2, {"1": ["0"], "0": ["1"]})),
], ids=["delta-delta", "delta-bang", "bang-bang", "mixed"])
def test_mediator_maximality(f0, f1):
    g = ds.maximal_mediator(f0, f1)
    for h in ds.mediators(f0, f1):
        assert ds.app_leq(h, g) is not None


# -- the no-products witness ----------------------------------------------------------------

def test_noprod_antichain_pair():
    w = ds.noprod_witness(A2, A2)
    assert w.holds
    names = set(w.product.names_of(w.alphas[0]))
    assert names == {"(a,b)", "(b,a)", "(b,b)"}


def test_noprod_three_antichain():
    assert ds.noprod_witness(A3, A3).holds


def test_noprod_with_least_element():
    with pytest.raises(NotApplicable):
        ds.noprod_witness(C2.order, A2)


@pytest.mark.parametrize("p0", ds.least_free_posets(4))
def test_noprod_least_free(p0):
    assert ds.noprod_witness(p0, A2).holds


# -- properties ---------------------------------------------------------------------------------

@given(applicatives, st.data())
def test_kleisli_associativity(f, data):
    gs = APPS.get((f.target.name, f.target.name), [])
    g = data.draw(st.sampled_from(gs))
    h = data.draw(st.sampled_from(APPS[f.target.name, f.target.name]))
    left = ds.applicative_compose(ds.applicative_compose(f, g), h)
    right = ds.applicative_compose(f, ds.applicative_compose(g, h))
    assert left.map == right.map


@given(applicatives)
def test_elementwise_tracking_matches_morphism_into_T(f):
    T = ds.build_T(f.target)
    assert try_morphism(f.source, T.opca, tuple(T.of_mask(m) for m in f.map)) is not None


@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.data())
def test_morphism_into_T_is_applicative(a, b, data):
    T = ds.build_T(b)
    fmap = tuple(data.draw(st.integers(0, len(T) - 1)) for _ in range(len(a)))
    as_morphism = try_morphism(a, T.opca, fmap) is not None
    as_app = ds.try_applicative(a, b, tuple(T.mask(z) for z in fmap)) is not None
    assert as_morphism == as_app


@given(applicatives)
def test_normalization_preserves_projectivity(f):
    g, _ = ds.order_normalize(f)
    assert (ds.projectivity_search(f) is None) == (ds.projectivity_search(g) is None)


@given(applicatives)
def test_cd_agrees_with_tilde(f):
    assert (ds.applicative_cd(f) is None) == (check_cd(ds.tilde_lift(f).morphism) is None)


@given(applicatives)
def test_kleisli_unit_laws(f):
    assert ds.app_equivalent(ds.applicative_compose(ds.delta(f.source), f), f) is not None
    assert ds.applicative_compose(f, ds.delta(f.target)) == f


@given(st.sampled_from(SMALL), st.data())
def test_T_preserves_composition(a, data):
    f = data.draw(st.sampled_from([g for b in SMALL for g in hom_set(a, b)]))
    g = data.draw(st.sampled_from([h for c in SMALL for h in hom_set(f.target, c)]))
    # Tf(α) = ↓f(α) is only functorial up to ≃ when f is not monotone
    assert equivalent(ds.T_on_morphism(compose(f, g)), compose(ds.T_on_morphism(f), ds.T_on_morphism(g))) is not None


@given(st.sampled_from(FIX), st.data())
def test_set_application_is_monotone(a, data):
    masks = downset_masks(a.order)
    al, be = data.draw(st.sampled_from(masks)), data.draw(st.sampled_from(masks))
    al2 = data.draw(st.sampled_from([m for m in masks if m & ~al == 0]))
    be2 = data.draw(st.sampled_from([m for m in masks if m & ~be == 0]))
    big, small = ds.set_app(a, al, be), ds.set_app(a, al2, be2)
    if big is not None:
        assert small is not None and small & ~big == 0


@pytest.mark.parametrize("a, b, count", [(ONE, C2, 2), (C2, C2, 4), (C2, V3, 16), (V3, ONE, 1)])
def test_app_hom_set_counts(a, b, count):
    homs = ds.app_hom_set(a, b)
    assert len(homs) == count
    assert ds.delta(b) in ds.app_hom_set(b, b)


def test_app_hom_set_budget():
    with pytest.raises(SizeLimit):
        ds.app_hom_set(V3, V3, budget=10)


def test_app_hom_set_contains_projectives():
    for f in hom_set(C2, V3):
        assert ds.projective(f) in ds.app_hom_set(C2, V3)


def test_set_app_memo_matches_direct():
    a = V3
    for alpha in downset_masks(a.order):
        for beta in downset_masks(a.order):
            first = ds.set_app(a, alpha, beta)
            assert ds.set_app(a, alpha, beta) == first
            direct = 0
            for x in bits(alpha):
                for y in bits(beta):
                    direct |= a.order.below[a.app(x, y)]
            assert first == direct
