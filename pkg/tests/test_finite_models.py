import pytest

from opcalab.errors import SizeLimit
from opcalab.finite_models import enumerate_opcas, sweep
from opcalab.fixtures import A2, C2, ONE
from opcalab.opas import Opas, find_ks, is_trivial
from opcalab.poset import FinPoset, all_posets

SMALL_POSETS = [p for n in (1, 2) for p in all_posets(n)]


def tables(order, **kw):
    return [a.table for a in enumerate_opcas(order, **kw)]


@pytest.mark.parametrize("order, count", [(ONE.order, 1), (A2, 0)])
def test_known_counts(order, count):
    assert sweep(order).count == count


def test_chain_contains_meet_table():
    assert C2.table in tables(C2.order)


@pytest.mark.parametrize("order", SMALL_POSETS, ids=lambda p: str(p.below))
def test_routes_agree(order):
    assert tables(order) == tables(order, prune=True)


def test_routes_agree_on_three_chain():
    chain = FinPoset.chain(["0", "1", "2"])
    brute = tables(chain)
    assert brute == tables(chain, prune=True)
    assert len(brute) > 0


def test_workers_do_not_change_results():
    vee = FinPoset(["b", "x", "y"], [("b", "x"), ("b", "y")])
    serial = tables(vee, prune=True)
    assert tables(vee, prune=True, workers=3) == serial
    assert tables(vee, workers=2) == serial


@pytest.mark.parametrize("order", SMALL_POSETS, ids=lambda p: str(p.below))
def test_every_structure_is_valid(order):
    for a in enumerate_opcas(order):
        assert find_ks(Opas(order, a.table))
        assert is_trivial(a).holds


def test_limit():
    assert len(tables(C2.order, limit=2)) == 2


def test_size_caps():
    four = FinPoset.antichain(list("abcd"))
    with pytest.raises(SizeLimit):
        next(enumerate_opcas(four))
    with pytest.raises(SizeLimit):
        next(enumerate_opcas(FinPoset.antichain(list("abcde")), prune=True))


def test_pruned_route_reaches_four_elements_without_bottom():
    assert list(enumerate_opcas(FinPoset.antichain(list("abcd")), prune=True)) == []


def test_sweep_report():
    r = sweep(C2.order)
    assert r.has_least_element and r.only_trivial and r.count == r.with_least
