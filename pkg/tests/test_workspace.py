import pytest
from hypothesis import given

from conftest import SMALL_OPCAS, opcas
from opcalab.errors import NoCombinators, ParseError, UnknownName, ValidationError
from opcalab.fixtures import C2, ONE, V3, X
from opcalab.morphisms import identity
from opcalab.workspace import (Workspace, builtin_workspace, format_applicative, format_assembly, format_morphism,
                               format_opca, format_poset, load_workspace, sorted_opca)
from opcalab import downsets as ds

FIXTURE_FILE = "".join(format_opca(a) for a in (ONE, C2, V3))


def load_text(text, strict=True):
    ws = Workspace()
    ws.add_text(text, "test.opca", strict=strict)
    return ws


def test_fixture_file_gives_three_opcas():
    ws = load_text(FIXTURE_FILE)
    assert ws.declared == ["ONE", "C2", "V3"]
    assert ws.opcas["C2"] == C2 and ws.opcas["V3"] == V3


def test_pinned_combinators_accepted():
    text = format_opca(C2).replace("  k 1\n  s 1\n", "  k 0\n  s 0\n")
    a = load_text(text).opcas["C2"]
    assert (a.element(a.k), a.element(a.s)) == ("0", "0")


def test_antichain_table_rejected():
    text = "opca A\n  elements a b\n  app a a -> a\n  app b b -> b\n"
    with pytest.raises(ValidationError) as e:
        load_text(text)
    assert isinstance(e.value.__cause__, NoCombinators)


def test_axiom0_failure_carries_witness():
    text = "opca bad\n  elements 1 0\n  le 0<1\n  app 1 1 -> 1\n"
    with pytest.raises(ValidationError) as e:
        load_text(text)
    assert e.value.witness is not None


def test_lenient_loading_keeps_rejections():
    text = FIXTURE_FILE + "opca A\n  elements a b\n  app a a -> a\n"
    ws = load_text(text, strict=False)
    assert [r[0] for r in ws.rejected] == ["A"]
    assert "A" not in ws.opcas


@pytest.mark.parametrize("text, line", [
    ("  elements a\n", 1),
    ("poset P\n  elements a b\n  le a<\n", 3),
    ("opca Q\n  elements a\n  app a -> a\n", 3),
    ("opca Q\n  elements a\n  bogus\n", 3),
    ("poset P\n  elements a\nposet P\n  elements b\n", 3),
    ("morphism f : C2 => C2\n  map 1 -> 1\n", 1),
    ("assembly Y over C2\n  point y 0\n", 2),
])
def test_parse_errors_report_lines(text, line):
    ws = builtin_workspace()
    with pytest.raises(ParseError) as e:
        ws.add_text(text, "bad.opca")
    assert e.value.line == line and e.value.path == "bad.opca"


def test_parse_error_column():
    with pytest.raises(ParseError) as e:
        load_text("   elements a\n")
    assert e.value.column == 4


def test_unknown_reference():
    with pytest.raises(UnknownName):
        builtin_workspace().add_text("morphism f : C2 -> NOPE\n  map 1 -> 1\n")


def test_morphism_and_applicative_blocks():
    ws = builtin_workspace()
    ws.add_text("morphism f : C2 -> V3\n  map 1 -> a\n  map 0 -> ⊥\n"
                "applicative g : C2 -o V3\n  map 1 -> {a, b}\n  map 0 -> {⊥}\n")
    assert ws.morphisms["f"].named() == {"1": "a", "0": "⊥"}
    assert ws.applicatives["g"].map[0] == V3.order.full


def test_applicative_values_are_closed():
    ws = builtin_workspace()
    ws.add_text("applicative g : C2 -o V3\n  map 1 -> {a}\n  map 0 -> {a}\n")
    assert set(V3.order.names_of(ws.applicatives["g"].map[0])) == {"a", "⊥"}


def test_non_morphism_rejected():
    ws = builtin_workspace()
    with pytest.raises(ParseError):
        ws.add_text("morphism f : C2 -> V3\n  map 1 -> a\n")


def test_assembly_block():
    ws = builtin_workspace()
    ws.add_text(format_assembly(X, "Y"))
    assert ws.assemblies["Y"].existence == X.existence


def test_expressions():
    ws = builtin_workspace()
    assert len(ws.opca("C2*V3")) == 6
    assert len(ws.opca("T(V3)")) == 4
    assert len(ws.opca("(C2×C2)*ONE")) == 4
    assert ws.morphism("id(C2)") == identity(C2)
    assert ws.morphism("pi1(C2,V3)").target == V3
    assert ws.applicative("delta(V3)") == ds.delta(V3)


def test_sorted_seed_order():
    ws = builtin_workspace("sorted")
    assert ws.opcas["C2"].elements == ("0", "1")
    a = ws.opcas["C2"]
    assert a.element(a.k) == "1"


def test_load_workspace_files(tmp_path):
    path = tmp_path / "w.opca"
    path.write_text(format_poset(V3.order, "P") + format_morphism(identity(C2), "f"), encoding="utf-8")
    ws = load_workspace([path])
    assert ws.posets["P"] == V3.order.relabel(range(3)) or ws.posets["P"].elements == V3.elements
    assert "f" in ws.morphisms
    with pytest.raises(ParseError):
        load_workspace([tmp_path / "missing.opca"])


@given(opcas)
def test_opca_round_trip(a):
    if any(ch in x for x in a.elements for ch in ",<{}#"):
        a = sorted_opca(a)
        if any(ch in x for x in a.elements for ch in ",<{}#"):
            return
    ws = load_text(format_opca(a, "W"))
    assert ws.opcas["W"] == a


def test_round_trip_morphisms():
    ws = builtin_workspace()
    g = ds.applicative(C2, V3, {"1": ["a", "b"], "0": ["⊥"]})
    ws.add_text(format_applicative(g, "g") + format_morphism(identity(V3), "h"))
    assert ws.applicatives["g"] == g and ws.morphisms["h"] == identity(V3)


def test_pool_round_trips_are_exercised():
    plain = [a for a in SMALL_OPCAS if not any(ch in x for x in a.elements for ch in ",<{}#")]
    assert len(plain) >= 10
