"""Acceptance criteria 1-13, each reported as one pass/fail line.

Every criterion builds its certificates once (cached) so that criterion 13 can
replay exactly what criteria 1-12 emitted.
"""

import io
import time
from itertools import product as cartesian

import pytest

from opcalab import assemblies as asm
from opcalab import certify, fixtures
from opcalab import downsets as ds
from opcalab import morphisms as mor
from opcalab.certificates import Certificate, bundle_json
from opcalab.cli import main
from opcalab.opas import combinator_law_violation
from opcalab.poset import all_posets
from opcalab.products import product

FIX = list(fixtures.OPCAS.values())
ONE, C2, V3, X = fixtures.ONE, fixtures.C2, fixtures.V3, fixtures.X

RESULTS: dict[int, tuple[bool, str, float]] = {}
_CERTS: dict[int, list[Certificate]] = {}
_SECONDS: dict[int, float] = {}


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = (ok, detail, _SECONDS.get(n, 0.0))
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({_SECONDS.get(n, 0.0):.1f}s) {detail}")


def certificates(n: int) -> list[Certificate]:
    if n not in _CERTS:
        start = time.perf_counter()
        _CERTS[n] = BUILDERS[n]()
        _SECONDS[n] = time.perf_counter() - start
    return _CERTS[n]


def verdicts(certs) -> dict[str, int]:
    out: dict[str, int] = {}
    for c in certs:
        out[c.verdict] = out.get(c.verdict, 0) + 1
    return out


def all_morphisms():
    return [f for a in FIX for b in FIX for f in mor.hom_set(a, b)]


# -- builders ------------------------------------------------------------------------

def build_1():
    return [certify.completeness(a, max_depth=3, max_vars=3) for a in FIX]


def build_2():
    return [certify.combinators(a) for a in FIX]


def build_3():
    return [certify.hom(a, b) for a in FIX for b in FIX] + [certify.cdm(f) for f in all_morphisms()]


def build_4():
    return [certify.two_product_law(product(a0, a1), b) for a0, a1 in [(C2, C2), (C2, V3)] for b in FIX]


def build_5():
    # the couniqueness matrix is quadratic in hom(A0×A1, B); it is swept where |A0×A1| <= 4
    return [certify.coproduct_sweep(a0, a1, b, couniqueness=len(a0) * len(a1) <= 4)
            for a0, a1, b in cartesian(FIX, repeat=3)]


def build_6():
    return ([certify.biproduct(a0, a1) for a0, a1 in cartesian(FIX, repeat=2)]
            + [certify.disjointness(b, a0, a1) for b in FIX for a0, a1 in cartesian(FIX, repeat=2)])


def build_7():
    return [certify.monad_laws(a) for a in (ONE, C2, V3)]


def build_8():
    return [certify.right_adjoint(f) for f in all_morphisms() if mor.check_cd(f) is not None]


def build_9():
    return ([certify.pca_coproduct_sweep(a0, a1, b) for a0, a1, b in cartesian(FIX, repeat=3)]
            + [certify.hmaps(a0, a1) for a0, a1 in cartesian(FIX, repeat=2)])


def build_10():
    ps = ds.least_free_posets(4)
    return [certify.noprod(p0, p1) for p0 in ps for p1 in ps]


ENUMERATED = all_posets(3) + [fixtures.A2, ONE.order, C2.order]


def build_11():
    return [certify.enumerate_certificate(p) for p in ENUMERATED]


ASSEMBLY_GROUPS = [
    [X, asm.nabla(["p", "q"], C2, name="∇2"), asm.assembly(C2, {"z": ["0"]}, name="Z")],
    [asm.assembly(V3, {"u": ["a", "⊥"], "v": ["b", "⊥"]}, name="Y"), asm.nabla(["r"], V3, name="∇1")],
]


def build_12():
    sets = [["0"], ["0", "1"], ["0", "1", "2"]]
    return ([certify.assembly_certificate(x, s) for group in ASSEMBLY_GROUPS for x in group for s in sets]
            + [certify.assembly_composition(group) for group in ASSEMBLY_GROUPS])


BUILDERS = {1: build_1, 2: build_2, 3: build_3, 4: build_4, 5: build_5, 6: build_6, 7: build_7, 8: build_8,
            9: build_9, 10: build_10, 11: build_11, 12: build_12}


# -- criteria ------------------------------------------------------------------------

def test_criterion_01_combinatory_completeness():
    certs = certificates(1)
    ok = all(c.verdict == "pass" for c in certs) and _SECONDS[1] < 30
    record(1, ok, f"{sum(c.search_space for c in certs)} term/argument checks, verdicts {verdicts(certs)}")
    assert ok


def test_criterion_02_combinator_laws():
    certs = certificates(2)
    direct = [a.name for a in FIX if combinator_law_violation(a, a.combinators) is not None]
    ok = all(c.verdict == "pass" for c in certs) and not direct
    record(2, ok, f"{len(FIX)} fixtures, violations {direct}")
    assert ok


def test_criterion_03_cd_iff_cdm():
    certs = certificates(3)
    cdm = [c for c in certs if c.claim == "cdm"]
    spaces = [c.search_space for c in certs if c.claim == "hom-set"]
    ok = all(c.verdict == "pass" for c in certs) and all("m_from_n" in c.witness["summary"] for c in cdm)
    ok = ok and max(len(b) ** len(a) for a in FIX for b in FIX) <= 256
    record(3, ok, f"{len(cdm)} morphisms over {len(spaces)} hom-sets, verdicts {verdicts(cdm)}")
    assert ok


def test_criterion_04_two_product_law():
    certs = certificates(4)
    ok = all(c.verdict == "pass" for c in certs)
    record(4, ok, f"{len(certs)} (product, B) pairs, {sum(c.search_space for c in certs)} mediators checked")
    assert ok


def test_criterion_05_coproduct_realizers():
    certs = certificates(5)
    ok = all(c.verdict == "pass" for c in certs)
    cot = sum(c.witness["summary"]["cotuples"] for c in certs)
    pairs = sum(c.witness["summary"]["couniqueness_pairs"] for c in certs)
    record(5, ok, f"{cot} cotuples, {pairs} couniqueness pairs")
    assert ok


def test_criterion_06_biproduct_and_disjointness():
    certs = certificates(6)
    ok = all(c.verdict == "pass" for c in certs)
    ext = sum(c.witness["summary"]["extractions"] for c in certs if c.claim == "disjointness")
    record(6, ok, f"{len(FIX) ** 2} biproducts, {ext} disjointness extractions")
    assert ok


def test_criterion_07_monad_laws():
    certs = certificates(7)
    ok = all(c.verdict == "pass" for c in certs) and _SECONDS[7] < 60
    sizes = {c.subject["opca"]: (c.witness["summary"]["|TA|"], c.witness["summary"]["|TTA|"]) for c in certs}
    record(7, ok, f"(|TA|, |TTA|) = {sizes}")
    assert ok


def test_criterion_08_right_adjoint_round_trip():
    certs = certificates(8)
    total = len(all_morphisms())
    ok = all(c.verdict == "pass" and "cd_witness" in c.witness["summary"] for c in certs) and len(certs) == total
    record(8, ok, f"{len(certs)} of {total} morphisms are cd, verdicts {verdicts(certs)}")
    assert ok


def test_criterion_09_pca_coproducts():
    certs = certificates(9)
    ok = all(c.verdict == "pass" for c in certs)
    cot = sum(c.witness["summary"]["cotuples"] for c in certs if c.claim == "pca-coproduct-realizers")
    record(9, ok, f"{cot} applicative cotuples, {len(FIX) ** 2} h-map pairs")
    assert ok


def test_criterion_10_no_products():
    certs = certificates(10)
    ok = all(c.verdict == "pass" and c.witness["summary"]["intersection"] == [] for c in certs)
    ok = ok and _SECONDS[10] < 10
    record(10, ok, f"{len(certs)} poset pairs, {len(ds.least_free_posets(4))} least-free posets")
    assert ok


def label(p) -> str:
    if p.name:
        return p.name
    covers = ",".join(f"{p.elements[i]}<{p.elements[j]}" for i, j in p.covers())
    return f"{''.join(p.elements)}[{covers}]"


def test_criterion_11_finite_model_sweep():
    certs = certificates(11)
    rows = []
    ok = True
    for p, c in zip(ENUMERATED, certs):
        s = c.witness["summary"]
        rows.append(f"{label(p)}:{s['structures']}")
        if len(p) == 3 or p == fixtures.A2:
            ok = ok and s["only_trivial"]
        if p == fixtures.A2:
            ok = ok and s["structures"] == 0
    ok = ok and _SECONDS[11] < 600
    record(11, ok, "report " + " ".join(rows))
    assert ok


def test_criterion_12_assemblies():
    certs = certificates(12)
    ok = all(c.verdict == "pass" for c in certs)
    comp = sum(c.witness["summary"]["composites"] for c in certs if c.claim == "assembly-composition")
    record(12, ok, f"{len(certs) - len(ASSEMBLY_GROUPS)} Γ∇ / tracking checks, {comp} composites")
    assert ok


def test_criterion_13_certificate_replay(tmp_path):
    certs = [c for n in sorted(BUILDERS) for c in certificates(n)]
    start = time.perf_counter()
    reserialized = [c.claim for c in certs if Certificate.from_json(c.to_json()).to_json() != c.to_json()]
    path = tmp_path / "all.json"
    path.write_text(bundle_json(certs), encoding="utf-8")
    out = io.StringIO()
    code = main(["verify", str(path)], out=out)
    reproduced = out.getvalue().count("(reproduced)")
    _SECONDS[13] = time.perf_counter() - start
    ok = reproduced == len(certs) and not reserialized and code == 0
    record(13, ok, f"{reproduced} of {len(certs)} certificates reproduced by verify, "
                   f"{len(reserialized)} serialization changes, exit {code}")
    assert ok


@pytest.mark.parametrize("n", [4, 7, 10])
def test_rebuilt_certificates_are_byte_identical(n):
    first = [c.to_json() for c in certificates(n)]
    assert [c.to_json() for c in BUILDERS[n]()] == first
