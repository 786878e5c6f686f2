"""Certificate builders: one function per checkable claim.

Each builder runs the relevant searches, records the witnesses it found as
obligations, and returns a :class:`~opcalab.certificates.Certificate` whose
``witness["summary"]`` holds a short human-readable digest.
"""

from __future__ import annotations

from itertools import product as cartesian
from typing import Sequence

from . import assemblies as asm
from . import downsets as ds
from . import morphisms as mor
from . import products as prod
from .certificates import Certificate, Recorder
from .errors import NotApplicable, SizeLimit
from .finite_models import enumerate_opcas, sweep
from .opas import Opas, Opca, axiom0_violation, is_pseudotrivial, is_trivial, ks_pairs
from .poset import FinPoset
from .terms import (Lam, Term, Var, all_terms, bracket_abstract, completeness_violation,
                    eval_closed, free_vars, kleene_compare, parse_term)

PASS, FAIL, NA = "pass", "fail", "not-applicable"


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


# -- structures ----------------------------------------------------------------

def validate(opcas: Sequence[Opca], rejected: Sequence[tuple[str, Opas | None, str]] = ()) -> Certificate:
    """Every accepted OPCA re-validates; every rejected table carries its reason.

    ``rejected`` holds (name, opas or None, message) for blocks that failed.
    """
    rec = Recorder()
    names = [rec.opca(a) for a in opcas]
    for name in names:
        rec.add("opca", opca=name)
    failures = []
    for name, opas, message in rejected:
        failures.append({"name": name, "reason": message})
        if opas is None:
            continue
        w = axiom0_violation(opas.order, opas.table)
        tab = rec.table(opas)
        if w is not None:
            rec.add("axiom0-violation", table=tab, witness=[opas.element(x) for x in w])
        else:
            rec.add("ks-pairs", table=tab, pairs=[])
    return rec.certificate("validate", {"opcas": names}, _verdict(not failures), len(opcas) + len(rejected),
                           {"accepted": names, "rejected": failures})


def combinators(a: Opca) -> Certificate:
    rec = Recorder()
    name = rec.opca(a)
    pairs = [[a.element(k), a.element(s)] for k, s in ks_pairs(a)]
    rec.add("ks-pairs", opca=name, pairs=pairs)
    cs = a.combinators
    values = {f: a.element(getattr(cs, f)) for f in ("i", "kbar", "p", "p0", "p1", "case_c")}
    rec.add("combinators", opca=name, values=values)
    return rec.certificate("combinators", {"opca": name}, PASS, len(a) ** 2,
                           {"pairs": pairs, "chosen": [a.element(a.k), a.element(a.s)], **values})


def trivial(a: Opca) -> Certificate:
    rec = Recorder()
    name = rec.opca(a)
    v = is_trivial(a)
    everything = list(a.elements)
    if v.holds:
        rec.add("lower-bound", opca=name, values=everything, bound=a.element(v.witness))
    else:
        rec.add("no-lower-bound", opca=name, values=everything)
    pv = is_pseudotrivial(a)
    if not pv.holds:
        rec.add("no-lower-bound", opca=name, values=[a.element(x) for x in pv.witness])
    summary = {"trivial": v.holds, "pseudotrivial": pv.holds,
               "witness": a.element(v.witness) if v.holds else [a.element(x) for x in v.witness]}
    return rec.certificate("trivial", {"opca": name}, _verdict(v.holds), len(a), summary)


# -- terms ----------------------------------------------------------------------

def evaluate_term(a: Opca, text: str) -> Certificate:
    """Compile binders, then evaluate; undefined results fail."""
    rec = Recorder()
    name = rec.opca(a)
    t = parse_term(text, a)
    v = eval_closed(a, t)
    rec.add("term-value", opca=name, term=rec.term(t, a), value=rec.el(a, v))
    return rec.certificate("eval", {"opca": name, "term": text}, _verdict(v is not None), 1,
                           {"value": rec.el(a, v) if v is not None else "undefined"})


def compile_term_certificate(a: Opca, text: str) -> Certificate:
    """λ*-compile a binder term and check combinatory completeness for it."""
    rec = Recorder()
    name = rec.opca(a)
    t = parse_term(text, a)
    if isinstance(t, Lam):
        variables, body = list(t.params), t.body
    else:
        variables, body = sorted(free_vars(t)), t
        if not variables:
            variables = ["_"]
    e = bracket_abstract(a, body, variables)
    rec.add("completeness", opca=name, term=rec.term(body, a), vars=variables, element=a.element(e))
    return rec.certificate("compile", {"opca": name, "term": text}, PASS, len(a) ** len(variables),
                           {"element": a.element(e), "variables": variables})


def kleene(a: Opca, lhs: str, rhs: str, mode: str) -> Certificate:
    rec = Recorder()
    name = rec.opca(a)
    t1, t2 = parse_term(lhs, a), parse_term(rhs, a)
    holds = kleene_compare(a, t1, t2, mode)
    rec.add("kleene", opca=name, lhs=rec.term(t1, a), rhs=rec.term(t2, a), mode=mode, holds=holds)
    return rec.certificate("kleene", {"opca": name, "lhs": lhs, "rhs": rhs, "mode": mode},
                           _verdict(holds), 1, {"holds": holds})


def completeness_terms(a: Opca, n_vars: int, max_depth: int = 3) -> tuple[list[str], list[Term]]:
    """Variables x, y, z (first n) and all terms of depth <= max_depth over them and two constants."""
    from .terms import Const

    variables = ["x", "y", "z"][:n_vars]
    consts = [Const(c) for c in range(min(2, len(a)))]
    return variables, all_terms([Var(v) for v in variables] + consts, max_depth)


def completeness(a: Opca, max_depth: int = 3, max_vars: int = 3) -> Certificate:
    """Both clauses of combinatory completeness for every corpus term."""
    rec = Recorder()
    name = rec.opca(a)
    failures = []
    count = 0
    for n in range(1, max_vars + 1):
        variables, terms = completeness_terms(a, n, max_depth)
        for t in terms:
            e = bracket_abstract(a, t, variables)
            bad = completeness_violation(a, t, variables, e)
            count += 1
            if bad is not None:
                failures.append({"term": rec.term(t, a), "clause": bad[0]})
                continue
            rec.add("completeness", opca=name, term=rec.term(t, a), vars=variables, element=a.element(e))
    return rec.certificate("combinatory-completeness", {"opca": name}, _verdict(not failures), count,
                           {"terms": count, "failures": failures})


# -- morphisms --------------------------------------------------------------------

def _record_morphism(rec: Recorder, f: mor.OpcaMorphism) -> dict:
    ref = rec.morphism(f)
    rec.add("tracks", morphism=ref, tracker=f.target.element(f.tracker))
    rec.add("order-realizer", morphism=ref, realizer=f.target.element(f.order_realizer))
    return ref


def hom(a: Opca, b: Opca, budget: int = mor.HOM_BUDGET) -> Certificate:
    """Classify every total map a -> b as a morphism (with certificates) or not."""
    rec = Recorder()
    src, tgt = rec.opca(a), rec.opca(b)
    good = 0
    total = len(b) ** len(a)
    if total > budget:
        raise SizeLimit(f"{total} maps exceed the budget {budget}")
    for fmap in mor.all_maps(a, b):
        f = mor.try_morphism(a, b, fmap)
        if f is None:
            rec.add("not-morphism", morphism=rec.raw_map(a, b, fmap))
        else:
            _record_morphism(rec, f)
            good += 1
    return rec.certificate("hom-set", {"source": src, "target": tgt}, PASS, total,
                           {"maps": total, "morphisms": good})


def _record_ineq(rec: Recorder, target: Opca, lhs, rhs, s: int | None) -> None:
    data = dict(target=rec.opca(target), lhs=rec.els(target, lhs), rhs=rec.els(target, rhs))
    if s is None:
        rec.add("no-realizer", **data)
    else:
        rec.add("realizes", realizer=target.element(s), **data)


def ineq(f: mor.OpcaMorphism, g: mor.OpcaMorphism) -> Certificate:
    rec = Recorder()
    c = mor.find_inequality_realizer(f, g)
    _record_morphism(rec, f)
    _record_morphism(rec, g)
    s = None if c is None else c.realizer
    _record_ineq(rec, f.target, f.map, g.map, s)
    return rec.certificate("inequality", {"lhs": rec.morphism(f), "rhs": rec.morphism(g)},
                           _verdict(s is not None), len(f.target),
                           {"realizer": rec.el(f.target, s)})


def _record_cd(rec: Recorder, f: mor.OpcaMorphism) -> int | None:
    n = mor.check_cd(f)
    ref = rec.morphism(f)
    if n is None:
        rec.add("no-cd", morphism=ref)
    else:
        rec.add("cd", morphism=ref, n=f.target.element(n), choices=rec.els(f.source, mor.cd_choices(f, n)))
    return n


def _record_cdm(rec: Recorder, f: mor.OpcaMorphism, m: int | None) -> None:
    ref = rec.morphism(f)
    if m is None:
        rec.add("no-cdm", morphism=ref)
    else:
        rec.add("cdm", morphism=ref, m=f.target.element(m), choices=rec.els(f.source, mor.cdm_choices(f, m)))


def cd(f: mor.OpcaMorphism) -> Certificate:
    rec = Recorder()
    _record_morphism(rec, f)
    n = _record_cd(rec, f)
    return rec.certificate("cd", {"morphism": rec.morphism(f)}, _verdict(n is not None), len(f.target),
                           {"n": rec.el(f.target, n)})


def cdm(f: mor.OpcaMorphism) -> Certificate:
    """Direct cdm search plus the m constructed from a cd witness n."""
    rec = Recorder()
    _record_morphism(rec, f)
    m = mor.check_cdm(f)
    _record_cdm(rec, f, m)
    n = _record_cd(rec, f)
    summary = {"m": rec.el(f.target, m), "n": rec.el(f.target, n)}
    if n is not None:
        built = mor.construct_m_from_n(f, n)
        ref = rec.morphism(f)
        rec.add("construction", op="m-from-n", args={"f": ref, "n": f.target.element(n)},
                result=f.target.element(built))
        _record_cdm(rec, f, built)
        summary["m_from_n"] = f.target.element(built)
    ok = (m is None) == (n is None)
    return rec.certificate("cdm", {"morphism": rec.morphism(f)}, _verdict(ok and m is not None),
                           len(f.target), summary)


def discrete(f: mor.OpcaMorphism) -> Certificate:
    rec = Recorder()
    _record_morphism(rec, f)
    v = mor.is_discrete(f)
    ref = rec.morphism(f)
    if v.holds:
        rec.add("discrete", morphism=ref)
    else:
        rec.add("not-discrete", morphism=ref, subset=list(f.source.order.names_of(v.witness)))
    return rec.certificate("discrete", {"morphism": ref}, _verdict(v.holds), 2 ** len(f.source),
                           {"witness": None if v.holds else list(f.source.order.names_of(v.witness))})


def zero(f: mor.OpcaMorphism, budget: int = mor.HOM_BUDGET) -> Certificate:
    """All three zero-morphism characterizations, each with its own evidence."""
    rec = Recorder()
    ref = _record_morphism(rec, f)
    r = mor.is_zero_morphism(f, budget)
    B = f.target
    if r.lower_bound is not None:
        rec.add("lower-bound", opca=rec.opca(B), values=rec.els(B, f.map), bound=B.element(r.lower_bound))
    else:
        rec.add("no-lower-bound", opca=rec.opca(B), values=rec.els(B, f.map))
    if r.through_one is not None:
        const = (r.through_one,) * len(f.source)
        _record_ineq(rec, B, f.map, const, mor.find_realizer(B, f.map, const))
        _record_ineq(rec, B, const, f.map, mor.find_realizer(B, const, f.map))
    if r.top:
        for g in mor.hom_set(f.source, B, budget):
            _record_ineq(rec, B, g.map, f.map, mor.find_realizer(B, g.map, f.map))
    summary = {"zero": r.holds, "lower_bound": rec.el(B, r.lower_bound),
               "through_one": rec.el(B, r.through_one), "top": r.top}
    return rec.certificate("zero-morphism", {"morphism": ref}, _verdict(r.holds),
                           len(B) ** len(f.source), summary)


def adjoint(l: mor.OpcaMorphism, r: mor.OpcaMorphism) -> Certificate:
    """l: B -> A left adjoint to r: A -> B; unit realized in B, counit in A."""
    rec = Recorder()
    _record_morphism(rec, l)
    _record_morphism(rec, r)
    unit, counit = mor.adjunction_realizers(l, r)
    B, A = l.source, l.target
    _record_ineq(rec, B, range(len(B)), [r.map[l.map[b]] for b in range(len(B))], unit)
    _record_ineq(rec, A, [l.map[r.map[a]] for a in range(len(A))], range(len(A)), counit)
    return rec.certificate("adjunction", {"left": rec.morphism(l), "right": rec.morphism(r)},
                           _verdict(unit is not None and counit is not None), len(A) + len(B),
                           {"unit": rec.el(B, unit), "counit": rec.el(A, counit),
                            "orientation": "unit id_B <= r∘l in B, counit l∘r <= id_A in A"})


# -- products and coproducts ------------------------------------------------------

def _record_product(rec: Recorder, P: prod.ProductOpca) -> str:
    name = rec.opca(P.opca)
    rec.add("opca", opca=name)
    for j in (0, 1):
        for op, f in (("projection", P.projections[j]), ("coprojection", P.coprojections[j])):
            rec.add("construction", op=op, args={"product": name, "j": j}, result=rec.els(f.target, f.map))
            _record_morphism(rec, f)
    return name


def product_certificate(a0: Opca, a1: Opca) -> Certificate:
    rec = Recorder()
    P = prod.product(a0, a1)
    name = _record_product(rec, P)
    pa = P.opca
    return rec.certificate("product", {"factors": [rec.opca(a0), rec.opca(a1)], "product": name}, PASS,
                           len(pa) ** 2, {"size": len(pa), "k": pa.element(pa.k), "s": pa.element(pa.s)})


def two_product_law(P: prod.ProductOpca, b: Opca, budget: int = mor.HOM_BUDGET) -> Certificate:
    """Mediators commute on the nose; order is reflected by (s0, s1)."""
    rec = Recorder()
    name = _record_product(rec, P)
    src = rec.opca(b)
    homs = [mor.hom_set(b, A) for A in P.factors]
    failures = 0
    for f0 in homs[0]:
        for f1 in homs[1]:
            t = prod.tuple_morphism(f0, f1)
            failures += [P.projections[0].map[z] for z in t.map] != list(f0.map)
            failures += [P.projections[1].map[z] for z in t.map] != list(f1.map)
    rec.add("mediators", product=name, source=src, f0=[rec.els(f.target, f.map) for f in homs[0]],
            f1=[rec.els(f.target, f.map) for f in homs[1]])
    gs = mor.hom_set(b, P.opca, budget)
    pairs = 0
    matrix = []
    for g in gs:
        row = []
        for g2 in gs:
            s = [mor.find_realizer(A, [pi.map[z] for z in g.map], [pi.map[z] for z in g2.map])
                 for A, pi in zip(P.factors, P.projections)]
            if None in s:
                row.append(None)
                continue
            pairs += 1
            realizer = P.pair(*s)
            failures += mor.realizer_violation(P.opca, g.map, g2.map, realizer) is not None
            row.append(P.opca.element(realizer))
        matrix.append(row)
    rec.add("order-reflection", product=name, source=src, maps=[rec.els(P.opca, g.map) for g in gs],
            realizers=matrix)
    return rec.certificate("two-product-law", {"product": name, "source": src},
                           _verdict(failures == 0), len(gs) ** 2,
                           {"mediators": len(homs[0]) * len(homs[1]), "comparable_pairs": pairs,
                            "failures": failures})


def _record_cotuple(rec: Recorder, f0: mor.OpcaMorphism, f1: mor.OpcaMorphism) -> prod.Cotuple:
    c = prod.cotuple_morphism(f0, f1)
    B = f0.target
    h = c.morphism
    rec.add("construction", op="cotuple", args={"f0": rec.morphism(f0), "f1": rec.morphism(f1)},
            result={"map": rec.els(B, h.map), "tracker": B.element(h.tracker),
                    "order_realizer": B.element(h.order_realizer),
                    "down": rec.els(B, c.down), "up": rec.els(B, c.up)})
    _record_morphism(rec, h)
    P = prod.as_product(h.source)
    for j, fj in enumerate((f0, f1)):
        hk = [h.map[z] for z in P.coprojections[j].map]
        _record_ineq(rec, B, hk, fj.map, c.down[j])
        _record_ineq(rec, B, fj.map, hk, c.up[j])
    return c


def coproduct(f0: mor.OpcaMorphism, f1: mor.OpcaMorphism) -> Certificate:
    rec = Recorder()
    c = _record_cotuple(rec, f0, f1)
    B = f0.target
    return rec.certificate("coproduct", {"f0": rec.morphism(f0), "f1": rec.morphism(f1)}, PASS,
                           len(c.morphism.source),
                           {"map": c.morphism.named(), "tracker": B.element(c.morphism.tracker),
                            "order_realizer": B.element(c.morphism.order_realizer),
                            "iso_down": rec.els(B, c.down), "iso_up": rec.els(B, c.up)})


def coproduct_sweep(a0: Opca, a1: Opca, b: Opca, couniqueness: bool = True) -> Certificate:
    """Every cotuple of morphisms a0 -> b, a1 -> b, and the couniqueness realizer for every pair."""
    rec = Recorder()
    h0, h1 = mor.hom_set(a0, b), mor.hom_set(a1, b)
    count = 0
    for f0 in h0:
        for f1 in h1:
            _record_cotuple(rec, f0, f1)
            count += 1
    pairs = 0
    if couniqueness:
        P = prod.product(a0, a1)
        gs = mor.hom_set(P.opca, b)
        matrix = []
        for g in gs:
            row = []
            for g2 in gs:
                s = [mor.find_realizer(b, [g.map[z] for z in k.map], [g2.map[z] for z in k.map])
                     for k in P.coprojections]
                if None in s:
                    row.append(None)
                    continue
                u = prod.couniqueness_realizer(g, g2, *s)
                row.append([b.element(s[0]), b.element(s[1]), b.element(u)])
                pairs += 1
            matrix.append(row)
        rec.add("couniqueness", product=rec.opca(P.opca), target=rec.opca(b),
                maps=[rec.els(b, g.map) for g in gs], realizers=matrix)
    return rec.certificate("coproduct-realizers", {"factors": [rec.opca(a0), rec.opca(a1)], "target": rec.opca(b)},
                           PASS, count + pairs, {"cotuples": count, "couniqueness_pairs": pairs})


def biproduct(a0: Opca, a1: Opca) -> Certificate:
    rec = Recorder()
    P = prod.product(a0, a1)
    name = _record_product(rec, P)
    chk = prod.check_biproduct(a0, a1)
    for j in (0, 1):
        a, other = P.factors[j], P.factors[1 - j]
        same = [P.projections[j].map[z] for z in P.coprojections[j].map]
        iso = chk.iso[j]
        _record_ineq(rec, a, same, range(len(a)), None if iso is None else iso[0])
        _record_ineq(rec, a, range(len(a)), same, None if iso is None else iso[1])
        cross = [P.projections[1 - j].map[z] for z in P.coprojections[j].map]
        if chk.zero[j] is None:
            rec.add("no-lower-bound", opca=rec.opca(other), values=rec.els(other, cross))
        else:
            rec.add("lower-bound", opca=rec.opca(other), values=rec.els(other, cross),
                    bound=other.element(chk.zero[j]))
    return rec.certificate("biproduct", {"product": name}, _verdict(chk.holds), len(a0) + len(a1),
                           {"iso": [None if x is None else [P.factors[j].element(v) for v in x]
                                    for j, x in enumerate(chk.iso)],
                            "zero": [rec.el(P.factors[1 - j], z) for j, z in enumerate(chk.zero)]})


def disjointness(b: Opca, a0: Opca, a1: Opca) -> Certificate:
    """For every f0: b -> a0, f1: b -> a1, extract zero witnesses from κ0f0 ≃ κ1f1 and f0π0 ≃ f1π1."""
    rec = Recorder()
    P = prod.product(a0, a1)
    count = 0
    for f0 in mor.hom_set(b, a0):
        for f1 in mor.hom_set(b, a1):
            lhs = [P.coprojections[0].map[x] for x in f0.map]
            rhs = [P.coprojections[1].map[y] for y in f1.map]
            s, s_back = mor.find_realizer(P.opca, lhs, rhs), mor.find_realizer(P.opca, rhs, lhs)
            if s is not None and s_back is not None:
                w = prod.disjointness_certificate(f0, f1, s, s_back)
                args = {"f0": rec.morphism(f0), "f1": rec.morphism(f1), "s": P.opca.element(s),
                        "s_back": P.opca.element(s_back)}
                rec.add("construction", op="disjointness", args=args,
                        result=[a0.element(w.bound0), a1.element(w.bound1)])
                count += 1
    for c in (a0, a1):
        for g0 in mor.hom_set(a0, c):
            for g1 in mor.hom_set(a1, c):
                lhs = [x for x in g0.map for _ in g1.map]
                rhs = [y for _ in g0.map for y in g1.map]
                s, s_back = mor.find_realizer(c, lhs, rhs), mor.find_realizer(c, rhs, lhs)
                if s is not None and s_back is not None:
                    w = prod.dual_disjointness_certificate(g0, g1, s, s_back)
                    args = {"f0": rec.morphism(g0), "f1": rec.morphism(g1), "s": c.element(s),
                            "s_back": c.element(s_back), "dual": True}
                    rec.add("construction", op="disjointness", args=args,
                            result=[c.element(w.bound0), c.element(w.bound1)])
                    count += 1
    return rec.certificate("disjointness", {"source": rec.opca(b), "factors": [rec.opca(a0), rec.opca(a1)]},
                           PASS, count, {"extractions": count})


def adj_coproduct_certificate(c: Opca) -> Certificate:
    """h* = ⟨id,id⟩ ⊣ h_* = [id,id] for c, with h_*(h*(x)) = p·x·x recomputed."""
    rec = Recorder()
    f = mor.check_adjunction(mor.identity(c), mor.identity(c))
    h = prod.adj_coproduct(f, f)
    args = {"f_left": rec.morphism(f.left), "f_right": rec.morphism(f.right), "r": c.element(f.unit_realizer),
            "g_left": rec.morphism(f.left), "g_right": rec.morphism(f.right), "s": c.element(f.unit_realizer)}
    rec.add("construction", op="adj-coproduct-unit", args=args,
            result={"unit": c.element(h.unit_realizer), "left": rec.els(h.left.target, h.left.map),
                    "right": rec.els(c, h.right.map)})
    _record_morphism(rec, h.left)
    _record_morphism(rec, h.right)
    n = len(c)
    rt = [h.right.map[h.left.map[x]] for x in range(n)]
    recomputed = [c.apply(c.combinators.p, x, x) for x in range(n)]
    rec.add("equal", lhs=rec.els(c, rt), rhs=rec.els(c, recomputed))
    _record_ineq(rec, c, range(n), rt, h.unit_realizer)
    P = h.left.target
    _record_ineq(rec, P, [h.left.map[h.right.map[z]] for z in range(len(P))], range(len(P)), h.counit_realizer)
    return rec.certificate("adjoint-coproduct", {"opca": rec.opca(c)}, _verdict(rt == recomputed), n,
                           {"unit": c.element(h.unit_realizer), "counit": P.element(h.counit_realizer)})


# -- the downset monad -------------------------------------------------------------

def downset(a: Opca) -> Certificate:
    rec = Recorder()
    T = ds.build_T(a)
    name = rec.opca(T.opca)
    rec.add("opca", opca=name)
    d = ds.delta_map(a)
    rec.add("construction", op="delta", args={"opca": rec.opca(a)}, result=rec.els(d.target, d.map))
    _record_morphism(rec, d)
    return rec.certificate("downset", {"base": rec.opca(a), "T": name}, PASS, len(T),
                           {"size": len(T), "elements": list(T.opca.elements)})


def monad_laws(a: Opca) -> Certificate:
    rec = Recorder()
    delta, mu = ds.monad_structure(a)
    TA = ds.build_T(a).opca
    delta_T, mu_T = ds.monad_structure(TA)
    base, tname = rec.opca(a), rec.opca(TA)
    for op, nm, f in (("delta", base, delta), ("union", base, mu), ("delta", tname, delta_T), ("union", tname, mu_T)):
        rec.add("construction", op=op, args={"opca": nm}, result=rec.els(f.target, f.map))
        _record_morphism(rec, f)
    T_delta, T_mu = ds.T_on_morphism(delta), ds.T_on_morphism(mu)
    for g in (T_delta, T_mu):
        src = delta if g is T_delta else mu
        rec.add("construction", op="T-map", args={"f": rec.morphism(src)}, result=rec.els(g.target, g.map))
    laws = ds.monad_law_check(a)

    def composite(f, g):
        h = [g.map[x] for x in f.map]
        rec.add("construction", op="compose", args={"f": rec.morphism(f), "g": rec.morphism(g)},
                result=rec.els(g.target, h))
        return h

    ident = list(range(len(TA)))
    sides = {"left-unit": (composite(delta_T, mu), ident), "right-unit": (composite(T_delta, mu), ident),
             "associativity": (composite(T_mu, mu), composite(mu_T, mu))}
    for law, (lhs, rhs) in sides.items():
        pair = laws.laws[law]
        _record_ineq(rec, TA, lhs, rhs, None if pair is None else pair[0])
        _record_ineq(rec, TA, rhs, lhs, None if pair is None else pair[1])
    kz = laws.laws["kz"]
    TTA = delta_T.target
    _record_ineq(rec, TTA, T_delta.map, delta_T.map, None if kz is None else kz[0])
    return rec.certificate("monad-laws", {"opca": base}, _verdict(laws.holds), len(TTA),
                           {"|TA|": len(TA), "|TTA|": len(TTA), "strict": laws.strict,
                            "holds": {k: v is not None for k, v in laws.laws.items()}})


def _record_app(rec: Recorder, f: ds.ApplicativeMorphism) -> dict:
    ref = rec.applicative(f)
    rec.add("app-tracks", morphism=ref, tracker=f.target.element(f.tracker))
    rec.add("app-order-realizer", morphism=ref, realizer=f.target.element(f.order_realizer))
    return ref


def _record_app_ineq(rec: Recorder, target: Opca, lhs, rhs, s: int | None) -> None:
    data = dict(target=rec.opca(target), lhs=[rec.mask(target, m) for m in lhs],
                rhs=[rec.mask(target, m) for m in rhs])
    if s is None:
        rec.add("app-no-realizer", **data)
    else:
        rec.add("app-realizes", realizer=target.element(s), **data)


def projective_certificate(f: ds.ApplicativeMorphism) -> Certificate:
    rec = Recorder()
    ref = _record_app(rec, f)
    w = ds.projectivity_search(f)
    B = f.target
    if w is None:
        rec.add("not-projective", morphism=ref)
        summary = {"projective": False}
    else:
        principal = [B.order.below[b] for b in w.function]
        _record_app_ineq(rec, B, f.map, principal, w.to_projective)
        _record_app_ineq(rec, B, principal, f.map, w.from_projective)
        summary = {"projective": True, "function": rec.els(B, w.function)}
    n = ds.applicative_cd(f)
    if n is None:
        rec.add("no-app-cd", morphism=ref)
    else:
        rec.add("app-cd", morphism=ref, n=B.element(n), choices=rec.els(f.source, ds.applicative_cd_choices(f, n)))
    summary["cd"] = rec.el(B, n)
    return rec.certificate("projective", {"morphism": ref}, _verdict(w is not None), len(B) ** len(f.source),
                           summary)


def right_adjoint(f: mor.OpcaMorphism, extract: bool = True) -> Certificate:
    """Build g from a cdm witness, certify δf ⊣ g, then recover projectivity and density."""
    rec = Recorder()
    ref = _record_morphism(rec, f)
    A, B = f.source, f.target
    m = mor.check_cdm(f)
    _record_cdm(rec, f, m)
    if m is None:
        return rec.certificate("right-adjoint", {"morphism": ref}, NA, len(B), {"cd": False})
    ra = ds.right_adjoint_construct(f, m)
    rec.add("construction", op="right-adjoint", args={"f": ref, "m": B.element(m)},
            result={"g": [rec.mask(A, x) for x in ra.g.map], "q": A.element(ra.q), "r": A.element(ra.r),
                    "s_term": B.element(ra.s_term), "unit": A.element(ra.unit),
                    "counit": B.element(ra.counit), "m_is_counit": ra.m_is_counit})
    g_ref = _record_app(rec, ra.g)
    rec.add("app-tracks", morphism=g_ref, tracker=A.element(ra.q))
    fp = ds.projective(f)
    _record_app(rec, fp)
    gf = ds._kleisli(fp, ra.g)
    fg = ds._kleisli(ra.g, fp)
    ident_a = [A.order.below[a] for a in range(len(A))]
    ident_b = [B.order.below[b] for b in range(len(B))]
    rec.add("construction", op="kleisli", args={"f": rec.applicative(fp), "g": g_ref},
            result=[rec.mask(A, x) for x in gf])
    rec.add("construction", op="kleisli", args={"f": g_ref, "g": rec.applicative(fp)},
            result=[rec.mask(B, x) for x in fg])
    _record_app_ineq(rec, A, ident_a, gf, ra.unit)
    _record_app_ineq(rec, B, fg, ident_b, ra.counit)
    summary = {"m": B.element(m), "g": ra.g.named(), "q": A.element(ra.q), "unit": A.element(ra.unit),
               "counit": B.element(ra.counit), "m_is_counit": ra.m_is_counit}
    ok = True
    if extract:
        e = ds.adjoint_to_projective_cd(fp, ra.g, (ra.unit, ra.counit))
        rec.add("construction", op="extraction",
                args={"f": rec.applicative(fp), "g": g_ref, "r": A.element(ra.unit), "s": B.element(ra.counit)},
                result={"function": rec.els(B, e.function), "s_prime": B.element(e.s_prime),
                        "r_prime": B.element(e.r_prime)})
        principal = [B.order.below[b] for b in e.function]
        _record_app_ineq(rec, B, principal, fp.map, B.i)
        _record_app_ineq(rec, B, fp.map, principal, e.s_prime)
        rec.add("app-cd", morphism=rec.applicative(fp), n=B.element(e.cd_witness),
                choices=rec.els(A, ds.applicative_cd_choices(fp, e.cd_witness)))
        f0 = mor.try_morphism(A, B, e.function)
        iso = None if f0 is None else mor.equivalent(f0, f)
        ok = iso is not None
        if f0 is not None:
            _record_morphism(rec, f0)
            _record_ineq(rec, B, f0.map, f.map, None if iso is None else iso[0])
            _record_ineq(rec, B, f.map, f0.map, None if iso is None else iso[1])
        summary.update(extracted=rec.els(B, e.function), cd_witness=B.element(e.cd_witness))
    return rec.certificate("right-adjoint", {"morphism": ref}, _verdict(ok), len(B), summary)


def _record_pca_cotuple(rec: Recorder, f0: ds.ApplicativeMorphism, f1: ds.ApplicativeMorphism) -> ds.PcaCotuple:
    c = ds.pca_cotuple(f0, f1)
    B = f0.target
    h = c.morphism
    rec.add("construction", op="pca-cotuple", args={"f0": _record_app(rec, f0), "f1": _record_app(rec, f1)},
            result={"map": [rec.mask(B, m) for m in h.map], "down": rec.els(B, c.down), "up": rec.els(B, c.up)})
    _record_app(rec, h)
    P = prod.as_product(h.source)
    for j, fj in enumerate((f0, f1)):
        hk = [h.map[z] for z in P.coprojections[j].map]
        _record_app_ineq(rec, B, hk, fj.map, c.down[j])
        _record_app_ineq(rec, B, fj.map, hk, c.up[j])
    return c


def pca_coproduct(f0: ds.ApplicativeMorphism, f1: ds.ApplicativeMorphism) -> Certificate:
    rec = Recorder()
    c = _record_pca_cotuple(rec, f0, f1)
    B, h = f0.target, c.morphism
    P = prod.as_product(h.source)
    return rec.certificate("pca-coproduct", {"f0": rec.applicative(f0), "f1": rec.applicative(f1)}, PASS,
                           len(P.opca), {"map": h.named(), "iso_down": rec.els(B, c.down),
                                         "iso_up": rec.els(B, c.up)})


def pca_coproduct_sweep(a0: Opca, a1: Opca, b: Opca) -> Certificate:
    """Every cotuple of applicative morphisms a0 ⊸ b, a1 ⊸ b with its iso realizers."""
    rec = Recorder()
    h0, h1 = ds.app_hom_set(a0, b), ds.app_hom_set(a1, b)
    for f0 in h0:
        for f1 in h1:
            _record_pca_cotuple(rec, f0, f1)
    count = len(h0) * len(h1)
    return rec.certificate("pca-coproduct-realizers",
                           {"factors": [rec.opca(a0), rec.opca(a1)], "target": rec.opca(b)}, PASS, count,
                           {"cotuples": count})


def hmaps(a0: Opca, a1: Opca) -> Certificate:
    rec = Recorder()
    h = ds.h_maps(a0, a1)
    Q, TP = h.lower.source, h.lower.target
    rec.add("construction", op="h-maps", args={"a0": rec.opca(a0), "a1": rec.opca(a1)},
            result={"lower": rec.els(TP, h.lower.map), "upper": rec.els(Q, h.upper.map)})
    _record_morphism(rec, h.lower)
    _record_morphism(rec, h.upper)
    round_trip = [h.upper.map[h.lower.map[z]] for z in range(len(Q))]
    ident = list(range(len(Q)))
    _record_ineq(rec, Q, round_trip, ident, None if h.iso is None else h.iso[0])
    _record_ineq(rec, Q, ident, round_trip, None if h.iso is None else h.iso[1])
    adj = h.adjunction
    _record_ineq(rec, TP, range(len(TP)), [h.lower.map[h.upper.map[z]] for z in range(len(TP))],
                 None if adj is None else adj.unit_realizer)
    _record_ineq(rec, Q, round_trip, ident, None if adj is None else adj.counit_realizer)
    return rec.certificate("h-maps", {"factors": [rec.opca(a0), rec.opca(a1)]},
                           _verdict(h.iso is not None and adj is not None), len(Q) + len(TP),
                           {"|TA0×TA1|": len(Q), "|T(A0×A1)|": len(TP), "iso": h.iso is not None,
                            "adjunction": adj is not None})


def mediator(f0: ds.ApplicativeMorphism, f1: ds.ApplicativeMorphism, sweep_all: bool = True) -> Certificate:
    """The maximal mediator h_*⟨f0,f1⟩ and, within budget, its maximality among all mediators."""
    rec = Recorder()
    g = ds.maximal_mediator(f0, f1)
    P = prod.as_product(g.target)
    args = {"f0": _record_app(rec, f0), "f1": _record_app(rec, f1)}
    rec.add("construction", op="max-mediator", args=args, result=[rec.mask(P.opca, m) for m in g.map])
    _record_app(rec, g)
    for j, fj in enumerate((f0, f1)):
        proj = tuple(fj.target.order.below[b] for b in P.projections[j].map)
        comp = ds._kleisli_map(g.map, proj)
        _record_app_ineq(rec, fj.target, comp, fj.map, ds.find_app_realizer(fj.target, comp, fj.map))
        _record_app_ineq(rec, fj.target, fj.map, comp, ds.find_app_realizer(fj.target, fj.map, comp))
    count, failures = 0, 0
    if sweep_all:
        for h in ds.mediators(f0, f1):
            s = ds.find_app_realizer(P.opca, h.map, g.map)
            _record_app_ineq(rec, P.opca, h.map, g.map, s)
            count += 1
            failures += s is None
    return rec.certificate("mediator", {"f0": args["f0"], "f1": args["f1"]}, _verdict(failures == 0),
                           count, {"mediator": g.named(), "mediators_checked": count, "not_below": failures})


def noprod(p0: FinPoset, p1: FinPoset) -> Certificate:
    rec = Recorder()
    n0, n1 = rec.poset(p0), rec.poset(p1)
    subject = {"p0": n0, "p1": n1}
    try:
        w = ds.noprod_witness(p0, p1)
    except NotApplicable as e:
        for nm, p in ((n0, p0), (n1, p1)):
            if p.least() is not None:
                rec.add("lower-bound", poset=nm, values=list(p.elements), bound=p.elements[p.least()])
        return rec.certificate("noprod-witness", subject, NA, 0, {"reason": str(e)})
    alphas = [list(w.product.names_of(m)) for m in w.alphas]
    rec.add("noprod", p0=n0, p1=n1, alphas=alphas, intersection=list(w.product.names_of(w.intersection)))
    return rec.certificate("noprod-witness", subject, _verdict(w.holds), len(w.product),
                           {"alphas": alphas, "intersection": list(w.product.names_of(w.intersection))})


# -- finite models and assemblies --------------------------------------------------------

def enumerate_certificate(order: FinPoset, limit: int | None = None, prune: bool = False,
                          workers: int = 1) -> Certificate:
    """Count the structures (dual-route replay) and certify the first ``limit`` of them."""
    rec = Recorder()
    name = rec.poset(order)
    report = sweep(order, prune=prune, workers=workers)
    rec.add("opca-count", poset=name, count=report.count)
    if report.has_least_element:
        rec.add("lower-bound", poset=name, values=list(order.elements), bound=order.elements[order.least()])
    shown = []
    if limit:
        for j, a in enumerate(enumerate_opcas(order, limit, prune=prune, workers=workers)):
            a = a.renamed(f"{name}.{j}")
            rec.add("opca", opca=rec.opca(a))
            shown.append(a.app_mapping())
    summary = {"structures": report.count, "with_least_element": report.with_least,
               "only_trivial": report.only_trivial}
    if limit:
        summary["shown"] = [{f"{x}·{y}": v for (x, y), v in m.items()} for m in shown]
    return rec.certificate("opca-count", {"poset": name}, _verdict(report.only_trivial),
                           (len(order) + 1) ** (len(order) ** 2), summary)


def assembly_certificate(x: asm.Assembly, points: Sequence[str]) -> Certificate:
    """Identity tracked by i, Γ∇ = Id, and every function Γ(X) -> S tracked into ∇(S)."""
    rec = Recorder()
    name = rec.assembly(x)
    base = x.base
    ident = asm.identity(x)
    rec.add("asm-tracks", source=name, target=name, map=list(x.points), tracker=base.element(ident.tracker))
    nab = asm.nabla(points, base, name="∇S")
    nname = rec.assembly(nab)
    rec.add("nabla", assembly=nname, points=list(points))
    rec.add("equal", lhs=list(asm.gamma(nab)), rhs=list(points))
    report = asm.adjunction_bijection(x, points)
    for fmap, r in zip(cartesian(range(len(points)), repeat=len(x)), report.trackers):
        data = dict(source=name, target=nname, map=[points[j] for j in fmap])
        if r is None:
            rec.add("asm-no-tracker", **data)
        else:
            rec.add("asm-tracks", tracker=base.element(r), **data)
    return rec.certificate("assembly", {"assembly": name, "set": list(points)}, _verdict(report.holds),
                           report.functions, {"points": x.named(), "functions": report.functions,
                                              "all_tracked": report.holds})


def assembly_composition(xs: Sequence[asm.Assembly]) -> Certificate:
    """Tracked maps compose to tracked maps, over every triple of the given assemblies."""
    rec = Recorder()
    names = [rec.assembly(x) for x in xs]
    tracked = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            maps = []
            for fmap in cartesian(range(len(y)), repeat=len(x)):
                r = asm.find_assembly_tracker(fmap, x, y)
                if r is not None:
                    maps.append((fmap, r))
            tracked[i, j] = maps
    count, failures = 0, 0
    for (i, j), fs in tracked.items():
        for k in range(len(xs)):
            for fmap, _ in fs:
                for gmap, _ in tracked[j, k]:
                    h = tuple(gmap[p] for p in fmap)
                    r = asm.find_assembly_tracker(h, xs[i], xs[k])
                    count += 1
                    data = dict(source=names[i], target=names[k], map=[xs[k].points[p] for p in h])
                    if r is None:
                        failures += 1
                        rec.add("asm-no-tracker", **data)
                    else:
                        rec.add("asm-tracks", tracker=xs[i].base.element(r), **data)
    return rec.certificate("assembly-composition", {"assemblies": names}, _verdict(failures == 0), count,
                           {"composites": count, "untracked": failures})
