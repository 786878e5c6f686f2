"""Replayable certificates.

A certificate names a claim, its subject, a verdict and a list of
*obligations*: small facts (a tracker tracks a map, a realizer realizes an
inequality, a constructed map equals a recorded one, ...) that together
establish the verdict.  Every OPCA mentioned is serialized in ``context``,
either as an explicit table or as a product / downset construction over other
entries, so that a certificate can be re-checked on its own.

Replay re-checks each obligation against the recorded witnesses.  Negative
facts ("no element realizes ...") are necessarily re-checked exhaustively.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from . import assemblies as asm
from . import downsets as ds
from . import morphisms as mor
from . import products as prod
from .errors import OpcaError, ValidationError
from .finite_models import enumerate_opcas
from .opas import Opas, Opca, combinator_law_violation, ks_pairs
from .poset import FinPoset, bits
from .terms import App, Const, Lam, Term, Var, completeness_violation, eval_closed, kleene_compare

VERDICTS = ("pass", "fail", "not-applicable")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, UTF-8 text, final newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class Certificate:
    claim: str
    subject: dict
    verdict: str
    witness: dict
    search_space: int
    combinator_choice: dict
    context: dict = field(repr=False)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def obligations(self) -> list[dict]:
        return self.witness.get("obligations", [])

    def to_dict(self) -> dict:
        return {"claim": self.claim, "subject": self.subject, "verdict": self.verdict,
                "witness": self.witness, "search_space": self.search_space,
                "combinator_choice": self.combinator_choice, "context": self.context}

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        try:
            return cls(d["claim"], d["subject"], d["verdict"], d["witness"], d["search_space"],
                       d["combinator_choice"], d["context"])
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed certificate: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def bundle_json(certs: list[Certificate]) -> str:
    """Several certificates as one canonical JSON array."""
    return dumps([c.to_dict() for c in certs])


def load_certificates(text: str) -> list[Certificate]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [Certificate.from_dict(d) for d in data]


# -- terms as JSON --------------------------------------------------------------

def term_to_json(t: Term, a: Opas) -> list:
    if isinstance(t, Var):
        return ["var", t.name]
    if isinstance(t, Const):
        return ["const", a.element(t.value)]
    if isinstance(t, App):
        return ["app", term_to_json(t.fun, a), term_to_json(t.arg, a)]
    return ["lam", list(t.params), term_to_json(t.body, a)]


def term_from_json(data, a: Opas) -> Term:
    tag = data[0]
    if tag == "var":
        return Var(data[1])
    if tag == "const":
        return Const(a.index(data[1]))
    if tag == "app":
        return App(term_from_json(data[1], a), term_from_json(data[2], a))
    if tag == "lam":
        return Lam(tuple(data[1]), term_from_json(data[2], a))
    raise ValidationError(f"unknown term tag {tag!r}")


# -- recording ------------------------------------------------------------------

def _poset_json(p: FinPoset) -> dict:
    return {"elements": list(p.elements),
            "le": [[p.elements[i], p.elements[j]] for i, j in p.covers()]}


def _table_json(a: Opas) -> list:
    return [[a.element(x), a.element(y), a.element(v)]
            for x, row in enumerate(a.table) for y, v in enumerate(row) if v is not None]


class Recorder:
    """Collects context entries and obligations while a certificate is built."""

    def __init__(self):
        self.context = {"opcas": {}, "posets": {}, "assemblies": {}, "tables": {}}
        self.obligations: list[dict] = []
        self._names: dict = {}

    def _fresh(self, kind: str, base: str) -> str:
        taken = self.context[kind]
        name, n = base, 2
        while name in taken:
            name, n = f"{base}#{n}", n + 1
        return name

    def opca(self, a: Opca) -> str:
        key = ("opca", a)
        if key in self._names:
            return self._names[key]
        P = prod._REGISTRY.get(a)
        T = ds.as_downset_opca(a)
        if P is not None:
            entry = {"construction": {"op": "product", "factors": [self.opca(f) for f in P.factors]}}
        elif T is not None:
            entry = {"construction": {"op": "T", "base": self.opca(T.base)}}
        else:
            entry = {**_poset_json(a.order), "app": _table_json(a)}
        entry["k"], entry["s"] = a.element(a.k), a.element(a.s)
        name = self._fresh("opcas", a.name or "A")
        self.context["opcas"][name] = entry
        self._names[key] = name
        return name

    def poset(self, p: FinPoset) -> str:
        key = ("poset", p)
        if key not in self._names:
            name = self._fresh("posets", p.name or "P")
            self.context["posets"][name] = _poset_json(p)
            self._names[key] = name
        return self._names[key]

    def table(self, a: Opas) -> str:
        key = ("table", a)
        if key not in self._names:
            name = self._fresh("tables", a.name or "T")
            self.context["tables"][name] = {**_poset_json(a.order), "app": _table_json(a)}
            self._names[key] = name
        return self._names[key]

    def assembly(self, x: asm.Assembly) -> str:
        key = ("assembly", x)
        if key not in self._names:
            name = self._fresh("assemblies", x.name or "X")
            self.context["assemblies"][name] = {
                "base": self.opca(x.base),
                "points": [[p, list(x.base.order.names_of(m))] for p, m in zip(x.points, x.existence)]}
            self._names[key] = name
        return self._names[key]

    # element-level helpers
    @staticmethod
    def el(a: Opas, x: int | None):
        return None if x is None else a.element(x)

    @staticmethod
    def els(a: Opas, xs) -> list:
        return [None if x is None else a.element(x) for x in xs]

    @staticmethod
    def mask(a: Opas, m: int) -> list[str]:
        return list(a.order.names_of(m))

    def raw_map(self, src: Opca, tgt: Opca, fmap) -> dict:
        return {"source": self.opca(src), "target": self.opca(tgt), "map": self.els(tgt, fmap)}

    def morphism(self, f: mor.OpcaMorphism) -> dict:
        return self.raw_map(f.source, f.target, f.map)

    def raw_app(self, src: Opca, tgt: Opca, masks) -> dict:
        return {"source": self.opca(src), "target": self.opca(tgt),
                "map": [self.mask(tgt, m) for m in masks]}

    def applicative(self, f: ds.ApplicativeMorphism) -> dict:
        return self.raw_app(f.source, f.target, f.map)

    def term(self, t: Term, a: Opas):
        return term_to_json(t, a)

    def add(self, kind: str, **data) -> None:
        if kind not in CHECKS:
            raise KeyError(f"no checker for obligation {kind!r}")
        self.obligations.append({"kind": kind, **data})

    def certificate(self, claim: str, subject: dict, verdict: str, search_space: int,
                    summary: dict | None = None) -> Certificate:
        choice = {name: [e["k"], e["s"]] for name, e in self.context["opcas"].items()}
        witness = {"obligations": self.obligations, "summary": summary or {}}
        context = {k: v for k, v in self.context.items() if v}
        return Certificate(claim, subject, verdict, witness, search_space, choice, context)


# -- replay context -------------------------------------------------------------

class Context:
    """Rebuilds the serialized OPCAs, posets, tables and assemblies on demand."""

    def __init__(self, data: dict):
        self.data = data
        self._cache: dict = {}

    def _get(self, kind, name, build):
        key = (kind, name)
        if key not in self._cache:
            try:
                entry = self.data[kind][name]
            except KeyError:
                raise ValidationError(f"certificate context has no {kind[:-1]} {name!r}") from None
            self._cache[key] = build(entry, name)
        return self._cache[key]

    @staticmethod
    def _order(entry, name) -> FinPoset:
        return FinPoset(entry["elements"], [tuple(r) for r in entry["le"]], name=name)

    def _opas(self, entry, name) -> Opas:
        order = self._order(entry, name)
        table = [[None] * len(order) for _ in order.elements]
        for x, y, v in entry["app"]:
            table[order.index(x)][order.index(y)] = order.index(v)
        return Opas(order, table, name=name)

    def _build_opca(self, entry, name) -> Opca:
        c = entry.get("construction")
        if c is None:
            a = self._opas(entry, name)
            out = Opca(a.order, a.table, a.index(entry["k"]), a.index(entry["s"]), name=name)
        elif c["op"] == "product":
            out = prod.product(*(self.opca(f) for f in c["factors"])).opca
        elif c["op"] == "T":
            out = ds.build_T(self.opca(c["base"]), ds.TT_LIMIT).opca
        else:
            raise ValidationError(f"unknown construction {c['op']!r}")
        if out.element(out.k) != entry["k"] or out.element(out.s) != entry["s"]:
            raise ValidationError(f"{name}: recorded combinators do not match the construction")
        return out

    def opca(self, name: str) -> Opca:
        return self._get("opcas", name, self._build_opca)

    def poset(self, name: str) -> FinPoset:
        return self._get("posets", name, self._order)

    def table(self, name: str) -> Opas:
        return self._get("tables", name, self._opas)

    def assembly(self, name: str) -> asm.Assembly:
        def build(entry, nm):
            return asm.assembly(self.opca(entry["base"]), {p: ms for p, ms in entry["points"]}, name=nm)
        return self._get("assemblies", name, build)

    # decoding helpers
    @staticmethod
    def el(a: Opas, x):
        return None if x is None else a.index(x)

    def els(self, a: Opas, xs):
        return tuple(self.el(a, x) for x in xs)

    @staticmethod
    def mask(a: Opas, names) -> int:
        return a.order.mask_of(names)

    def morphism(self, ref) -> tuple[Opca, Opca, tuple]:
        src, tgt = self.opca(ref["source"]), self.opca(ref["target"])
        fmap = self.els(tgt, ref["map"])
        if len(fmap) != len(src) or None in fmap:
            raise ValidationError("recorded map is not total")
        return src, tgt, fmap

    def certified(self, ref) -> mor.OpcaMorphism:
        """The morphism with certificates searched (used where a construction needs them)."""
        src, tgt, fmap = self.morphism(ref)
        return mor.morphism(src, tgt, fmap)

    def applicative(self, ref) -> tuple[Opca, Opca, tuple]:
        src, tgt = self.opca(ref["source"]), self.opca(ref["target"])
        masks = tuple(self.mask(tgt, m) for m in ref["map"])
        if len(masks) != len(src):
            raise ValidationError("recorded applicative map is not total")
        return src, tgt, masks

    def certified_app(self, ref) -> ds.ApplicativeMorphism:
        src, tgt, masks = self.applicative(ref)
        return ds.applicative(src, tgt, masks)


# -- obligation checkers ----------------------------------------------------------

CHECKS: dict[str, Callable[[Context, dict], bool]] = {}
CONSTRUCTIONS: dict[str, Callable[[Context, dict], object]] = {}


def check(kind):
    def deco(fn):
        CHECKS[kind] = fn
        return fn
    return deco


def construction(op):
    def deco(fn):
        CONSTRUCTIONS[op] = fn
        return fn
    return deco


@check("opca")
def _c_opca(ctx, ob):
    ctx.opca(ob["opca"])  # the constructor re-checks axiom (0), k and s
    return True


@check("ks-pairs")
def _c_ks(ctx, ob):
    a = ctx.opca(ob["opca"]) if "opca" in ob else ctx.table(ob["table"])
    return [[a.element(k), a.element(s)] for k, s in ks_pairs(a)] == ob["pairs"]


@check("axiom0-violation")
def _c_axiom0(ctx, ob):
    a = ctx.table(ob["table"])
    a2, a1, b2, b1 = (a.index(x) for x in ob["witness"])
    leq = a.order.leq
    if not (leq[a2][a1] and leq[b2][b1]):
        return False
    v, w = a.app(a1, b1), a.app(a2, b2)
    return v is not None and (w is None or not leq[w][v])


@check("combinators")
def _c_combinators(ctx, ob):
    a = ctx.opca(ob["opca"])
    cs = a.combinators
    got = {f: a.element(getattr(cs, f)) for f in ("i", "kbar", "p", "p0", "p1", "case_c")}
    return got == ob["values"] and combinator_law_violation(a, cs) is None


@check("term-value")
def _c_term_value(ctx, ob):
    a = ctx.opca(ob["opca"])
    return Recorder.el(a, eval_closed(a, term_from_json(ob["term"], a))) == ob["value"]


@check("completeness")
def _c_completeness(ctx, ob):
    a = ctx.opca(ob["opca"])
    return completeness_violation(a, term_from_json(ob["term"], a), ob["vars"], a.index(ob["element"])) is None


@check("kleene")
def _c_kleene(ctx, ob):
    a = ctx.opca(ob["opca"])
    return kleene_compare(a, term_from_json(ob["lhs"], a), term_from_json(ob["rhs"], a), ob["mode"]) == ob["holds"]


@check("tracks")
def _c_tracks(ctx, ob):
    src, tgt, fmap = ctx.morphism(ob["morphism"])
    return mor.tracker_violation(src, tgt, fmap, tgt.index(ob["tracker"])) is None


@check("order-realizer")
def _c_order(ctx, ob):
    src, tgt, fmap = ctx.morphism(ob["morphism"])
    return mor.order_violation(src, tgt, fmap, tgt.index(ob["realizer"])) is None


@check("not-morphism")
def _c_not_morphism(ctx, ob):
    src, tgt, fmap = ctx.morphism(ob["morphism"])
    return mor.find_tracker(src, tgt, fmap) is None or mor.find_order_realizer(src, tgt, fmap) is None


@check("realizes")
def _c_realizes(ctx, ob):
    b = ctx.opca(ob["target"])
    return mor.realizer_violation(b, ctx.els(b, ob["lhs"]), ctx.els(b, ob["rhs"]), b.index(ob["realizer"])) is None


@check("no-realizer")
def _c_no_realizer(ctx, ob):
    b = ctx.opca(ob["target"])
    return mor.find_realizer(b, ctx.els(b, ob["lhs"]), ctx.els(b, ob["rhs"])) is None


def _morph(ctx, ref) -> mor.OpcaMorphism:
    return ctx.certified(ref)


@check("cd")
def _c_cd(ctx, ob):
    src, tgt, fmap = ctx.morphism(ob["morphism"])
    n = tgt.index(ob["n"])
    choices = ctx.els(src, ob["choices"])
    if len(choices) != len(tgt):
        return False
    for s, r in enumerate(choices):
        v = None if r is None else tgt.app(n, fmap[r])
        if v is None or not tgt.leq[v][s]:
            return False
    return True


@check("no-cd")
def _c_no_cd(ctx, ob):
    return mor.check_cd(_morph(ctx, ob["morphism"])) is None


@check("cdm")
def _c_cdm(ctx, ob):
    f = _morph(ctx, ob["morphism"])
    m = f.target.index(ob["m"])
    choices = ctx.els(f.source, ob["choices"])
    return len(choices) == len(f.target) and all(
        r is not None and mor.cdm_r_ok(f, m, s, r) for s, r in enumerate(choices))


@check("no-cdm")
def _c_no_cdm(ctx, ob):
    return mor.check_cdm(_morph(ctx, ob["morphism"])) is None


@check("lower-bound")
def _c_lower_bound(ctx, ob):
    a = ctx.opca(ob["opca"]) if "opca" in ob else ctx.poset(ob["poset"])
    order = a.order if isinstance(a, Opas) else a
    w = order.index(ob["bound"])
    return all(order.leq[w][order.index(v)] for v in ob["values"])


@check("no-lower-bound")
def _c_no_lower_bound(ctx, ob):
    a = ctx.opca(ob["opca"]) if "opca" in ob else ctx.poset(ob["poset"])
    order = a.order if isinstance(a, Opas) else a
    return not order.has_lower_bound(order.mask_of(ob["values"]))


@check("discrete")
def _c_discrete(ctx, ob):
    return mor.is_discrete(_morph(ctx, ob["morphism"])).holds


@check("not-discrete")
def _c_not_discrete(ctx, ob):
    src, tgt, fmap = ctx.morphism(ob["morphism"])
    x = src.order.mask_of(ob["subset"])
    img = 0
    for a in bits(x):
        img |= 1 << fmap[a]
    return tgt.order.has_lower_bound(img) and not src.order.has_lower_bound(x)


@check("equal")
def _c_equal(ctx, ob):
    return ob["lhs"] == ob["rhs"]


@check("construction")
def _c_construction(ctx, ob):
    return CONSTRUCTIONS[ob["op"]](ctx, ob["args"]) == ob["result"]


@check("app-tracks")
def _c_app_tracks(ctx, ob):
    src, tgt, masks = ctx.applicative(ob["morphism"])
    return ds.app_tracker_violation(src, tgt, masks, tgt.index(ob["tracker"])) is None


@check("app-order-realizer")
def _c_app_order(ctx, ob):
    src, tgt, masks = ctx.applicative(ob["morphism"])
    return ds.app_order_violation(src, tgt, masks, tgt.index(ob["realizer"])) is None


@check("not-applicative")
def _c_not_app(ctx, ob):
    src, tgt, masks = ctx.applicative(ob["morphism"])
    return ds.find_app_tracker(src, tgt, masks) is None or ds.find_app_order_realizer(src, tgt, masks) is None


@check("app-realizes")
def _c_app_realizes(ctx, ob):
    b = ctx.opca(ob["target"])
    lhs = tuple(ctx.mask(b, m) for m in ob["lhs"])
    rhs = tuple(ctx.mask(b, m) for m in ob["rhs"])
    return ds.app_realizer_ok(b, lhs, rhs, b.index(ob["realizer"]))


@check("app-no-realizer")
def _c_app_no_realizer(ctx, ob):
    b = ctx.opca(ob["target"])
    lhs = tuple(ctx.mask(b, m) for m in ob["lhs"])
    rhs = tuple(ctx.mask(b, m) for m in ob["rhs"])
    return ds.find_app_realizer(b, lhs, rhs) is None


@check("not-projective")
def _c_not_projective(ctx, ob):
    return ds.projectivity_search(ctx.certified_app(ob["morphism"])) is None


@check("app-cd")
def _c_app_cd(ctx, ob):
    src, tgt, masks = ctx.applicative(ob["morphism"])
    n = tgt.index(ob["n"])
    choices = ctx.els(src, ob["choices"])
    if len(choices) != len(tgt):
        return False
    for s, r in enumerate(choices):
        img = None if r is None else ds.image(tgt, n, masks[r])
        if img is None or img & ~tgt.order.below[s]:
            return False
    return True


@check("no-app-cd")
def _c_no_app_cd(ctx, ob):
    return ds.applicative_cd(ctx.certified_app(ob["morphism"])) is None


def _maps(ctx, a: Opca, b: Opca, rows):
    return [ctx.els(b, row) for row in rows]


@check("order-reflection")
def _c_reflection(ctx, ob):
    """For every recorded pair g, g': (s0,s1) realizes g <= g' when both coordinates compare."""
    P = prod.as_product(ctx.opca(ob["product"]))
    b = ctx.opca(ob["source"])
    maps = _maps(ctx, b, P.opca, ob["maps"])
    if sorted(maps) != sorted(f.map for f in mor.hom_set(b, P.opca)):
        return False
    for g, row in zip(maps, ob["realizers"]):
        for g2, s in zip(maps, row):
            coords = [([pi.map[z] for z in g], [pi.map[z] for z in g2]) for pi in P.projections]
            if s is None:
                if all(mor.find_realizer(A, x, y) is not None for A, (x, y) in zip(P.factors, coords)):
                    return False
                continue
            z = P.opca.index(s)
            if any(mor.realizer_violation(A, x, y, sj) is not None
                   for A, (x, y), sj in zip(P.factors, coords, P.split(z))):
                return False
            if mor.realizer_violation(P.opca, g, g2, z) is not None:
                return False
    return True


@check("mediators")
def _c_mediators(ctx, ob):
    """⟨f0,f1⟩ followed by π_j is f_j on the nose, for every recorded pair."""
    P = prod.as_product(ctx.opca(ob["product"]))
    b = ctx.opca(ob["source"])
    for j, key in enumerate(("f0", "f1")):
        if sorted(_maps(ctx, b, P.factors[j], ob[key])) != sorted(f.map for f in mor.hom_set(b, P.factors[j])):
            return False
    for m0 in _maps(ctx, b, P.factors[0], ob["f0"]):
        for m1 in _maps(ctx, b, P.factors[1], ob["f1"]):
            t = prod.tuple_morphism(mor.morphism(b, P.factors[0], m0), mor.morphism(b, P.factors[1], m1))
            if tuple(P.projections[0].map[z] for z in t.map) != m0 or \
                    tuple(P.projections[1].map[z] for z in t.map) != m1:
                return False
    return True


@check("couniqueness")
def _c_couniqueness(ctx, ob):
    """The constructed realizer for every comparable pair g, g' : A0×A1 -> B."""
    P = prod.as_product(ctx.opca(ob["product"]))
    b = ctx.opca(ob["target"])
    maps = _maps(ctx, P.opca, b, ob["maps"])
    gs = [mor.morphism(P.opca, b, m) for m in maps]
    for g, row in zip(gs, ob["realizers"]):
        for g2, entry in zip(gs, row):
            if entry is None:
                continue
            s0, s1, s = (b.index(x) for x in entry)
            if prod.couniqueness_realizer(g, g2, s0, s1) != s:
                return False
            if mor.realizer_violation(b, g.map, g2.map, s) is not None:
                return False
    return True


@check("noprod")
def _c_noprod(ctx, ob):
    p0, p1 = ctx.poset(ob["p0"]), ctx.poset(ob["p1"])
    if p0.least() is not None or p1.least() is not None:
        return False
    w = ds.noprod_witness(p0, p1)
    alphas = [list(w.product.names_of(m)) for m in w.alphas]
    return alphas == ob["alphas"] and w.intersection == 0 and ob["intersection"] == []


@check("opca-count")
def _c_opca_count(ctx, ob):
    p = ctx.poset(ob["poset"])
    count = sum(1 for _ in enumerate_opcas(p, prune=True))
    return count == ob["count"]


@check("asm-tracks")
def _c_asm_tracks(ctx, ob):
    x, y = ctx.assembly(ob["source"]), ctx.assembly(ob["target"])
    fmap = tuple(y.index(p) for p in ob["map"])
    return asm.tracker_ok(x, y, fmap, x.base.index(ob["tracker"]))


@check("asm-no-tracker")
def _c_asm_no_tracker(ctx, ob):
    x, y = ctx.assembly(ob["source"]), ctx.assembly(ob["target"])
    fmap = tuple(y.index(p) for p in ob["map"])
    return asm.find_assembly_tracker(fmap, x, y) is None


@check("nabla")
def _c_nabla(ctx, ob):
    x = ctx.assembly(ob["assembly"])
    return all(m == x.base.order.full for m in x.existence) and list(asm.gamma(x)) == ob["points"]


# -- constructions replayed by recomputation ----------------------------------------

def _names(a: Opas, xs):
    return [None if x is None else a.element(x) for x in xs]


def _masks(a: Opas, ms):
    return [list(a.order.names_of(m)) for m in ms]


@construction("compose")
def _k_compose(ctx, args):
    (_, _, f), (_, c, g) = ctx.morphism(args["f"]), ctx.morphism(args["g"])
    return _names(c, (g[x] for x in f))


@construction("T-map")
def _k_T(ctx, args):
    f = ds.T_on_morphism(_morph(ctx, args["f"]))
    return _names(f.target, f.map)


@construction("delta")
def _k_delta(ctx, args):
    f = ds.delta_map(ctx.opca(args["opca"]))
    return _names(f.target, f.map)


@construction("union")
def _k_union(ctx, args):
    f = ds.union_map(ctx.opca(args["opca"]))
    return _names(f.target, f.map)


@construction("projection")
def _k_projection(ctx, args):
    P = prod.as_product(ctx.opca(args["product"]))
    f = P.projections[args["j"]]
    return _names(f.target, f.map)


@construction("coprojection")
def _k_coprojection(ctx, args):
    P = prod.as_product(ctx.opca(args["product"]))
    f = P.coprojections[args["j"]]
    return _names(f.target, f.map)


@construction("tuple")
def _k_tuple(ctx, args):
    f = prod.tuple_morphism(_morph(ctx, args["f0"]), _morph(ctx, args["f1"]))
    return _names(f.target, f.map)


@construction("cotuple")
def _k_cotuple(ctx, args):
    c = prod.cotuple_morphism(_morph(ctx, args["f0"]), _morph(ctx, args["f1"]))
    b = c.morphism.target
    return {"map": _names(b, c.morphism.map), "tracker": b.element(c.morphism.tracker),
            "order_realizer": b.element(c.morphism.order_realizer),
            "down": _names(b, c.down), "up": _names(b, c.up)}


@construction("couniqueness")
def _k_couniqueness(ctx, args):
    g, g2 = _morph(ctx, args["g"]), _morph(ctx, args["g2"])
    b = g.target
    return b.element(prod.couniqueness_realizer(g, g2, b.index(args["s0"]), b.index(args["s1"])))


@construction("m-from-n")
def _k_m_from_n(ctx, args):
    f = _morph(ctx, args["f"])
    return f.target.element(mor.construct_m_from_n(f, f.target.index(args["n"])))


@construction("cd-tuple")
def _k_cd_tuple(ctx, args):
    f0, f1 = _morph(ctx, args["f0"]), _morph(ctx, args["f1"])
    n = prod.cd_tuple_witness(f0, f1, f0.target.index(args["n0"]), f1.target.index(args["n1"]))
    return prod.tuple_morphism(f0, f1).target.element(n)


@construction("disjointness")
def _k_disjoint(ctx, args):
    f0, f1 = _morph(ctx, args["f0"]), _morph(ctx, args["f1"])
    if args.get("dual"):
        fn, realizers = prod.dual_disjointness_certificate, f0.target
    else:
        fn, realizers = prod.disjointness_certificate, prod.product(f0.target, f1.target).opca
    w = fn(f0, f1, realizers.index(args["s"]), realizers.index(args["s_back"]))
    return [f0.target.element(w.bound0), f1.target.element(w.bound1)]


@construction("adj-coproduct-unit")
def _k_adj_unit(ctx, args):
    f = mor.check_adjunction(_morph(ctx, args["f_left"]), _morph(ctx, args["f_right"]))
    g = mor.check_adjunction(_morph(ctx, args["g_left"]), _morph(ctx, args["g_right"]))
    f = mor.AdjointPair(f.left, f.right, f.left.source.index(args["r"]), f.counit_realizer)
    g = mor.AdjointPair(g.left, g.right, g.left.source.index(args["s"]), g.counit_realizer)
    h = prod.adj_coproduct(f, g)
    c = h.left.source
    return {"unit": c.element(h.unit_realizer), "left": _names(h.left.target, h.left.map),
            "right": _names(c, h.right.map)}


@construction("kleisli")
def _k_kleisli(ctx, args):
    (_, _, f), (_, c, g) = ctx.applicative(args["f"]), ctx.applicative(args["g"])
    return _masks(c, ds._kleisli_map(f, g))


@construction("pca-cotuple")
def _k_pca_cotuple(ctx, args):
    c = ds.pca_cotuple(ctx.certified_app(args["f0"]), ctx.certified_app(args["f1"]))
    b = c.morphism.target
    return {"map": _masks(b, c.morphism.map), "down": _names(b, c.down), "up": _names(b, c.up)}


@construction("h-maps")
def _k_h(ctx, args):
    h = ds.h_maps(ctx.opca(args["a0"]), ctx.opca(args["a1"]))
    return {"lower": _names(h.lower.target, h.lower.map), "upper": _names(h.upper.target, h.upper.map)}


@construction("right-adjoint")
def _k_right_adjoint(ctx, args):
    f = _morph(ctx, args["f"])
    ra = ds.right_adjoint_construct(f, f.target.index(args["m"]))
    A, B = f.source, f.target
    return {"g": _masks(A, ra.g.map), "q": A.element(ra.q), "r": A.element(ra.r),
            "s_term": B.element(ra.s_term), "unit": A.element(ra.unit), "counit": B.element(ra.counit),
            "m_is_counit": ra.m_is_counit}


@construction("extraction")
def _k_extraction(ctx, args):
    f, g = ctx.certified_app(args["f"]), ctx.certified_app(args["g"])
    A, B = f.source, f.target
    e = ds.adjoint_to_projective_cd(f, g, (A.index(args["r"]), B.index(args["s"])))
    return {"function": _names(B, e.function), "s_prime": B.element(e.s_prime),
            "r_prime": B.element(e.r_prime)}


@construction("normalize")
def _k_normalize(ctx, args):
    g, (i, u) = ds.order_normalize(ctx.certified_app(args["f"]))
    return _masks(g.target, g.map)


@construction("tilde")
def _k_tilde(ctx, args):
    t = ds.tilde_lift(ctx.certified_app(args["f"]))
    return _names(t.morphism.target, t.morphism.map)


@construction("max-mediator")
def _k_mediator(ctx, args):
    g = ds.maximal_mediator(ctx.certified_app(args["f0"]), ctx.certified_app(args["f1"]))
    return _masks(g.target, g.map)


# -- replay ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReplayResult:
    verdict: str
    failures: tuple[int, ...]
    error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.error is None


def replay(cert: Certificate) -> ReplayResult:
    """Re-check every obligation; the verdict is the recorded one or "invalid"."""
    try:
        ctx = Context(cert.context)
        for name in cert.context.get("opcas", {}):
            ctx.opca(name)
    except (OpcaError, KeyError, ValueError, TypeError) as e:
        return ReplayResult("invalid", (), f"context does not rebuild: {e}")
    failures = []
    for j, ob in enumerate(cert.obligations):
        try:
            ok = CHECKS[ob["kind"]](ctx, ob)
        except (OpcaError, KeyError, ValueError, TypeError, IndexError):
            ok = False
        if not ok:
            failures.append(j)
    if failures:
        return ReplayResult("invalid", tuple(failures))
    return ReplayResult(cert.verdict, ())
