"""The nonempty-downset monad T and applicative morphisms A ⊸ B.

An applicative morphism is stored as a tuple of downset bitmasks over the
target's carrier.  Set application α·β is defined iff every a·b with a ∈ α,
b ∈ β is defined, and its value is the down-closure of those products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Mapping

from .errors import (CharacterizationMismatch, ConstructionFailed,
                     ExtractionFailed, Mismatch, NotAMorphism, NotApplicable,
                     SizeLimit)
from .morphisms import (AdjointPair, OpcaMorphism, cdm_holds, cdm_r_ok,
                        check_adjunction, check_cdm, compose,
                        equivalent, find_realizer, identity, morphism)
from .opas import Opca
from .poset import FinPoset, bits, downset_masks, downset_name
from .products import product
from .terms import App, Const, Var, apply, bracket_abstract

T_LIMIT = 2 ** 10
TT_LIMIT = 2 ** 20
SWEEP_BUDGET = 2 ** 16

Masks = tuple[int, ...]


def maximal(order: FinPoset, mask: int) -> list[int]:
    return [x for x in bits(mask) if order.above[x] & mask == 1 << x]


def set_app(a: Opca, alpha: int, beta: int) -> int | None:
    """Down-closure of {x·y | x ∈ α, y ∈ β}, or None if some product is undefined.

    By monotonicity it suffices to look at maximal elements of α and β.
    """
    key = ("set_app", alpha, beta)
    memo = a.memo
    if key in memo:
        return memo[key]
    order, tab = a.order, a.table
    out = 0
    for x in maximal(order, alpha):
        row = tab[x]
        for y in maximal(order, beta):
            v = row[y]
            if v is None:
                memo[key] = None
                return None
            out |= order.below[v]
    memo[key] = out
    return out


def image(a: Opca, r: int, alpha: int) -> int | None:
    """r·α as a downset mask (None if undefined somewhere)."""
    return set_app(a, a.order.below[r], alpha)


def _subset(x: int | None, y: int) -> bool:
    return x is not None and x & ~y == 0


# -- the OPCA TA --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DownsetOpca:
    base: Opca
    opca: Opca
    masks: tuple[int, ...]
    index: Mapping[int, int] = field(repr=False)

    def principal(self, x: int) -> int:
        return self.index[self.base.order.below[x]]

    def of_mask(self, mask: int) -> int:
        return self.index[mask]

    def mask(self, z: int) -> int:
        return self.masks[z]

    def __len__(self):
        return len(self.masks)


_REGISTRY: dict[Opca, DownsetOpca] = {}


def as_downset_opca(a: Opca) -> DownsetOpca | None:
    """The downset structure of an OPCA built by :func:`build_T`, if any."""
    return _REGISTRY.get(a)


@lru_cache(maxsize=None)
def build_T(a: Opca, limit: int = T_LIMIT) -> DownsetOpca:
    """TA: nonempty downsets under inclusion, elementwise application, ↓{k}, ↓{s}."""
    order = a.order
    masks = downset_masks(order, limit)
    index = {m: j for j, m in enumerate(masks)}
    below = []
    for m in masks:
        b = 0
        for j, m2 in enumerate(masks):
            if m2 & ~m == 0:
                b |= 1 << j
        below.append(b)
    name = f"T({a.name})"
    tp = FinPoset._trusted([downset_name(order, m) for m in masks], below, name)
    rows = []
    for alpha in masks:
        row = []
        for beta in masks:
            v = set_app(a, alpha, beta)
            row.append(None if v is None else index[v])
        rows.append(row)
    ta = Opca(tp, rows, index[order.below[a.k]], index[order.below[a.s]], name=name)
    out = DownsetOpca(a, ta, tuple(masks), index)
    _REGISTRY[ta] = out
    return out


def T_on_morphism(f: OpcaMorphism) -> OpcaMorphism:
    """Tf(α) = ↓f(α)."""
    TA, TB = build_T(f.source), build_T(f.target)
    down = f.target.order.down
    fmap = []
    for alpha in TA.masks:
        m = 0
        for x in bits(alpha):
            m |= 1 << f.map[x]
        fmap.append(TB.of_mask(down(m)))
    return morphism(TA.opca, TB.opca, tuple(fmap), name=f"T{f.name}" if f.name else "")


def delta_map(a: Opca) -> OpcaMorphism:
    """δ_A: A -> TA, a ↦ ↓{a}."""
    TA = build_T(a)
    return morphism(a, TA.opca, tuple(TA.principal(x) for x in range(len(a))), name="δ")


def union_map(a: Opca) -> OpcaMorphism:
    """⋃_A: TTA -> TA, a downset of downsets goes to its union."""
    TA = build_T(a)
    TTA = build_T(TA.opca, TT_LIMIT)
    fmap = []
    for fam in TTA.masks:
        m = 0
        for z in bits(fam):
            m |= TA.masks[z]
        fmap.append(TA.of_mask(m))
    return morphism(TTA.opca, TA.opca, tuple(fmap), name="⋃")


def monad_structure(a: Opca) -> tuple[OpcaMorphism, OpcaMorphism]:
    return delta_map(a), union_map(a)


@dataclass(frozen=True)
class MonadLaws:
    """Realizer pairs for each law (None when that law fails) and strictness flags."""

    laws: dict
    strict: dict

    @property
    def holds(self) -> bool:
        return all(v is not None for v in self.laws.values())


def monad_law_check(a: Opca) -> MonadLaws:
    """Unit laws, associativity and the Tδ <= δT comparison, each up to realizers."""
    delta, mu = monad_structure(a)
    TA = build_T(a).opca
    delta_T, mu_T = monad_structure(TA)
    T_delta, T_mu = T_on_morphism(delta), T_on_morphism(mu)
    id_TA = identity(TA)
    laws, strict = {}, {}

    def record(name, lhs, rhs):
        laws[name] = equivalent(lhs, rhs)
        strict[name] = lhs.map == rhs.map

    record("left-unit", compose(delta_T, mu), id_TA)
    record("right-unit", compose(T_delta, mu), id_TA)
    record("associativity", compose(T_mu, mu), compose(mu_T, mu))
    kz = find_realizer(delta_T.target, T_delta.map, delta_T.map)
    laws["kz"] = None if kz is None else (kz,)
    strict["kz"] = all(delta_T.target.leq[x][y] for x, y in zip(T_delta.map, delta_T.map))
    return MonadLaws(laws, strict)


# -- applicative morphisms ----------------------------------------------------

def app_tracker_violation(source: Opca, target: Opca, fmap: Masks, r: int):
    """First (a, a') with aa' defined but r·f(a)·f(a') not inside f(aa')."""
    for a, row in enumerate(source.table):
        ra = None
        for a2, v in enumerate(row):
            if v is None:
                continue
            if ra is None:
                ra = image(target, r, fmap[a])
                if ra is None:
                    return (a, a2)
            if not _subset(set_app(target, ra, fmap[a2]), fmap[v]):
                return (a, a2)
    return None


def app_order_violation(source: Opca, target: Opca, fmap: Masks, u: int):
    for a in range(len(source)):
        for a2 in bits(source.order.below[a]):
            if not _subset(image(target, u, fmap[a2]), fmap[a]):
                return (a2, a)
    return None


def find_app_tracker(source: Opca, target: Opca, fmap: Masks) -> int | None:
    return next((r for r in range(len(target)) if app_tracker_violation(source, target, fmap, r) is None), None)


def find_app_order_realizer(source: Opca, target: Opca, fmap: Masks) -> int | None:
    return next((u for u in range(len(target)) if app_order_violation(source, target, fmap, u) is None), None)


@dataclass(frozen=True)
class ApplicativeMorphism:
    """A ⊸ B as downset masks over B; equality compares the map only."""

    source: Opca
    target: Opca
    map: Masks
    tracker: int = field(compare=False)
    order_realizer: int = field(compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        order = self.target.order
        if len(self.map) != len(self.source) or any(
                m == 0 or m & ~order.full or not order.is_downset(m) for m in self.map):
            raise NotAMorphism("every value must be a nonempty downset of the target")
        bad = app_tracker_violation(self.source, self.target, self.map, self.tracker)
        if bad is not None:
            raise NotAMorphism(f"{self.target.element(self.tracker)} does not track the map at "
                               f"{[self.source.element(x) for x in bad]}")
        bad = app_order_violation(self.source, self.target, self.map, self.order_realizer)
        if bad is not None:
            raise NotAMorphism(f"{self.target.element(self.order_realizer)} does not realize "
                               f"order preservation at {[self.source.element(x) for x in bad]}")

    def named(self) -> dict[str, str]:
        return {self.source.element(a): downset_name(self.target.order, m) for a, m in enumerate(self.map)}

    def __repr__(self):
        return f"<{self.name or 'f'}: {self.source.name} ⊸ {self.target.name} {self.named()}>"


def applicative(source: Opca, target: Opca, fmap, name: str = "") -> ApplicativeMorphism:
    """Certify a map into downsets; a name mapping is down-closed first."""
    if isinstance(fmap, Mapping):
        out = [None] * len(source)
        for a, bs in fmap.items():
            bs = [bs] if isinstance(bs, str) else list(bs)
            if not bs:
                raise NotAMorphism(f"empty value at {a}")
            out[source.index(a)] = target.order.down(target.order.mask_of(bs))
        if None in out:
            raise NotAMorphism("map is not total")
        fmap = out
    fmap = tuple(fmap)
    r = find_app_tracker(source, target, fmap)
    if r is None:
        raise NotAMorphism(f"no element of {target.name} tracks the map")
    u = find_app_order_realizer(source, target, fmap)
    if u is None:
        raise NotAMorphism(f"no element of {target.name} realizes order preservation")
    return ApplicativeMorphism(source, target, fmap, r, u, name=name)


def try_applicative(source: Opca, target: Opca, fmap: Masks) -> ApplicativeMorphism | None:
    try:
        return applicative(source, target, fmap)
    except NotAMorphism:
        return None


def app_hom_set(source: Opca, target: Opca, budget: int = SWEEP_BUDGET) -> list[ApplicativeMorphism]:
    """Every applicative morphism source ⊸ target, in canonical map order."""
    masks = downset_masks(target.order)
    if len(masks) ** len(source) > budget:
        raise SizeLimit(f"{len(masks)}^{len(source)} candidate maps exceed the budget {budget}")
    out = []
    for fmap in cartesian(masks, repeat=len(source)):
        f = try_applicative(source, target, fmap)
        if f is not None:
            out.append(f)
    return out


def projective(f0: OpcaMorphism) -> ApplicativeMorphism:
    """δ_B∘f0, tracked by the tracker of f0."""
    below = f0.target.order.below
    return ApplicativeMorphism(f0.source, f0.target, tuple(below[b] for b in f0.map),
                               f0.tracker, f0.order_realizer, name=f"δ{f0.name}" if f0.name else "δf")


def delta(a: Opca) -> ApplicativeMorphism:
    """The Kleisli identity a ↦ ↓{a}."""
    return projective(identity(a))


def applicative_compose(f: ApplicativeMorphism, g: ApplicativeMorphism) -> ApplicativeMorphism:
    """(g∘f)(a) = ⋃_{b ∈ f(a)} g(b), certificates searched afresh."""
    if f.target != g.source:
        raise Mismatch(f"cannot compose: {f.target.name} is not {g.source.name}")
    fmap = []
    for m in f.map:
        out = 0
        for b in bits(m):
            out |= g.map[b]
        fmap.append(out)
    return applicative(f.source, g.target, tuple(fmap))


def app_realizer_ok(target: Opca, lhs: Masks, rhs: Masks, s: int) -> bool:
    return all(_subset(image(target, s, x), y) for x, y in zip(lhs, rhs))


def find_app_realizer(target: Opca, lhs: Masks, rhs: Masks) -> int | None:
    """First s with s·lhs(a) ⊆ rhs(a) for all a."""
    return next((s for s in range(len(target)) if app_realizer_ok(target, lhs, rhs, s)), None)


def app_leq(f: ApplicativeMorphism, g: ApplicativeMorphism) -> int | None:
    if f.source != g.source or f.target != g.target:
        raise Mismatch("applicative morphisms are not parallel")
    return find_app_realizer(f.target, f.map, g.map)


def app_equivalent(f: ApplicativeMorphism, g: ApplicativeMorphism) -> tuple[int, int] | None:
    a, b = app_leq(f, g), app_leq(g, f)
    return None if a is None or b is None else (a, b)


def order_normalize(f: ApplicativeMorphism) -> tuple[ApplicativeMorphism, tuple[int, int]]:
    """f'(a) = ⋃_{a' <= a} f(a'), with realizers (i for f <= f', u for f' <= f)."""
    A, B = f.source, f.target
    fmap = []
    for a in range(len(A)):
        m = 0
        for a2 in bits(A.order.below[a]):
            m |= f.map[a2]
        fmap.append(m)
    fmap = tuple(fmap)
    i, u = B.i, f.order_realizer
    if not app_realizer_ok(B, f.map, fmap, i) or not app_realizer_ok(B, fmap, f.map, u):
        raise ConstructionFailed("order normalization realizers do not verify")
    try:
        g = applicative(A, B, fmap, name=f"{f.name}'" if f.name else "")
    except NotAMorphism as e:
        raise ConstructionFailed(f"normalized map is not applicative: {e}") from e
    return g, (i, u)


def as_opca_morphism(f: ApplicativeMorphism) -> OpcaMorphism:
    """f viewed as an ordinary morphism A -> TB (certificates searched in TB)."""
    TB = build_T(f.target)
    return morphism(f.source, TB.opca, tuple(TB.of_mask(m) for m in f.map))


@dataclass(frozen=True)
class TildeLift:
    morphism: OpcaMorphism
    unit_realizers: tuple[int, int]


def tilde_lift(f: ApplicativeMorphism) -> TildeLift:
    """f̃ = ⋃_B∘Tf : TA -> TB, with realizers of f̃∘δ_A ≃ f."""
    TA, TB = build_T(f.source), build_T(f.target)
    fmap = []
    for alpha in TA.masks:
        m = 0
        for x in bits(alpha):
            m |= f.map[x]
        fmap.append(TB.of_mask(m))
    g = morphism(TA.opca, TB.opca, tuple(fmap), name="f̃")
    lhs = [g.map[TA.principal(x)] for x in range(len(f.source))]
    rhs = [TB.of_mask(m) for m in f.map]
    up, down = find_realizer(TB.opca, lhs, rhs), find_realizer(TB.opca, rhs, lhs)
    if up is None or down is None:
        raise ConstructionFailed("f̃∘δ is not isomorphic to f")
    return TildeLift(g, (up, down))


@dataclass(frozen=True)
class ProjectivityWitness:
    """f ≃ δ∘f0, with s·f(a) ⊆ ↓f0(a) and s'·↓f0(a) ⊆ f(a)."""

    function: tuple[int, ...]
    to_projective: int
    from_projective: int


def projectivity_search(f: ApplicativeMorphism, budget: int = SWEEP_BUDGET) -> ProjectivityWitness | None:
    """First function f0: A -> B (canonical order) with f ≃ δ_B∘f0."""
    A, B = f.source, f.target
    nA, nB = len(A), len(B)
    if nB * nB * nA > budget * 16:
        raise SizeLimit("projectivity search exceeds budget")
    order, tab = B.order, B.table
    # up[s][a]: admissible f0(a) for s·f(a) ⊆ ↓f0(a); back[s'][a]: s'·f0(a) ∈ f(a)
    up = []
    for s in range(nB):
        row = []
        for m in f.map:
            img = image(B, s, m)
            row.append(0 if img is None else _upper(order, img))
        up.append(row)
    back = [[sum(1 << b for b in range(nB) if tab[s2][b] is not None and f.map[a] >> tab[s2][b] & 1)
             for a in range(nA)] for s2 in range(nB)]
    best = None
    for s in range(nB):
        for s2 in range(nB):
            allowed = [up[s][a] & back[s2][a] for a in range(nA)]
            if all(allowed):
                cand = tuple((m & -m).bit_length() - 1 for m in allowed)
                if best is None or cand < best:
                    best = cand
    if best is None:
        return None
    target = tuple(order.below[b] for b in best)
    s = find_app_realizer(B, f.map, target)
    s2 = find_app_realizer(B, target, f.map)
    return ProjectivityWitness(best, s, s2)


def _upper(order: FinPoset, mask: int) -> int:
    """Elements above every member of ``mask``."""
    out = order.full
    for x in bits(mask):
        out &= order.above[x]
    return out


def applicative_cd(f: ApplicativeMorphism) -> int | None:
    """First n with: for every s some r has n·f(r) ⊆ ↓{s}."""
    B = f.target
    below = B.order.below
    for n in range(len(B)):
        imgs = [image(B, n, m) for m in f.map]
        imgs = [x for x in imgs if x is not None]
        if all(any(x & ~below[s] == 0 for x in imgs) for s in range(len(B))):
            return n
    return None


def applicative_cd_choices(f: ApplicativeMorphism, n: int) -> list[int | None]:
    B = f.target
    out = []
    for s in range(len(B)):
        out.append(next((r for r, m in enumerate(f.map) if _subset(image(B, n, m), B.order.below[s])), None))
    return out


def _kleisli(f: ApplicativeMorphism, g: ApplicativeMorphism) -> Masks:
    out = []
    for m in f.map:
        v = 0
        for b in bits(m):
            v |= g.map[b]
        out.append(v)
    return tuple(out)


def check_applicative_adjunction(f: ApplicativeMorphism, g: ApplicativeMorphism) -> tuple[int, int] | None:
    """(r, s) with r realizing id_A <= gf (in A) and s realizing fg <= id_B (in B)."""
    A, B = f.source, f.target
    if g.source != B or g.target != A:
        raise Mismatch("expected f: A ⊸ B and g: B ⊸ A")
    r = find_app_realizer(A, tuple(A.order.below[a] for a in range(len(A))), _kleisli(f, g))
    s = find_app_realizer(B, _kleisli(g, f), tuple(B.order.below[b] for b in range(len(B))))
    return None if r is None or s is None else (r, s)


@dataclass(frozen=True)
class RightAdjoint:
    """g(b) = ↓{a | m·f(a) <= b} with the realizers of the construction.

    ``s_term`` and ``r`` are the auxiliary elements used to build the
    tracker ``q`` of g; ``unit`` realizes id_A <= g∘δf and ``counit``
    realizes δf∘g <= id_B.  The counit is m itself when that works; m alone
    is only guaranteed when f preserves order on the nose, so otherwise it is
    λ*x.m(u x) with u the order realizer of f (``m_is_counit`` records which).
    """

    f: OpcaMorphism
    g: ApplicativeMorphism
    m: int
    s_term: int
    r: int
    q: int
    unit: int
    counit: int
    m_is_counit: bool


def right_adjoint_construct(f: OpcaMorphism, m: int | None = None) -> RightAdjoint:
    A, B = f.source, f.target
    if m is None:
        m = check_cdm(f)
        if m is None:
            raise NotApplicable(f"{f!r} is not computationally dense")
    elif not cdm_holds(f, m):
        raise NotApplicable(f"{B.element(m)} does not satisfy the cdm condition")
    mrow, leq = B.table[m], B.leq
    gmap = []
    for b in range(len(B)):
        seed = 0
        for a in range(len(A)):
            v = mrow[f.map[a]]
            if v is not None and leq[v][b]:
                seed |= 1 << a
        if not seed:
            raise ConstructionFailed(f"g({B.element(b)}) is empty")
        gmap.append(A.order.down(seed))
    gmap = tuple(gmap)
    ca = A.combinators
    t, u, x, y = Const(f.tracker), Const(f.order_realizer), Var("x"), Var("y")
    body = apply(Const(m), App(u, apply(t, Const(f.map[ca.p0]), x)),
                 App(Const(m), App(u, apply(t, Const(f.map[ca.p1]), x))))
    s = bracket_abstract(B, body, ["x"])
    r = next((r for r in range(len(A)) if cdm_r_ok(f, m, s, r)), None)
    if r is None:
        raise ConstructionFailed("no r satisfies the cdm condition for the constructed s")
    q = bracket_abstract(A, App(Const(r), apply(Const(ca.p), x, y)), ["x", "y"])
    try:
        g = ApplicativeMorphism(B, A, gmap, q, A.i, name="g")
    except NotAMorphism as e:
        raise ConstructionFailed(f"constructed right adjoint does not verify: {e}") from e
    unit = next((r2 for r2 in range(len(A)) if cdm_r_ok(f, m, B.i, r2)), None)
    fp = projective(f)
    gf = _kleisli(fp, g)
    fg = _kleisli(g, fp)
    if unit is None or not app_realizer_ok(A, tuple(A.order.below[a] for a in range(len(A))), gf, unit):
        raise ConstructionFailed("unit realizer does not verify")
    ident = tuple(B.order.below[b] for b in range(len(B)))
    m_is_counit = app_realizer_ok(B, fg, ident, m)
    counit = m if m_is_counit else bracket_abstract(B, App(Const(m), App(u, x)), ["x"])
    if not app_realizer_ok(B, fg, ident, counit):
        raise ConstructionFailed("counit realizer does not verify")
    return RightAdjoint(f, g, m, s, r, q, unit, counit, m_is_counit)


@dataclass(frozen=True)
class Extraction:
    """A function f0 with f ≃ δ∘f0, the realizers used, and a cd witness of f."""

    function: tuple[int, ...]
    r: int
    s: int
    r_prime: int
    s_prime: int
    cd_witness: int


def adjoint_to_projective_cd(f: ApplicativeMorphism, g: ApplicativeMorphism,
                             realizers: tuple[int, int] | None = None) -> Extraction:
    """Recover projectivity (and density) from f ⊣ g.

    f0(a) is the first b ∈ f(a) with r·a ∈ g(b); the converse realizer is
    s' = λ*x.s(t r' x) where r' is the first element of f(r).
    """
    A, B = f.source, f.target
    if realizers is None:
        realizers = check_applicative_adjunction(f, g)
        if realizers is None:
            raise ExtractionFailed("f is not left adjoint to g")
    r, s = realizers
    f0 = []
    for a in range(len(A)):
        ra = A.app(r, a)
        b = None if ra is None else next((b for b in bits(f.map[a]) if g.map[b] >> ra & 1), None)
        if b is None:
            raise ExtractionFailed(f"no b ∈ f({A.element(a)}) with r·a ∈ g(b)")
        f0.append(b)
    f0 = tuple(f0)
    r_prime = next(bits(f.map[r]))
    x = Var("x")
    s_prime = bracket_abstract(B, App(Const(s), apply(Const(f.tracker), Const(r_prime), x)), ["x"])
    principal = tuple(B.order.below[b] for b in f0)
    if not app_realizer_ok(B, principal, f.map, B.i):
        raise ExtractionFailed("i does not realize δf0 <= f")
    if not app_realizer_ok(B, f.map, principal, s_prime):
        raise ExtractionFailed("s' does not realize f <= δf0")
    n = applicative_cd(f)
    if n is None:
        raise ExtractionFailed("left adjoint is not computationally dense")
    return Extraction(f0, r, s, r_prime, s_prime, n)


# -- coproducts and products in the Kleisli category ------------------------

@dataclass(frozen=True)
class PcaCotuple:
    morphism: ApplicativeMorphism
    down: tuple[int, int]
    up: tuple[int, int]


def pca_cotuple(f0: ApplicativeMorphism, f1: ApplicativeMorphism) -> PcaCotuple:
    """[f0,f1](a0,a1) = ↓{p b0 b1 | b0 ∈ f0(a0), b1 ∈ f1(a1)} with iso realizers."""
    if f0.target != f1.target:
        raise Mismatch("cotupled morphisms need a shared target")
    B = f0.target
    cs = B.combinators
    P = product(f0.source, f1.source)
    pmask = B.order.below[cs.p]
    fmap = []
    for m0 in f0.map:
        pm0 = set_app(B, pmask, m0)
        for m1 in f1.map:
            v = None if pm0 is None else set_app(B, pm0, m1)
            if v is None:
                raise ConstructionFailed("p·b0·b1 is undefined")
            fmap.append(v)
    try:
        h = applicative(P.opca, B, tuple(fmap), name="[f0,f1]")
    except NotAMorphism as e:
        raise ConstructionFailed(f"cotuple is not applicative: {e}") from e
    x = Var("x")
    c1 = next(bits(f1.map[f1.source.i]))
    c0 = next(bits(f0.map[f0.source.i]))
    up = (bracket_abstract(B, apply(Const(cs.p), x, Const(c1)), ["x"]),
          bracket_abstract(B, apply(Const(cs.p), Const(c0), x), ["x"]))
    for j, fj in enumerate((f0, f1)):
        hk = tuple(h.map[z] for z in P.coprojections[j].map)
        if not app_realizer_ok(B, hk, fj.map, (cs.p0, cs.p1)[j]):
            raise ConstructionFailed(f"p{j} does not realize [f0,f1]κ{j} <= f{j}")
        if not app_realizer_ok(B, fj.map, hk, up[j]):
            raise ConstructionFailed(f"f{j} <= [f0,f1]κ{j} realizer does not verify")
    return PcaCotuple(h, (cs.p0, cs.p1), up)


def is_applicative_zero(f: ApplicativeMorphism) -> int | None:
    """A common element of all values (equivalently, f ≃ a constant), or None."""
    B = f.target
    common = B.order.full
    for m in f.map:
        common &= m
    lb = common.bit_length() - 1 if common else None
    through_one = None
    for c in range(len(B)):
        const = (B.order.below[c],) * len(f.map)
        if find_app_realizer(B, f.map, const) is not None and find_app_realizer(B, const, f.map) is not None:
            through_one = c
            break
    if (lb is None) != (through_one is None):
        raise CharacterizationMismatch("zero-morphism characterizations disagree for an applicative morphism")
    return lb


@dataclass(frozen=True)
class HMaps:
    """h_*: TA0×TA1 -> T(A0×A1) and h*: T(A0×A1) -> TA0×TA1 with h* ⊣ h_*."""

    lower: OpcaMorphism
    upper: OpcaMorphism
    adjunction: AdjointPair | None
    iso: tuple[int, int] | None
    T0: DownsetOpca
    T1: DownsetOpca
    TP: DownsetOpca


def project_mask(P, mask: int, j: int) -> int:
    out = 0
    for z in bits(mask):
        out |= 1 << P.split(z)[j]
    return out


def product_mask(P, m0: int, m1: int) -> int:
    out = 0
    for x in bits(m0):
        for y in bits(m1):
            out |= 1 << P.pair(x, y)
    return out


def h_maps(a0: Opca, a1: Opca) -> HMaps:
    T0, T1 = build_T(a0), build_T(a1)
    P = product(a0, a1)
    TP = build_T(P.opca)
    Q = product(T0.opca, T1.opca)
    lower = tuple(TP.of_mask(product_mask(P, T0.masks[x], T1.masks[y]))
                  for x in range(len(T0)) for y in range(len(T1)))
    upper = tuple(Q.pair(T0.of_mask(project_mask(P, m, 0)), T1.of_mask(project_mask(P, m, 1)))
                  for m in TP.masks)
    h_lower = morphism(Q.opca, TP.opca, lower, name="h_*")
    h_upper = morphism(TP.opca, Q.opca, upper, name="h*")
    adj = check_adjunction(h_upper, h_lower)
    iso = equivalent(compose(h_lower, h_upper), identity(Q.opca))
    return HMaps(h_lower, h_upper, adj, iso, T0, T1, TP)


def maximal_mediator(f0: ApplicativeMorphism, f1: ApplicativeMorphism) -> ApplicativeMorphism:
    """b ↦ f0(b) × f1(b), i.e. h_*∘⟨f0,f1⟩; checked to mediate up to ≃."""
    if f0.source != f1.source:
        raise Mismatch("mediated morphisms need a shared source")
    P = product(f0.target, f1.target)
    fmap = tuple(product_mask(P, m0, m1) for m0, m1 in zip(f0.map, f1.map))
    g = applicative(f0.source, P.opca, fmap, name="⟨f0,f1⟩max")
    if not mediates(g, f0, f1, P):
        raise ConstructionFailed("maximal mediator does not mediate")
    return g


def mediates(g: ApplicativeMorphism, f0: ApplicativeMorphism, f1: ApplicativeMorphism, P=None) -> bool:
    P = P or product(f0.target, f1.target)
    for j, fj in enumerate((f0, f1)):
        proj = projective(P.projections[j])
        comp = tuple(_kleisli_map(g.map, proj.map))
        if find_app_realizer(fj.target, comp, fj.map) is None or find_app_realizer(fj.target, fj.map, comp) is None:
            return False
    return True


def _kleisli_map(fmap: Masks, gmap: Masks) -> Masks:
    out = []
    for m in fmap:
        v = 0
        for b in bits(m):
            v |= gmap[b]
        out.append(v)
    return tuple(out)


def mediators(f0: ApplicativeMorphism, f1: ApplicativeMorphism, budget: int = SWEEP_BUDGET) -> list[ApplicativeMorphism]:
    """Every applicative g: B ⊸ A0×A1 with π_j∘g ≃ f_j, in canonical order."""
    P = product(f0.target, f1.target)
    masks = downset_masks(P.opca.order)
    if len(masks) ** len(f0.source) > budget:
        raise SizeLimit(f"{len(masks)}^{len(f0.source)} candidate maps exceed the budget {budget}")
    out = []
    for fmap in cartesian(masks, repeat=len(f0.source)):
        if not mediates_map(fmap, f0, f1, P):
            continue
        g = try_applicative(f0.source, P.opca, fmap)
        if g is not None:
            out.append(g)
    return out


def mediates_map(fmap: Masks, f0, f1, P) -> bool:
    for j, fj in enumerate((f0, f1)):
        proj = tuple(fj.target.order.below[b] for b in P.projections[j].map)
        comp = _kleisli_map(fmap, proj)
        if find_app_realizer(fj.target, comp, fj.map) is None or find_app_realizer(fj.target, fj.map, comp) is None:
            return False
    return True


# -- the order-theoretic obstruction to products ------------------------------

@dataclass(frozen=True)
class NoProdWitness:
    """α_(a0,a1) = {(b0,b1) | a0 ≰ b0 or a1 ≰ b1} for every pair, and their meet."""

    p0: FinPoset
    p1: FinPoset
    product: FinPoset
    alphas: tuple[int, ...]
    intersection: int

    @property
    def holds(self) -> bool:
        return self.intersection == 0


def noprod_witness(p0: FinPoset, p1: FinPoset) -> NoProdWitness:
    from .poset import product_poset

    for p in (p0, p1):
        if p.least() is not None:
            raise NotApplicable(f"{p.name or p!r} has a least element {p.elements[p.least()]}")
    prod = product_poset(p0, p1)
    n1 = len(p1)
    alphas = []
    for a0 in range(len(p0)):
        for a1 in range(n1):
            m = 0
            for b0 in range(len(p0)):
                for b1 in range(n1):
                    if not p0.leq[a0][b0] or not p1.leq[a1][b1]:
                        m |= 1 << (b0 * n1 + b1)
            alphas.append(m)
    inter = prod.full
    for m in alphas:
        if m == 0 or not prod.is_downset(m):
            raise ConstructionFailed("an α is not a nonempty downset")
        if _project(m, n1, 0) != p0.full or _project(m, n1, 1) != p1.full:
            raise ConstructionFailed("an α does not project onto both factors")
        inter &= m
    return NoProdWitness(p0, p1, prod, tuple(alphas), inter)


def _project(mask: int, n1: int, j: int) -> int:
    out = 0
    for z in bits(mask):
        out |= 1 << (divmod(z, n1)[j])
    return out


def least_free_posets(max_size: int = 4) -> list[FinPoset]:
    """Representatives of every poset of size 2..max_size without a least element."""
    from .poset import all_posets

    out = []
    for n in range(2, max_size + 1):
        for p in all_posets(n):
            if p.least() is None:
                out.append(p)
    return out
