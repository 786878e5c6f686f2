"""Morphisms of OPCAs and the exhaustive searches that certify their properties.

A morphism f: A -> B is a total function on element indices together with a
tracker t (t·f(a)·f(a') ⪯ f(aa')) and an order realizer u (u·f(a') <= f(a)
whenever a' <= a).  Every search scans candidates in declared element order
and returns the first witness, so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, NamedTuple, Sequence

from .errors import (CharacterizationMismatch, ConstructionFailed, Mismatch,
                     NotAMorphism, SizeLimit, SourceMismatch)
from .opas import Opca
from .poset import Verdict, bits
from .terms import App, Const, Var, apply, bracket_abstract

HOM_BUDGET = 4096
DISCRETE_CAP = 16

Map = tuple[int, ...]


# -- raw conditions on plain maps -------------------------------------------

def tracker_violation(source: Opca, target: Opca, fmap: Map, t: int):
    """First (a, a') with aa' defined but t·f(a)·f(a') not below f(aa'), or None."""
    tab, leq = target.table, target.leq
    trow = tab[t]
    for a, row in enumerate(source.table):
        ta = trow[fmap[a]]
        if ta is None:
            if any(v is not None for v in row):
                return (a, next(b for b, v in enumerate(row) if v is not None))
            continue
        tarow = tab[ta]
        for a2, v in enumerate(row):
            if v is None:
                continue
            w = tarow[fmap[a2]]
            if w is None or not leq[w][fmap[v]]:
                return (a, a2)
    return None


def order_violation(source: Opca, target: Opca, fmap: Map, u: int):
    """First (a', a) with a' <= a but u·f(a') not below f(a), or None."""
    urow, leq = target.table[u], target.leq
    for a in range(len(source)):
        for a2 in bits(source.order.below[a]):
            w = urow[fmap[a2]]
            if w is None or not leq[w][fmap[a]]:
                return (a2, a)
    return None


def find_tracker(source: Opca, target: Opca, fmap: Map) -> int | None:
    for t in range(len(target)):
        if tracker_violation(source, target, fmap, t) is None:
            return t
    return None


def find_order_realizer(source: Opca, target: Opca, fmap: Map) -> int | None:
    for u in range(len(target)):
        if order_violation(source, target, fmap, u) is None:
            return u
    return None


def realizer_violation(target: Opca, lhs: Sequence[int], rhs: Sequence[int], s: int):
    """First position a where s·lhs[a] <= rhs[a] fails, or None."""
    srow, leq = target.table[s], target.leq
    for a, (x, y) in enumerate(zip(lhs, rhs)):
        w = srow[x]
        if w is None or not leq[w][y]:
            return a
    return None


def find_realizer(target: Opca, lhs: Sequence[int], rhs: Sequence[int]) -> int | None:
    """First s with s·lhs[a] <= rhs[a] for every position a."""
    for s in range(len(target)):
        if realizer_violation(target, lhs, rhs, s) is None:
            return s
    return None


# -- the morphism type ------------------------------------------------------

@dataclass(frozen=True)
class OpcaMorphism:
    """A verified morphism; equality compares the underlying function only."""

    source: Opca
    target: Opca
    map: Map
    tracker: int = field(compare=False)
    order_realizer: int = field(compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.map) != len(self.source) or any(not 0 <= b < len(self.target) for b in self.map):
            raise NotAMorphism("map must send every source element to a target element")
        bad = tracker_violation(self.source, self.target, self.map, self.tracker)
        if bad is not None:
            raise NotAMorphism(f"{self.target.element(self.tracker)} does not track the map at "
                               f"{[self.source.element(x) for x in bad]}")
        bad = order_violation(self.source, self.target, self.map, self.order_realizer)
        if bad is not None:
            raise NotAMorphism(f"{self.target.element(self.order_realizer)} does not realize order "
                               f"preservation at {[self.source.element(x) for x in bad]}")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def named(self) -> dict[str, str]:
        return {self.source.element(a): self.target.element(b) for a, b in enumerate(self.map)}

    def __repr__(self):
        label = self.name or "f"
        return f"<{label}: {self.source.name} -> {self.target.name} {self.named()}>"


def _as_map(source: Opca, target: Opca, fmap) -> Map:
    if isinstance(fmap, Mapping):
        out = [None] * len(source)
        for a, b in fmap.items():
            out[source.index(a)] = target.index(b)
        if None in out:
            missing = [source.element(i) for i, v in enumerate(out) if v is None]
            raise NotAMorphism(f"map is not total: missing {missing}")
        return tuple(out)
    return tuple(fmap)


def morphism(source: Opca, target: Opca, fmap, name: str = "") -> OpcaMorphism:
    """Certify a total map (indices or a name mapping) as a morphism by search."""
    fmap = _as_map(source, target, fmap)
    t = find_tracker(source, target, fmap)
    if t is None:
        raise NotAMorphism(f"no element of {target.name} tracks the map")
    u = find_order_realizer(source, target, fmap)
    if u is None:
        raise NotAMorphism(f"no element of {target.name} realizes order preservation")
    return OpcaMorphism(source, target, fmap, t, u, name=name)


def try_morphism(source: Opca, target: Opca, fmap: Map, name: str = "") -> OpcaMorphism | None:
    try:
        return morphism(source, target, fmap, name)
    except NotAMorphism:
        return None


def identity(a: Opca) -> OpcaMorphism:
    return morphism(a, a, tuple(range(len(a))), name=f"id_{a.name}")


def bang(a: Opca) -> OpcaMorphism:
    from .fixtures import ONE
    return morphism(a, ONE, (0,) * len(a), name=f"!_{a.name}")


def point(a: Opca, c: int = 0) -> OpcaMorphism:
    """The morphism ONE -> A picking out ``c``."""
    from .fixtures import ONE
    return morphism(ONE, a, (c,), name=f"<{a.element(c)}>")


def constant(source: Opca, target: Opca, c: int) -> OpcaMorphism:
    return morphism(source, target, (c,) * len(source), name=f"const_{target.element(c)}")


def compose(f: OpcaMorphism, g: OpcaMorphism) -> OpcaMorphism:
    """g∘f, with certificates found afresh by search."""
    if f.target != g.source:
        raise Mismatch(f"cannot compose: {f.target.name} is not {g.source.name}")
    name = f"{g.name}∘{f.name}" if f.name and g.name else ""
    return morphism(f.source, g.target, tuple(g.map[b] for b in f.map), name=name)


def all_maps(source: Opca, target: Opca) -> Iterator[Map]:
    return product(range(len(target)), repeat=len(source))


def hom_set(source: Opca, target: Opca, budget: int = HOM_BUDGET) -> list[OpcaMorphism]:
    """Every total map source -> target that is a morphism, in canonical order."""
    if len(target) ** len(source) > budget:
        raise SizeLimit(f"{len(target)}^{len(source)} candidate maps exceed the budget {budget}")
    out = []
    for m in all_maps(source, target):
        f = try_morphism(source, target, m)
        if f is not None:
            out.append(f)
    return out


# -- the preorder enrichment ------------------------------------------------

@dataclass(frozen=True)
class IneqCertificate:
    lhs: OpcaMorphism
    rhs: OpcaMorphism
    realizer: int


def _check_parallel(f: OpcaMorphism, g: OpcaMorphism):
    if f.source != g.source:
        raise SourceMismatch(f"sources differ: {f.source.name} vs {g.source.name}")
    if f.target != g.target:
        raise Mismatch(f"targets differ: {f.target.name} vs {g.target.name}")


def find_inequality_realizer(f: OpcaMorphism, g: OpcaMorphism) -> IneqCertificate | None:
    """First s with s·f(a) <= g(a) for all a, certifying f <= g."""
    _check_parallel(f, g)
    s = find_realizer(f.target, f.map, g.map)
    return None if s is None else IneqCertificate(f, g, s)


def leq(f: OpcaMorphism, g: OpcaMorphism) -> bool:
    return find_inequality_realizer(f, g) is not None


def equivalent(f: OpcaMorphism, g: OpcaMorphism) -> tuple[int, int] | None:
    """Realizers (f <= g, g <= f) when f ≃ g, else None."""
    a, b = find_inequality_realizer(f, g), find_inequality_realizer(g, f)
    if a is None or b is None:
        return None
    return a.realizer, b.realizer


# -- zero morphisms ---------------------------------------------------------

class ZeroReport(NamedTuple):
    holds: bool
    lower_bound: int | None
    through_one: int | None
    top: bool | None


def image_lower_bound(f: OpcaMorphism) -> int | None:
    lb = f.target.order.lower_bounds(_mask(f.map))
    return lb.bit_length() - 1 if lb else None


def _mask(values) -> int:
    m = 0
    for v in values:
        m |= 1 << v
    return m


def factors_through_one(f: OpcaMorphism) -> int | None:
    """First c with f ≃ (const c) = <c>∘!, or None."""
    n = len(f.source)
    for c in range(len(f.target)):
        const = (c,) * n
        if find_realizer(f.target, f.map, const) is not None and \
                find_realizer(f.target, const, f.map) is not None:
            return c
    return None


def is_top(f: OpcaMorphism, budget: int = HOM_BUDGET) -> bool | None:
    """Whether every morphism with the same ends is below f; None over budget."""
    if len(f.target) ** len(f.source) > budget:
        return None
    return all(find_realizer(f.target, g.map, f.map) is not None
               for g in hom_set(f.source, f.target, budget))


def is_zero_morphism(f: OpcaMorphism, budget: int = HOM_BUDGET) -> ZeroReport:
    """Evaluate all three characterizations of zero morphisms and demand agreement."""
    lb = image_lower_bound(f)
    c = factors_through_one(f)
    top = is_top(f, budget)
    verdicts = {lb is not None, c is not None} | ({top} if top is not None else set())
    if len(verdicts) != 1:
        raise CharacterizationMismatch(
            f"zero-morphism characterizations disagree: lower bound={lb}, through ONE={c}, top={top}")
    return ZeroReport(lb is not None, lb, c, top)


# -- computational density --------------------------------------------------

def cd_values(f: OpcaMorphism, n: int) -> int:
    """Mask of defined values n·f(r)."""
    row = f.target.table[n]
    return _mask(v for v in (row[b] for b in f.map) if v is not None)


def cd_holds(f: OpcaMorphism, n: int) -> bool:
    return f.target.order.up(cd_values(f, n)) == f.target.order.full


def check_cd(f: OpcaMorphism) -> int | None:
    """First n with: for every s there is r such that n·f(r) <= s."""
    for n in range(len(f.target)):
        if cd_holds(f, n):
            return n
    return None


def cd_choices(f: OpcaMorphism, n: int) -> list[int | None]:
    """For each s, the first r with n·f(r) <= s (None where none exists)."""
    row, leq = f.target.table[n], f.target.leq
    out = []
    for s in range(len(f.target)):
        out.append(next((r for r in range(len(f.source))
                         if row[f.map[r]] is not None and leq[row[f.map[r]]][s]), None))
    return out


def cdm_r_ok(f: OpcaMorphism, m: int, s: int, r: int) -> bool:
    """m·f(ra) ⪯ s·f(a) for all a."""
    A, B = f.source, f.target
    mrow, srow, leq = B.table[m], B.table[s], B.leq
    rrow = A.table[r]
    for a in range(len(A)):
        rhs = srow[f.map[a]]
        if rhs is None:
            continue
        ra = rrow[a]
        if ra is None:
            return False
        lhs = mrow[f.map[ra]]
        if lhs is None or not leq[lhs][rhs]:
            return False
    return True


def cdm_choices(f: OpcaMorphism, m: int) -> list[int | None]:
    """For each s, the first r satisfying the cdm clause (None where none exists)."""
    return [next((r for r in range(len(f.source)) if cdm_r_ok(f, m, s, r)), None)
            for s in range(len(f.target))]


def cdm_holds(f: OpcaMorphism, m: int) -> bool:
    return all(any(cdm_r_ok(f, m, s, r) for r in range(len(f.source))) for s in range(len(f.target)))


def check_cdm(f: OpcaMorphism) -> int | None:
    """First m with: for every s there is r such that m·f(ra) ⪯ s·f(a) for all a."""
    for m in range(len(f.target)):
        if cdm_holds(f, m):
            return m
    return None


def construct_m_from_n(f: OpcaMorphism, n: int) -> int:
    """Evaluate m = λ*x. n(u(t·f(p0)·x))(u(t·f(p1)·x)) and verify it."""
    A, B = f.source, f.target
    cs = A.combinators
    t, u = Const(f.tracker), Const(f.order_realizer)
    x = Var("x")
    body = apply(Const(n), App(u, apply(t, Const(f.map[cs.p0]), x)),
                 App(u, apply(t, Const(f.map[cs.p1]), x)))
    m = bracket_abstract(B, body, ["x"])
    if not cdm_holds(f, m):
        raise ConstructionFailed(f"constructed m = {B.element(m)} fails the cdm condition")
    return m


# -- discreteness -----------------------------------------------------------

def is_discrete(f: OpcaMorphism, cap: int = DISCRETE_CAP) -> Verdict:
    """Lower bounds of images reflect to lower bounds of preimages; else a witness set."""
    A, B = f.source.order, f.target.order
    if len(A) > cap:
        raise SizeLimit(f"subset sweep over {len(A)} elements exceeds the cap {cap}")
    for X in range(1, 1 << len(A)):
        if B.has_lower_bound(_mask(f.map[a] for a in bits(X))) and not A.has_lower_bound(X):
            return Verdict(False, X)
    return Verdict(True, None)


# -- adjunctions ------------------------------------------------------------

@dataclass(frozen=True)
class AdjointPair:
    """left: B -> A and right: A -> B with left ⊣ right.

    ``unit_realizer`` (in B) realizes id_B <= right∘left and
    ``counit_realizer`` (in A) realizes left∘right <= id_A.
    """

    left: OpcaMorphism
    right: OpcaMorphism
    unit_realizer: int
    counit_realizer: int


def adjunction_realizers(l: OpcaMorphism, r: OpcaMorphism) -> tuple[int | None, int | None]:
    if l.source != r.target or l.target != r.source:
        raise Mismatch("left adjoint must run B -> A and right adjoint A -> B")
    B, A = l.source, l.target
    rl = [r.map[l.map[b]] for b in range(len(B))]
    lr = [l.map[r.map[a]] for a in range(len(A))]
    return (find_realizer(B, range(len(B)), rl), find_realizer(A, lr, range(len(A))))


def check_adjunction(l: OpcaMorphism, r: OpcaMorphism) -> AdjointPair | None:
    unit, counit = adjunction_realizers(l, r)
    if unit is None or counit is None:
        return None
    return AdjointPair(l, r, unit, counit)


def find_left_adjoint(r: OpcaMorphism, budget: int = HOM_BUDGET) -> AdjointPair | None:
    """First morphism l with l ⊣ r, scanning the whole hom-set."""
    for l in hom_set(r.target, r.source, budget):
        pair = check_adjunction(l, r)
        if pair is not None:
            return pair
    return None
