"""Binary products of OPCAs, which double as coproducts and biproducts.

Every constructed realizer is evaluated by bracket abstraction and then
checked against its defining inequality over the whole carrier; a failed check
raises ConstructionFailed because the construction is supposed to be correct
by design.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (ConstructionFailed, Mismatch, NotAMorphism, NotApplicable,
                     RealizerInvalid, SizeLimit)
from .morphisms import (AdjointPair, OpcaMorphism, cd_holds, check_adjunction,
                        check_cd, equivalent, find_realizer, image_lower_bound,
                        morphism, realizer_violation)
from .opas import Opca
from .poset import product_poset
from .terms import App, Const, Var, apply, bracket_abstract

PRODUCT_LIMIT = 1024


@dataclass(frozen=True, eq=False)
class ProductOpca:
    factors: tuple[Opca, Opca]
    opca: Opca
    projections: tuple[OpcaMorphism, OpcaMorphism]
    coprojections: tuple[OpcaMorphism, OpcaMorphism]

    def pair(self, x: int, y: int) -> int:
        return x * len(self.factors[1]) + y

    def split(self, z: int) -> tuple[int, int]:
        return divmod(z, len(self.factors[1]))


_REGISTRY: dict[Opca, ProductOpca] = {}


@lru_cache(maxsize=None)
def product(a0: Opca, a1: Opca, name: str = "") -> ProductOpca:
    """A0 × A1 with coordinatewise order and application, k = (k0,k1), s = (s0,s1)."""
    n1 = len(a1)
    if len(a0) * n1 > PRODUCT_LIMIT:
        raise SizeLimit(f"product carrier of size {len(a0) * n1} exceeds {PRODUCT_LIMIT}")
    order = product_poset(a0.order, a1.order, name=name or f"{a0.name}×{a1.name}")
    rows = []
    for x0 in range(len(a0)):
        for x1 in range(n1):
            row = []
            for y0 in range(len(a0)):
                v0 = a0.table[x0][y0]
                for y1 in range(n1):
                    v1 = a1.table[x1][y1]
                    row.append(None if v0 is None or v1 is None else v0 * n1 + v1)
            rows.append(row)
    pa = Opca(order, rows, a0.k * n1 + a1.k, a0.s * n1 + a1.s, name=order.name)
    pi0 = morphism(pa, a0, tuple(z // n1 for z in range(len(pa))), name="π0")
    pi1 = morphism(pa, a1, tuple(z % n1 for z in range(len(pa))), name="π1")
    k0 = morphism(a0, pa, tuple(x * n1 + a1.i for x in range(len(a0))), name="κ0")
    k1 = morphism(a1, pa, tuple(a0.i * n1 + y for y in range(n1)), name="κ1")
    p = ProductOpca((a0, a1), pa, (pi0, pi1), (k0, k1))
    _REGISTRY[pa] = p
    return p


def as_product(a: Opca) -> ProductOpca:
    """The product structure of an OPCA built by :func:`product`."""
    try:
        return _REGISTRY[a]
    except KeyError:
        raise Mismatch(f"{a.name} was not built as a binary product") from None


def power(a: Opca, n: int) -> Opca:
    """Left-nested n-fold product A^n (n >= 1)."""
    out = a
    for _ in range(n - 1):
        out = product(out, a).opca
    return out


def diagonal(a: Opca, n: int) -> OpcaMorphism:
    target = power(a, n)
    size = len(a)
    fmap = []
    for x in range(len(a)):
        z = x
        for _ in range(n - 1):
            z = z * size + x
        fmap.append(z)
    return morphism(a, target, tuple(fmap), name="Δ")


def diagonal_cd_probe(a: Opca, n: int) -> int | None:
    """cd witness of the diagonal A -> A^n, or None when it is not c.d."""
    return check_cd(diagonal(a, n))


def tuple_morphism(f0: OpcaMorphism, f1: OpcaMorphism) -> OpcaMorphism:
    """⟨f0,f1⟩ with tracker (t0,t1) and order realizer (u0,u1)."""
    if f0.source != f1.source:
        raise Mismatch("tupled morphisms need a shared source")
    P = product(f0.target, f1.target)
    fmap = tuple(P.pair(x, y) for x, y in zip(f0.map, f1.map))
    try:
        return OpcaMorphism(f0.source, P.opca, fmap, P.pair(f0.tracker, f1.tracker),
                            P.pair(f0.order_realizer, f1.order_realizer), name="⟨f0,f1⟩")
    except NotAMorphism as e:
        raise ConstructionFailed(f"assembled certificates do not verify: {e}") from e


def cd_tuple_witness(f0: OpcaMorphism, f1: OpcaMorphism, n0: int | None = None,
                     n1: int | None = None) -> int:
    """n = (n'_0, n'_1) with n'_i = λ*x. n_i(u_i(t_i·f_i(p_i)·x)), verified against ⟨f0,f1⟩."""
    B = f0.source
    parts = []
    for f, n, p in ((f0, n0, B.combinators.p0), (f1, n1, B.combinators.p1)):
        if n is None:
            n = check_cd(f)
            if n is None:
                raise NotApplicable(f"{f!r} is not computationally dense")
        x = Var("x")
        body = App(Const(n), App(Const(f.order_realizer), apply(Const(f.tracker), Const(f.map[p]), x)))
        parts.append(bracket_abstract(f.target, body, ["x"]))
    f = tuple_morphism(f0, f1)
    n = as_product(f.target).pair(*parts)
    if not cd_holds(f, n):
        raise ConstructionFailed("tupled cd witness does not verify")
    return n


# -- coproducts -------------------------------------------------------------

@dataclass(frozen=True)
class Cotuple:
    """[f0,f1] with the realizers of [f0,f1]κ_j ≤ f_j (``down``) and f_j ≤ [f0,f1]κ_j (``up``)."""

    morphism: OpcaMorphism
    down: tuple[int, int]
    up: tuple[int, int]


def cotuple_map(f0: OpcaMorphism, f1: OpcaMorphism) -> tuple[int, ...]:
    B = f0.target
    p = B.combinators.p
    return tuple(B.apply(p, x, y) for x in f0.map for y in f1.map)


def cotuple_morphism(f0: OpcaMorphism, f1: OpcaMorphism) -> Cotuple:
    """[f0,f1](a0,a1) = p·f0(a0)·f1(a1) with its tracker, order realizer and iso realizers."""
    if f0.target != f1.target:
        raise Mismatch("cotupled morphisms need a shared target")
    B = f0.target
    cs = B.combinators
    P = product(f0.source, f1.source)
    x, y = Var("x"), Var("y")
    p, p0, p1 = Const(cs.p), Const(cs.p0), Const(cs.p1)
    tracker = bracket_abstract(B, apply(p, apply(Const(f0.tracker), App(p0, x), App(p0, y)),
                                        apply(Const(f1.tracker), App(p1, x), App(p1, y))), ["x", "y"])
    order = bracket_abstract(B, apply(p, App(Const(f0.order_realizer), App(p0, x)),
                                      App(Const(f1.order_realizer), App(p1, x))), ["x"])
    fmap = cotuple_map(f0, f1)
    if None in fmap:
        raise ConstructionFailed("p·f0(a0)·f1(a1) is undefined somewhere")
    try:
        f = OpcaMorphism(P.opca, B, fmap, tracker, order, name="[f0,f1]")
    except NotAMorphism as e:
        raise ConstructionFailed(f"cotuple realizers do not verify: {e}") from e
    i0, i1 = f0.source.i, f1.source.i
    up0 = bracket_abstract(B, apply(p, x, Const(f1.map[i1])), ["x"])
    up1 = bracket_abstract(B, apply(p, Const(f0.map[i0]), x), ["x"])
    for j, (fj, kappa) in enumerate(zip((f0, f1), P.coprojections)):
        fk = [fmap[z] for z in kappa.map]
        if realizer_violation(B, fk, fj.map, (cs.p0, cs.p1)[j]) is not None:
            raise ConstructionFailed(f"p{j} does not realize [f0,f1]κ{j} <= f{j}")
        if realizer_violation(B, fj.map, fk, (up0, up1)[j]) is not None:
            raise ConstructionFailed(f"f{j} <= [f0,f1]κ{j} realizer does not verify")
    return Cotuple(f, (cs.p0, cs.p1), (up0, up1))


def literal_iso_realizer(B: Opca) -> int:
    """λ*x.p x i in B: the pairing-with-i realizer read verbatim."""
    cs = B.combinators
    return bracket_abstract(B, apply(Const(cs.p), Var("x"), Const(cs.i)), ["x"])


def couniqueness_realizer(g: OpcaMorphism, g2: OpcaMorphism, s0: int, s1: int) -> int:
    """Realizer of g <= g2 built from realizers s_j of gκ_j <= g2κ_j.

    s = λ*x.u'(t'(t'·g2(k,k̄)·(s0(u(t·g(i,k̄)·x))))(s1(u(t·g(k̄,i)·x))))
    where k̄ = ki in the relevant factor.
    """
    if g.source != g2.source or g.target != g2.target:
        raise Mismatch("g and g' must be parallel")
    P = as_product(g.source)
    B = g.target
    a0, a1 = P.factors
    c0, c1 = a0.combinators, a1.combinators
    for j, s in enumerate((s0, s1)):
        kappa = P.coprojections[j]
        if realizer_violation(B, [g.map[z] for z in kappa.map], [g2.map[z] for z in kappa.map], s) is not None:
            raise ConstructionFailed(f"s{j} does not realize gκ{j} <= g'κ{j}")
    t, u, t2, u2 = (Const(v) for v in (g.tracker, g.order_realizer, g2.tracker, g2.order_realizer))
    x = Var("x")
    left = App(Const(s0), App(u, apply(t, Const(g.map[P.pair(c0.i, c1.kbar)]), x)))
    right = App(Const(s1), App(u, apply(t, Const(g.map[P.pair(c0.kbar, c1.i)]), x)))
    body = App(u2, apply(t2, apply(t2, Const(g2.map[P.pair(a0.k, c1.kbar)]), left), right))
    s = bracket_abstract(B, body, ["x"])
    if realizer_violation(B, g.map, g2.map, s) is not None:
        raise ConstructionFailed("couniqueness realizer does not verify")
    return s


# -- biproducts and disjointness --------------------------------------------

@dataclass(frozen=True)
class BiproductCheck:
    """Realizers of π_jκ_j ≃ id and lower bounds showing π_{1-j}κ_j is zero."""

    iso: tuple[tuple[int, int] | None, tuple[int, int] | None]
    zero: tuple[int | None, int | None]

    @property
    def holds(self) -> bool:
        return None not in self.iso and None not in self.zero


def check_biproduct(a0: Opca, a1: Opca) -> BiproductCheck:
    P = product(a0, a1)
    iso, zero = [], []
    for j in (0, 1):
        kappa, pi, other = P.coprojections[j], P.projections[j], P.projections[1 - j]
        a = P.factors[j]
        same = morphism(a, a, tuple(pi.map[z] for z in kappa.map))
        iso.append(equivalent(same, morphism(a, a, tuple(range(len(a))))))
        cross = morphism(a, P.factors[1 - j], tuple(other.map[z] for z in kappa.map))
        zero.append(image_lower_bound(cross))
    return BiproductCheck(tuple(iso), tuple(zero))


@dataclass(frozen=True)
class DisjointnessWitness:
    """Lower bounds of the images of f0 and f1 extracted from the realizers."""

    bound0: int
    bound1: int
    realizers: tuple[int, int]


def _lower_bound_ok(a: Opca, w: int | None, values) -> bool:
    return w is not None and all(a.leq[w][v] for v in values)


def disjointness_certificate(f0: OpcaMorphism, f1: OpcaMorphism, s: int,
                             s_back: int | None = None) -> DisjointnessWitness:
    """From κ0f0 ≃ κ1f1 (realized by s and s_back) extract zero witnesses.

    Writing s = (s0,s1): s1·i bounds f1 from below, i being the identity
    combinator of A1 since κ0 pads with it.  Symmetrically s_back = (s0',s1')
    gives s0'·i (in A0) below f0.
    """
    if f0.source != f1.source:
        raise Mismatch("f0 and f1 need a shared source")
    P = product(f0.target, f1.target)
    A0, A1 = P.factors
    lhs = [P.coprojections[0].map[x] for x in f0.map]
    rhs = [P.coprojections[1].map[y] for y in f1.map]
    if realizer_violation(P.opca, lhs, rhs, s) is not None:
        raise RealizerInvalid("s does not realize κ0f0 <= κ1f1")
    if s_back is None:
        s_back = find_realizer(P.opca, rhs, lhs)
        if s_back is None:
            raise RealizerInvalid("κ1f1 <= κ0f0 has no realizer")
    elif realizer_violation(P.opca, rhs, lhs, s_back) is not None:
        raise RealizerInvalid("s_back does not realize κ1f1 <= κ0f0")
    w1 = A1.app(P.split(s)[1], A1.i)
    w0 = A0.app(P.split(s_back)[0], A0.i)
    if not _lower_bound_ok(A1, w1, f1.map) or not _lower_bound_ok(A0, w0, f0.map):
        raise ConstructionFailed("extracted disjointness witnesses are not lower bounds")
    return DisjointnessWitness(w0, w1, (s, s_back))


def dual_disjointness_certificate(f0: OpcaMorphism, f1: OpcaMorphism, s: int,
                                  s_back: int | None = None) -> DisjointnessWitness:
    """From f0π0 ≃ f1π1 extract s·f0(i) below f1 and s_back·f1(i) below f0."""
    if f0.target != f1.target:
        raise Mismatch("f0 and f1 need a shared target")
    B = f0.target
    lhs = [x for x in f0.map for _ in f1.map]
    rhs = [y for _ in f0.map for y in f1.map]
    if realizer_violation(B, lhs, rhs, s) is not None:
        raise RealizerInvalid("s does not realize f0π0 <= f1π1")
    if s_back is None:
        s_back = find_realizer(B, rhs, lhs)
        if s_back is None:
            raise RealizerInvalid("f1π1 <= f0π0 has no realizer")
    elif realizer_violation(B, rhs, lhs, s_back) is not None:
        raise RealizerInvalid("s_back does not realize f1π1 <= f0π0")
    w1 = B.app(s, f0.map[f0.source.i])
    w0 = B.app(s_back, f1.map[f1.source.i])
    if not _lower_bound_ok(B, w1, f1.map) or not _lower_bound_ok(B, w0, f0.map):
        raise ConstructionFailed("extracted dual disjointness witnesses are not lower bounds")
    return DisjointnessWitness(w0, w1, (s, s_back))


# -- coproducts of adjoint pairs --------------------------------------------

def adj_injection(a0: Opca, a1: Opca, j: int) -> AdjointPair:
    """π_j ⊣ κ_j, an arrow A_j -> A0×A1 of adjoint pairs."""
    P = product(a0, a1)
    pair = check_adjunction(P.projections[j], P.coprojections[j])
    if pair is None:
        raise ConstructionFailed(f"π{j} ⊣ κ{j} does not verify")
    return pair


def adj_coproduct(f: AdjointPair, g: AdjointPair) -> AdjointPair:
    """h* = ⟨f*, g*⟩ ⊣ h_* = [f_*, g_*] with unit realizer λ*x.p(rx)(sx)."""
    C = f.left.source
    if g.left.source != C:
        raise Mismatch("adjoint pairs must share their codomain")
    h_up = tuple_morphism(f.left, g.left)
    h_down = cotuple_morphism(f.right, g.right).morphism
    cs = C.combinators
    x = Var("x")
    unit = bracket_abstract(C, apply(Const(cs.p), App(Const(f.unit_realizer), x),
                                     App(Const(g.unit_realizer), x)), ["x"])
    round_trip = [h_down.map[h_up.map[c]] for c in range(len(C))]
    if realizer_violation(C, range(len(C)), round_trip, unit) is not None:
        raise ConstructionFailed("λ*x.p(rx)(sx) does not realize id <= h_*h*")
    pair = check_adjunction(h_up, h_down)
    if pair is None:
        raise ConstructionFailed("h* ⊣ h_* has no counit realizer")
    return AdjointPair(h_up, h_down, unit, pair.counit_realizer)
