"""Ordered partial applicative structures and ordered PCAs.

An application table is a tuple of rows; ``table[a][b]`` is the index of
``a·b`` or ``None`` when the application is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

from .errors import (Axiom0Violation, InvalidCombinators, NoCombinators,
                     UndefinedCombinator, UnknownElement)
from .poset import FinPoset, Verdict, bits, popcount

Table = tuple[tuple["int | None", ...], ...]


def axiom0_violation(order: FinPoset, table: Table):
    """First quadruple (a', a, b', b) breaking monotonicity of application, or None.

    Lower elements a', b' are tried first, so the witness is as far down as possible.
    """
    leq = order.leq
    height = [popcount(m) for m in order.below]
    under = [sorted(bits(m), key=lambda x: (height[x], x)) for m in order.below]
    for a, row in enumerate(table):
        for b, v in enumerate(row):
            if v is None:
                continue
            for a2 in under[a]:
                row2 = table[a2]
                for b2 in under[b]:
                    w = row2[b2]
                    if w is None or not leq[w][v]:
                        return (a2, a, b2, b)
    return None


class Opas:
    """A finite poset with a partial, monotone binary application."""

    def __init__(self, order: FinPoset, table: Sequence[Sequence[int | None]], name: str = ""):
        n = len(order)
        table = tuple(tuple(row) for row in table)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError(f"application table must be {n}x{n}")
        for row in table:
            for v in row:
                if v is not None and not (isinstance(v, int) and 0 <= v < n):
                    raise UnknownElement(f"table entry {v!r} is not an element index")
        witness = axiom0_violation(order, table)
        if witness is not None:
            a2, a, b2, b = (order.elements[i] for i in witness)
            raise Axiom0Violation(
                f"{a2}<={a}, {b2}<={b} and {a}·{b} is defined, but {a2}·{b2} is not below it", witness)
        self.order = order
        self.table = table
        self.name = name or order.name

    @property
    def elements(self) -> tuple[str, ...]:
        return self.order.elements

    @property
    def leq(self):
        return self.order.leq

    def __len__(self):
        return len(self.order)

    def index(self, name: str) -> int:
        return self.order.index(name)

    def element(self, i: int) -> str:
        return self.order.elements[i]

    def app(self, a: int | None, b: int | None) -> int | None:
        """Strict application: undefined arguments give an undefined result."""
        if a is None or b is None:
            return None
        return self.table[a][b]

    def apply(self, head: int | None, *args: int | None) -> int | None:
        """Left-associated application ``head·a1·...·an``."""
        v = head
        for x in args:
            if v is None or x is None:
                return None
            v = self.table[v][x]
        return v

    @cached_property
    def memo(self) -> dict:
        """Scratch space for derived operations that are pure functions of the table."""
        return {}

    def app_mapping(self) -> dict[tuple[str, str], str]:
        names = self.elements
        return {(names[a], names[b]): names[v]
                for a, row in enumerate(self.table) for b, v in enumerate(row) if v is not None}

    def _key(self):
        return (self.order, self.table)

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<{type(self).__name__} {label}on {list(self.elements)}>"


def validate_opas(order: FinPoset, app: Mapping[tuple[str, str], str], name: str = "") -> Opas:
    """Build an OPAS from a mapping ``(a, b) -> a·b`` on element names.

    Raises Axiom0Violation (carrying the quadruple) when application is not
    monotone, UnknownElement for names outside the carrier.
    """
    return Opas(order, table_from_mapping(order, app), name=name)


def table_from_mapping(order: FinPoset, app: Mapping[tuple[str, str], str]) -> Table:
    n = len(order)
    rows = [[None] * n for _ in range(n)]
    for (a, b), c in app.items():
        rows[order.index(a)][order.index(b)] = order.index(c)
    return tuple(tuple(r) for r in rows)


# -- combinator axioms ----------------------------------------------------

def k_violation(opas: Opas, k: int):
    """First (a, b) with k·a·b not below a, or None."""
    tab, leq = opas.table, opas.leq
    row = tab[k]
    for a in range(len(opas)):
        ka = row[a]
        if ka is None:
            return (a, 0)
        kr = tab[ka]
        for b in range(len(opas)):
            v = kr[b]
            if v is None or not leq[v][a]:
                return (a, b)
    return None


def s_violation(opas: Opas, s: int):
    """First failure of axioms (2)/(3) for ``s``: ("defined", a, b) or ("refines", a, b, c)."""
    tab, leq, n = opas.table, opas.leq, len(opas)
    row = tab[s]
    sab = [[None] * n for _ in range(n)]
    for a in range(n):
        sa = row[a]
        if sa is None:
            return ("defined", a, 0)
        for b in range(n):
            v = tab[sa][b]
            if v is None:
                return ("defined", a, b)
            sab[a][b] = v
    for a in range(n):
        ra = tab[a]
        for b in range(n):
            rb = tab[b]
            srow = tab[sab[a][b]]
            for c in range(n):
                ac, bc = ra[c], rb[c]
                if ac is None or bc is None:
                    continue
                rhs = tab[ac][bc]
                if rhs is None:
                    continue
                lhs = srow[c]
                if lhs is None or not leq[lhs][rhs]:
                    return ("refines", a, b, c)
    return None


def ks_pairs(opas: Opas) -> list[tuple[int, int]]:
    ks = [k for k in range(len(opas)) if k_violation(opas, k) is None]
    if not ks:
        return []
    ss = [s for s in range(len(opas)) if s_violation(opas, s) is None]
    return [(k, s) for k in ks for s in ss]


def find_ks(opas: Opas) -> list[tuple[int, int]]:
    """Every pair (k, s) satisfying axioms (1)-(3), in canonical order."""
    pairs = ks_pairs(opas)
    if not pairs:
        raise NoCombinators(f"{opas!r} admits no combinators k, s")
    return pairs


@dataclass(frozen=True)
class CombinatorSet:
    i: int
    kbar: int
    p: int
    p0: int
    p1: int
    case_c: int


class Opca(Opas):
    """An OPAS together with a fixed choice of combinators ``k`` and ``s``.

    Realizer values throughout the package depend on this choice, so it is
    part of the value (equality compares it too).
    """

    def __init__(self, order: FinPoset, table, k: int, s: int, name: str = ""):
        super().__init__(order, table, name=name)
        kv = k_violation(self, k)
        if kv is not None:
            raise InvalidCombinators(f"{self.element(k)} violates k·a·b <= a at "
                                     f"a={self.element(kv[0])}, b={self.element(kv[1])}", ("k", k) + kv)
        sv = s_violation(self, s)
        if sv is not None:
            raise InvalidCombinators(f"{self.element(s)} violates axiom "
                                     f"{'(2)' if sv[0] == 'defined' else '(3)'} at "
                                     f"{[self.element(x) for x in sv[1:]]}", ("s", s) + sv)
        self.k = k
        self.s = s

    @classmethod
    def from_opas(cls, opas: Opas, k: int | None = None, s: int | None = None, name: str = "") -> "Opca":
        """Promote an OPAS; unpinned combinators default to the first valid pair."""
        if k is None or s is None:
            pairs = find_ks(opas)
            if k is None and s is None:
                k, s = pairs[0]
            elif k is None:
                k = next((a for a, b in pairs if b == s), pairs[0][0])
            else:
                s = next((b for a, b in pairs if a == k), pairs[0][1])
        return cls(opas.order, opas.table, k, s, name=name or opas.name)

    def with_combinators(self, k: int, s: int) -> "Opca":
        return Opca(self.order, self.table, k, s, name=self.name)

    def renamed(self, name: str) -> "Opca":
        return Opca(self.order, self.table, self.k, self.s, name=name)

    def _key(self):
        return (self.order, self.table, self.k, self.s)

    @cached_property
    def combinators(self) -> CombinatorSet:
        return derived_combinators(self)

    @property
    def i(self) -> int:
        return self.combinators.i


def opca(order: FinPoset, app: Mapping[tuple[str, str], str], k: str | None = None,
         s: str | None = None, name: str = "") -> Opca:
    """Convenience constructor from element names."""
    opas = validate_opas(order, app, name=name)
    return Opca.from_opas(opas, None if k is None else order.index(k),
                          None if s is None else order.index(s), name=name)


def meet_opca(order: FinPoset, name: str = "") -> Opca:
    """A poset with binary meets, application being meet."""
    n = len(order)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            m = order.meet(a, b)
            if m is None:
                raise ValueError(f"{order.elements[a]} and {order.elements[b]} have no meet")
            row.append(m)
        rows.append(row)
    return Opca.from_opas(Opas(order, rows, name=name or order.name))


def derived_combinators(a: Opca) -> CombinatorSet:
    """i = skk, k̄ = ki, p = λ*xyz.zxy, p0 = λ*x.xk, p1 = λ*x.xk̄ and C = i."""
    from .terms import App, Const, Var, bracket_abstract

    i = a.apply(a.s, a.k, a.k)
    if i is None:
        raise UndefinedCombinator("s·k·k is undefined")
    kbar = a.app(a.k, i)
    if kbar is None:
        raise UndefinedCombinator("k·i is undefined")
    x, y, z = Var("x"), Var("y"), Var("z")
    p = bracket_abstract(a, App(App(z, x), y), ["x", "y", "z"])
    p0 = bracket_abstract(a, App(x, Const(a.k)), ["x"])
    p1 = bracket_abstract(a, App(x, Const(kbar)), ["x"])
    cs = CombinatorSet(i=i, kbar=kbar, p=p, p0=p0, p1=p1, case_c=i)
    bad = combinator_law_violation(a, cs)
    if bad is not None:
        raise UndefinedCombinator(f"combinator law {bad[0]} fails at {bad[1:]}")
    return cs


def combinator_law_violation(a: Opas, cs: CombinatorSet, k: int | None = None):
    """Exhaustive check of the derived combinator laws; first failure or None."""
    k = a.k if k is None else k
    leq, n = a.leq, len(a)

    def below(v, bound):
        return v is not None and leq[v][bound]

    for x in range(n):
        if not below(a.app(cs.i, x), x):
            return ("i", x)
        for y in range(n):
            if not below(a.apply(cs.kbar, x, y), y):
                return ("kbar", x, y)
            pxy = a.apply(cs.p, x, y)
            if not below(a.app(cs.p0, pxy), x):
                return ("p0", x, y)
            if not below(a.app(cs.p1, pxy), y):
                return ("p1", x, y)
            if not below(a.apply(cs.case_c, k, x, y), x):
                return ("C-k", x, y)
            if not below(a.apply(cs.case_c, cs.kbar, x, y), y):
                return ("C-kbar", x, y)
    return None


def is_trivial(a: Opas) -> Verdict:
    """A least element as witness, or all (at least two) minimal elements."""
    least = a.order.least()
    if least is not None:
        return Verdict(True, least)
    return Verdict(False, a.order.minimal())


def is_pseudotrivial(a: Opas) -> Verdict:
    """Any two elements have a common lower bound; otherwise a bad pair."""
    n = len(a)
    below = a.order.below
    for x in range(n):
        for y in range(x + 1, n):
            if not below[x] & below[y]:
                return Verdict(False, (x, y))
    return Verdict(True, None)


def all_tables(n: int):
    """Every partial n x n table, in canonical (row-major lexicographic) order."""
    for cells in product([None] + list(range(n)), repeat=n * n):
        yield tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(n))
