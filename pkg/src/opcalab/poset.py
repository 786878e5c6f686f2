"""Finite posets, their nonempty downsets, and binary products of posets.

Elements carry string names but are addressed by their position in the
declared element list.  Subsets are bitmasks over that list: bit ``i`` stands
for element ``i``.  Every enumeration order in the package derives from the
declared list, which keeps searches and certificates reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import EmptySeed, NotADownset, OrderError, SizeLimit, UnknownElement

DOWNSET_LIMIT = 2 ** 20


class Verdict(NamedTuple):
    holds: bool
    witness: object = None


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinPoset:
    """A nonempty finite poset.

    ``relations`` may be any generating set of pairs ``(a, b)`` meaning
    ``a <= b``; the reflexive-transitive closure is taken and antisymmetry is
    checked afterwards.
    """

    def __init__(self, elements: Iterable[str], relations: Iterable[tuple[str, str]] = (), name: str = ""):
        names = tuple(str(e) for e in elements)
        if not names:
            raise OrderError("a poset needs at least one element")
        if len(set(names)) != len(names):
            dups = sorted({x for x in names if names.count(x) > 1})
            raise OrderError(f"duplicate element names: {dups}")
        index = {x: i for i, x in enumerate(names)}
        below = [1 << i for i in range(len(names))]
        for a, b in relations:
            for x in (a, b):
                if x not in index:
                    raise UnknownElement(f"unknown element {x!r}")
            below[index[b]] |= 1 << index[a]
        for k in range(len(names)):
            for j in range(len(names)):
                if below[j] >> k & 1:
                    below[j] |= below[k]
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                if below[j] >> i & 1 and below[i] >> j & 1:
                    raise OrderError(f"{names[i]} <= {names[j]} <= {names[i]}: not antisymmetric")
        self._setup(names, tuple(below), name)

    @classmethod
    def _trusted(cls, names, below, name=""):
        """Build from a precomputed down-mask table (no closure, no checks)."""
        p = cls.__new__(cls)
        p._setup(tuple(names), tuple(below), name)
        return p

    def _setup(self, names, below, name):
        n = len(names)
        self.elements = names
        self.name = name
        self.below = below
        above = [0] * n
        for j, m in enumerate(below):
            for i in bits(m):
                above[i] |= 1 << j
        self.above = tuple(above)
        self.full = (1 << n) - 1
        self.leq = tuple(tuple(bool(below[j] >> i & 1) for j in range(n)) for i in range(n))
        self._index = {x: i for i, x in enumerate(names)}

    # -- basic access -----------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, FinPoset) and (self.elements, self.below) == (other.elements, other.below)

    def __hash__(self):
        return hash((self.elements, self.below))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<FinPoset {label}{list(self.elements)}>"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(f"unknown element {name!r}") from None

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for x in names:
            m |= 1 << self.index(x)
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits(mask))

    # -- order-theoretic helpers -----------------------------------------

    def down(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.below[i]
        return out

    def up(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.above[i]
        return out

    def is_downset(self, mask: int) -> bool:
        return self.down(mask) == mask

    def lower_bounds(self, mask: int) -> int:
        out = self.full
        for i in bits(mask):
            out &= self.below[i]
        return out

    def has_lower_bound(self, mask: int) -> bool:
        return self.lower_bounds(mask) != 0

    def least(self) -> int | None:
        lb = self.lower_bounds(self.full)
        return lb.bit_length() - 1 if lb else None

    def minimal(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.below) if m == 1 << i)

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (i, j), i < j with nothing strictly between."""
        out = []
        for j, m in enumerate(self.below):
            strict = m & ~(1 << j)
            for i in bits(strict):
                between = strict & self.above[i] & ~(1 << i)
                if not between:
                    out.append((i, j))
        return sorted(out)

    def meet(self, i: int, j: int) -> int | None:
        """Greatest lower bound of two elements, if it exists."""
        lb = self.below[i] & self.below[j]
        for c in bits(lb):
            if self.below[c] & lb == lb:
                return c
        return None

    def relabel(self, order: Sequence[int], name: str | None = None) -> "FinPoset":
        """The same poset with elements listed in ``order`` (a permutation)."""
        pos = {old: new for new, old in enumerate(order)}
        below = []
        for old in order:
            m = 0
            for i in bits(self.below[old]):
                m |= 1 << pos[i]
            below.append(m)
        return FinPoset._trusted([self.elements[i] for i in order], below, self.name if name is None else name)

    # -- named constructors ----------------------------------------------

    @classmethod
    def chain(cls, names: Sequence[str], name: str = "") -> "FinPoset":
        """Chain in which ``names`` is listed from bottom to top."""
        return cls(names, zip(names, names[1:]), name=name)

    @classmethod
    def antichain(cls, names: Sequence[str], name: str = "") -> "FinPoset":
        return cls(names, (), name=name)


@dataclass(frozen=True)
class Downset:
    base: FinPoset
    mask: int

    def __post_init__(self):
        if self.mask == 0:
            raise NotADownset("downsets in T are nonempty")
        if self.mask & ~self.base.full or not self.base.is_downset(self.mask):
            raise NotADownset(f"{set(self.base.names_of(self.mask))} is not downward closed")

    @property
    def members(self) -> tuple[str, ...]:
        return self.base.names_of(self.mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __contains__(self, name) -> bool:
        return bool(self.mask >> self.base.index(name) & 1)

    def __le__(self, other: "Downset") -> bool:
        return self.mask & ~other.mask == 0

    def __len__(self):
        return popcount(self.mask)

    def __repr__(self):
        return "{" + ",".join(self.members) + "}"


def downset_closure(p: FinPoset, s: Iterable[str]) -> Downset:
    """Least downward closed superset of a nonempty set of element names."""
    s = list(s)
    if not s:
        raise EmptySeed("cannot close the empty set to a nonempty downset")
    return Downset(p, p.down(p.mask_of(s)))


def product_poset(p: FinPoset, q: FinPoset, name: str = "") -> FinPoset:
    """Componentwise order on pairs; pair (i, j) sits at index i * len(q) + j."""
    nq = len(q)
    names, below = [], []
    for i, a in enumerate(p.elements):
        for j, b in enumerate(q.elements):
            names.append(f"({a},{b})")
            m = 0
            for i2 in bits(p.below[i]):
                for j2 in bits(q.below[j]):
                    m |= 1 << (i2 * nq + j2)
            below.append(m)
    return FinPoset._trusted(names, below, name or (f"{p.name}×{q.name}" if p.name and q.name else ""))


def downset_masks(p: FinPoset, limit: int = DOWNSET_LIMIT) -> list[int]:
    """Bitmasks of all nonempty downsets of ``p``, in increasing integer order."""
    n = len(p)
    order = sorted(range(n), key=lambda i: (popcount(p.below[i]), i))
    stricts = [p.below[i] & ~(1 << i) for i in order]
    out = []
    stack = [(0, 0)]
    while stack:
        pos, mask = stack.pop()
        if pos == n:
            if mask:
                out.append(mask)
                if len(out) > limit:
                    raise SizeLimit(f"{p!r} has more than {limit} nonempty downsets")
            continue
        stack.append((pos + 1, mask))
        if stricts[pos] & mask == stricts[pos]:
            stack.append((pos + 1, mask | 1 << order[pos]))
    out.sort()
    return out


def nonempty_downsets(p: FinPoset, limit: int = DOWNSET_LIMIT) -> list[Downset]:
    return [Downset(p, m) for m in downset_masks(p, limit)]


def downset_name(p: FinPoset, mask: int) -> str:
    return "{" + ",".join(p.names_of(mask)) + "}"


def downset_poset(p: FinPoset, limit: int = DOWNSET_LIMIT, name: str = "") -> tuple[FinPoset, list[int]]:
    """The nonempty downsets of ``p`` ordered by inclusion, with their masks."""
    masks = downset_masks(p, limit)
    below = []
    for m in masks:
        b = 0
        for j, m2 in enumerate(masks):
            if m2 & ~m == 0:
                b |= 1 << j
        below.append(b)
    names = [downset_name(p, m) for m in masks]
    return FinPoset._trusted(names, below, name), masks


def all_posets(n: int, names: Sequence[str] | None = None) -> list[FinPoset]:
    """One representative of every isomorphism class of posets of size n (n <= 5)."""
    from itertools import permutations, product

    if n > 5:
        raise SizeLimit("poset classification is only offered up to 5 elements")
    names = list(names or [chr(ord("a") + i) for i in range(n)])
    pairs = [(i, j) for i in range(n) for j in range(n) if i < j]
    perms = list(permutations(range(n)))
    seen, out = set(), []
    # relations are generated in natural-label order; every poset has such a
    # labelling (take a linear extension), so i < j suffices
    for choice in product((False, True), repeat=len(pairs)):
        below = [1 << i for i in range(n)]
        for (i, j), on in zip(pairs, choice):
            if on:
                below[j] |= 1 << i
        closed = True
        for j in range(n):
            for i in bits(below[j]):
                if below[i] & ~below[j]:
                    closed = False
        if not closed:
            continue
        keys = []
        for perm in perms:
            rel = frozenset((perm[i], perm[j]) for j in range(n) for i in bits(below[j]))
            keys.append(tuple(sorted(rel)))
        key = min(keys)
        if key in seen:
            continue
        seen.add(key)
        out.append(FinPoset._trusted(names, below))
    return out
