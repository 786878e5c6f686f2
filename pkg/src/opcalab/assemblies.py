"""Assemblies over a finite OPCA: sets whose points carry nonempty downsets of realizers."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .downsets import image
from .errors import BaseMismatch, Mismatch, NotAMorphism, NotADownset, SizeLimit
from .opas import Opca
from .poset import downset_name

ASSEMBLY_BUDGET = 4096


@dataclass(frozen=True)
class Assembly:
    base: Opca
    points: tuple[str, ...]
    existence: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        order = self.base.order
        if len(set(self.points)) != len(self.points):
            raise ValueError("assembly points must be distinct")
        if len(self.existence) != len(self.points):
            raise ValueError("every point needs an existence set")
        for x, m in zip(self.points, self.existence):
            if m == 0 or m & ~order.full or not order.is_downset(m):
                raise NotADownset(f"existence set of {x} is not a nonempty downset")

    def __len__(self):
        return len(self.points)

    def index(self, point: str) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise KeyError(point) from None

    def named(self) -> dict[str, str]:
        return {x: downset_name(self.base.order, m) for x, m in zip(self.points, self.existence)}


def assembly(base: Opca, existence: Mapping[str, Sequence[str]], name: str = "") -> Assembly:
    """Build from point -> realizer names; each set is down-closed."""
    order = base.order
    pts, masks = [], []
    for x, names in existence.items():
        names = list(names)
        if not names:
            raise NotADownset(f"existence set of {x} is empty")
        mask = order.mask_of(names)
        if not order.is_downset(mask):
            raise NotADownset(f"existence set of {x} is not downward closed")
        pts.append(x)
        masks.append(mask)
    return Assembly(base, tuple(pts), tuple(masks), name)


def tracker_ok(x: Assembly, y: Assembly, fmap: Sequence[int], r: int) -> bool:
    """r·E_X(p) ⊆ E_Y(f(p)) for every point p."""
    for p, m in enumerate(x.existence):
        img = image(x.base, r, m)
        if img is None or img & ~y.existence[fmap[p]]:
            return False
    return True


def find_assembly_tracker(fmap: Sequence[int], x: Assembly, y: Assembly) -> int | None:
    if x.base != y.base:
        raise BaseMismatch(f"{x.name} and {y.name} live over different OPCAs")
    return next((r for r in range(len(x.base)) if tracker_ok(x, y, fmap, r)), None)


@dataclass(frozen=True)
class AssemblyMorphism:
    source: Assembly
    target: Assembly
    map: tuple[int, ...]
    tracker: int = field(compare=False)

    def __post_init__(self):
        if self.source.base != self.target.base:
            raise BaseMismatch("assemblies live over different OPCAs")
        if not tracker_ok(self.source, self.target, self.map, self.tracker):
            raise NotAMorphism(f"{self.source.base.element(self.tracker)} does not track the map")


def assembly_morphism(x: Assembly, y: Assembly, fmap) -> AssemblyMorphism:
    if isinstance(fmap, Mapping):
        fmap = [y.index(fmap[p]) for p in x.points]
    fmap = tuple(fmap)
    r = find_assembly_tracker(fmap, x, y)
    if r is None:
        raise NotAMorphism("no realizer tracks the map")
    return AssemblyMorphism(x, y, fmap, r)


def identity(x: Assembly) -> AssemblyMorphism:
    """Tracked by i, since i·a <= a."""
    return AssemblyMorphism(x, x, tuple(range(len(x))), x.base.i)


def compose(f: AssemblyMorphism, g: AssemblyMorphism) -> AssemblyMorphism:
    """g∘f with a tracker found by search."""
    if f.target != g.source:
        raise Mismatch("assembly morphisms do not compose")
    return assembly_morphism(f.source, g.target, tuple(g.map[p] for p in f.map))


def gamma(x: Assembly) -> tuple[str, ...]:
    """Γ forgets the existence sets."""
    return x.points


def nabla(points: Sequence[str], base: Opca, name: str = "") -> Assembly:
    """∇ gives every point the whole carrier as realizers."""
    return Assembly(base, tuple(points), (base.order.full,) * len(points), name or "∇")


@dataclass(frozen=True)
class BijectionReport:
    functions: int
    trackers: tuple[int | None, ...]

    @property
    def holds(self) -> bool:
        return None not in self.trackers


def adjunction_bijection(x: Assembly, points: Sequence[str], budget: int = ASSEMBLY_BUDGET) -> BijectionReport:
    """Every function Γ(X) -> S is tracked as a morphism X -> ∇(S)."""
    if len(points) ** len(x) > budget:
        raise SizeLimit(f"{len(points)}^{len(x)} functions exceed the budget {budget}")
    target = nabla(points, x.base)
    trackers = tuple(find_assembly_tracker(fmap, x, target)
                     for fmap in product(range(len(points)), repeat=len(x)))
    return BijectionReport(len(trackers), trackers)
