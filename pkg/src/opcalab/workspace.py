"""Line-oriented workspace files and name resolution for the command line.

Blocks start at a header line; the lines after it (until the next header)
form its body.  ``#`` starts a comment.

    poset A2
      elements a b
    opca C2
      elements 1 0
      le 0<1
      app 1 1 -> 1
      app 1 0 -> 0
      ...
      k 1
      s 1
    morphism f : C2 -> V3
      map 1 -> a
      map 0 -> ⊥
    applicative g : C2 -o V3
      map 1 -> {a, b}
      map 0 -> {⊥}
    assembly X over C2
      point x1 {0}
      point x2 {0, 1}

Orders are given by generators (``a<b<c`` is allowed); their closure is
taken.  The shipped fixtures ONE, C2, C3, V3, A2, A3 and the assembly X are always present
unless a file redefines the name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import assemblies as asm
from . import downsets as ds
from . import fixtures
from . import morphisms as mor
from . import products as prod
from .errors import (Axiom0Violation, InvalidCombinators, NoCombinators, OpcaError,
                     ParseError, UnknownName, ValidationError)
from .opas import Opas, Opca, table_from_mapping
from .poset import FinPoset

HEADERS = ("poset", "opca", "morphism", "applicative", "assembly")
SEED_ORDERS = ("declared", "sorted")

_MORPH_HEADER = re.compile(r"^(morphism|applicative)\s+(\S+)\s*:\s*(\S+)\s*(->|-o|⊸)\s*(\S+)\s*$")
_ASM_HEADER = re.compile(r"^assembly\s+(\S+)\s+over\s+(\S+)\s*$")
_SET = re.compile(r"^\{(.*)\}$")


@dataclass
class Block:
    kind: str
    name: str
    header: str
    path: str
    line: int
    body: list[tuple[int, str]] = field(default_factory=list)

    def error(self, message: str, line: int | None = None) -> ParseError:
        return ParseError(message, line or self.line, 1, self.path)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_blocks(text: str, path: str = "<input>") -> list[Block]:
    blocks: list[Block] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        words = line.split()
        if words[0] in HEADERS and not raw[:1].isspace():
            if len(words) < 2:
                raise ParseError(f"{words[0]} block needs a name", no, 1, path)
            blocks.append(Block(words[0], words[1], line.strip(), path, no))
        elif not blocks:
            raise ParseError(f"expected one of {', '.join(HEADERS)}", no, len(raw) - len(raw.lstrip()) + 1, path)
        else:
            blocks[-1].body.append((no, line.strip()))
    return blocks


def _parse_set(text: str, block: Block, no: int) -> list[str]:
    m = _SET.match(text.strip())
    if not m:
        raise block.error(f"expected a set like {{a, b}}, got {text.strip()!r}", no)
    items = [x.strip() for x in m.group(1).split(",") if x.strip()]
    if not items:
        raise block.error("empty set", no)
    return items


def _order_lines(block: Block, seed_order: str) -> tuple[FinPoset, list[tuple[int, str]]]:
    """Read ``elements`` and ``le`` lines; return the poset and the remaining lines."""
    elements, relations, rest = None, [], []
    for no, line in block.body:
        key, _, arg = line.partition(" ")
        if key == "elements":
            elements = arg.split()
        elif key == "le":
            for chain in arg.split():
                parts = chain.split("<")
                if len(parts) < 2 or not all(parts):
                    raise block.error(f"bad order generator {chain!r}", no)
                relations.extend(zip(parts, parts[1:]))
        else:
            rest.append((no, line))
    if not elements:
        raise block.error(f"{block.kind} {block.name} has no elements line")
    if seed_order == "sorted":
        elements = sorted(elements)
    try:
        return FinPoset(elements, relations, name=block.name), rest
    except OpcaError as e:
        raise block.error(f"{block.name}: {e}") from e


@dataclass
class Workspace:
    posets: dict[str, FinPoset] = field(default_factory=dict)
    opcas: dict[str, Opca] = field(default_factory=dict)
    morphisms: dict[str, mor.OpcaMorphism] = field(default_factory=dict)
    applicatives: dict[str, ds.ApplicativeMorphism] = field(default_factory=dict)
    assemblies: dict[str, asm.Assembly] = field(default_factory=dict)
    rejected: list[tuple[str, Opas | None, str]] = field(default_factory=list)
    declared: list[str] = field(default_factory=list)
    seed_order: str = "declared"

    # -- loading ----------------------------------------------------------

    def add_text(self, text: str, path: str = "<input>", strict: bool = True) -> None:
        seen: dict[tuple[str, str], int] = {}
        for block in parse_blocks(text, path):
            kind = "opca" if block.kind in ("opca", "poset") else block.kind
            if (kind, block.name) in seen:
                raise block.error(f"{block.kind} {block.name} already defined on line {seen[kind, block.name]}")
            seen[kind, block.name] = block.line
            try:
                getattr(self, f"_load_{block.kind}")(block)
            except ValidationError as e:
                if strict:
                    raise
                self.rejected.append((block.name, getattr(e, "opas", None), str(e)))

    def _load_poset(self, block: Block) -> None:
        p, rest = _order_lines(block, self.seed_order)
        if rest:
            raise block.error(f"unexpected line in poset block: {rest[0][1]!r}", rest[0][0])
        self.posets[block.name] = p

    def _load_opca(self, block: Block) -> None:
        order, rest = _order_lines(block, self.seed_order)
        app, pins = {}, {}
        for no, line in rest:
            key, _, arg = line.partition(" ")
            if key == "app":
                m = re.match(r"^(\S+)\s+(\S+)\s*->\s*(\S+)$", arg.strip())
                if not m:
                    raise block.error(f"expected 'app a b -> c', got {line!r}", no)
                if m.group(1, 2) in app:
                    raise block.error(f"{m.group(1)}·{m.group(2)} defined twice", no)
                app[m.group(1, 2)] = m.group(3)
            elif key in ("k", "s"):
                pins[key] = arg.strip()
            else:
                raise block.error(f"unexpected line in opca block: {line!r}", no)
        try:
            opas = Opas(order, table_from_mapping(order, app), name=block.name)
        except Axiom0Violation as e:
            err = ValidationError(f"{block.path}:{block.line}: {block.name}: {e}", e.witness)
            err.opas = None
            raise err from e
        except OpcaError as e:
            raise block.error(f"{block.name}: {e}") from e
        try:
            k = None if "k" not in pins else order.index(pins["k"])
            s = None if "s" not in pins else order.index(pins["s"])
            a = Opca.from_opas(opas, k, s, name=block.name)
        except (NoCombinators, InvalidCombinators) as e:
            err = ValidationError(f"{block.path}:{block.line}: {block.name}: {e}", getattr(e, "witness", None))
            err.opas = opas
            raise err from e
        except OpcaError as e:
            raise block.error(f"{block.name}: {e}") from e
        self.opcas[block.name] = a
        self.posets.setdefault(block.name, a.order)
        self.declared.append(block.name)

    def _header(self, block: Block):
        m = _MORPH_HEADER.match(block.header)
        if not m:
            raise block.error(f"expected '{block.kind} NAME : SRC -> TGT'")
        arrow = m.group(4)
        if (block.kind == "morphism") != (arrow == "->"):
            raise block.error(f"{block.kind} blocks use {'->' if block.kind == 'morphism' else '-o'}")
        return self.opca(m.group(3)), self.opca(m.group(5))

    def _map_lines(self, block: Block) -> dict[str, str]:
        out = {}
        for no, line in block.body:
            m = re.match(r"^map\s+(\S+)\s*->\s*(.+)$", line)
            if not m:
                raise block.error(f"expected 'map a -> b', got {line!r}", no)
            out[m.group(1)] = (no, m.group(2).strip())
        return out

    def _load_morphism(self, block: Block) -> None:
        src, tgt = self._header(block)
        lines = self._map_lines(block)
        try:
            fmap = {a: v for a, (no, v) in lines.items()}
            missing = [x for x in src.elements if x not in fmap]
            if missing:
                raise block.error(f"map is not total: missing {missing}")
            self.morphisms[block.name] = mor.morphism(src, tgt, fmap, name=block.name)
        except ParseError:
            raise
        except OpcaError as e:
            raise ValidationError(f"{block.path}:{block.line}: {block.name}: {e}") from e

    def _load_applicative(self, block: Block) -> None:
        src, tgt = self._header(block)
        lines = self._map_lines(block)
        fmap = {a: _parse_set(v, block, no) for a, (no, v) in lines.items()}
        missing = [x for x in src.elements if x not in fmap]
        if missing:
            raise block.error(f"map is not total: missing {missing}")
        try:
            self.applicatives[block.name] = ds.applicative(src, tgt, fmap, name=block.name)
        except OpcaError as e:
            raise ValidationError(f"{block.path}:{block.line}: {block.name}: {e}") from e

    def _load_assembly(self, block: Block) -> None:
        m = _ASM_HEADER.match(block.header)
        if not m:
            raise block.error("expected 'assembly NAME over OPCA'")
        base = self.opca(m.group(2))
        points = {}
        for no, line in block.body:
            pm = re.match(r"^point\s+(\S+)\s+(\{.*\})$", line)
            if not pm:
                raise block.error(f"expected 'point x {{a, b}}', got {line!r}", no)
            if pm.group(1) in points:
                raise block.error(f"point {pm.group(1)} given twice", no)
            points[pm.group(1)] = _parse_set(pm.group(2), block, no)
        if not points:
            raise block.error("assembly has no points")
        try:
            x = asm.assembly(base, points, name=block.name)
        except OpcaError as e:
            raise ValidationError(f"{block.path}:{block.line}: {block.name}: {e}") from e
        self.assemblies[block.name] = x

    # -- name resolution ----------------------------------------------------

    def opca(self, expr: str) -> Opca:
        """A named OPCA, a product ``A*B`` / ``A×B``, or a downset OPCA ``T(A)``."""
        expr = expr.strip()
        if expr in self.opcas:
            return self.opcas[expr]
        parts = _split_top(expr, "*×")
        if len(parts) > 1:
            out = self.opca(parts[0])
            for p in parts[1:]:
                out = prod.product(out, self.opca(p)).opca
            return out
        if expr.startswith("T(") and expr.endswith(")"):
            return ds.build_T(self.opca(expr[2:-1])).opca
        if expr.startswith("(") and expr.endswith(")"):
            return self.opca(expr[1:-1])
        raise UnknownName(f"no OPCA named {expr!r}")

    def poset(self, name: str) -> FinPoset:
        if name in self.posets:
            return self.posets[name]
        try:
            return self.opca(name).order
        except UnknownName:
            raise UnknownName(f"no poset named {name!r}") from None

    def morphism(self, expr: str) -> mor.OpcaMorphism:
        """A named morphism or one of id(A), !(A), <(A), const(A,B,b), pi0/pi1/kappa0/kappa1(A,B)."""
        expr = expr.strip()
        if expr in self.morphisms:
            return self.morphisms[expr]
        m = re.match(r"^([^()]+)\((.*)\)$", expr)
        if not m:
            raise UnknownName(f"no morphism named {expr!r}")
        op, args = m.group(1), _split_top(m.group(2), ",")
        try:
            if op == "id":
                return mor.identity(self.opca(args[0]))
            if op == "!":
                return mor.bang(self.opca(args[0]))
            if op == "<":
                a = self.opca(args[0])
                return mor.point(a, a.index(args[1]) if len(args) > 1 else 0)
            if op == "const":
                a, b = self.opca(args[0]), self.opca(args[1])
                return mor.constant(a, b, b.index(args[2]))
            if op in ("pi0", "pi1", "kappa0", "kappa1", "π0", "π1", "κ0", "κ1"):
                P = prod.product(self.opca(args[0]), self.opca(args[1]))
                j = int(op[-1])
                return (P.projections if op[0] in "pπ" else P.coprojections)[j]
        except IndexError:
            raise UnknownName(f"{op}(...) needs more arguments") from None
        raise UnknownName(f"unknown morphism constructor {op!r}")

    def applicative(self, expr: str) -> ds.ApplicativeMorphism:
        """A named applicative morphism, delta(A), or δ∘f for any morphism expression f."""
        expr = expr.strip()
        if expr in self.applicatives:
            return self.applicatives[expr]
        m = re.match(r"^(delta|δ)\((.*)\)$", expr)
        if m:
            return ds.delta(self.opca(m.group(2)))
        return ds.projective(self.morphism(expr))

    def assembly(self, name: str) -> asm.Assembly:
        try:
            return self.assemblies[name]
        except KeyError:
            raise UnknownName(f"no assembly named {name!r}") from None


def _order_lines_text(p: FinPoset) -> list[str]:
    lines = ["  elements " + " ".join(p.elements)]
    covers = [f"{p.elements[a]}<{p.elements[b]}" for a, b in p.covers()]
    if covers:
        lines.append("  le " + " ".join(covers))
    return lines


def format_poset(p: FinPoset, name: str | None = None) -> str:
    return "\n".join([f"poset {name or p.name}"] + _order_lines_text(p)) + "\n"


def format_opca(a: Opca, name: str | None = None) -> str:
    lines = [f"opca {name or a.name}"] + _order_lines_text(a.order)
    lines += [f"  app {x} {y} -> {v}" for (x, y), v in a.app_mapping().items()]
    lines += [f"  k {a.element(a.k)}", f"  s {a.element(a.s)}"]
    return "\n".join(lines) + "\n"


def format_morphism(f: mor.OpcaMorphism, name: str) -> str:
    lines = [f"morphism {name} : {f.source.name} -> {f.target.name}"]
    lines += [f"  map {x} -> {y}" for x, y in f.named().items()]
    return "\n".join(lines) + "\n"


def format_applicative(f: ds.ApplicativeMorphism, name: str) -> str:
    lines = [f"applicative {name} : {f.source.name} -o {f.target.name}"]
    lines += [f"  map {f.source.element(a)} -> {{{', '.join(f.target.order.names_of(m))}}}"
              for a, m in enumerate(f.map)]
    return "\n".join(lines) + "\n"


def format_assembly(x: asm.Assembly, name: str | None = None) -> str:
    lines = [f"assembly {name or x.name} over {x.base.name}"]
    lines += [f"  point {p} {{{', '.join(x.base.order.names_of(m))}}}" for p, m in zip(x.points, x.existence)]
    return "\n".join(lines) + "\n"


def _split_top(text: str, seps: str) -> list[str]:
    """Split on any separator character that is not inside parentheses."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


def _sorted_poset(p: FinPoset) -> FinPoset:
    pairs = [(x, y) for x in p.elements for y in p.elements if x != y and p.le(p.index(x), p.index(y))]
    return FinPoset(sorted(p.elements), pairs, name=p.name)


def sorted_opca(a: Opca) -> Opca:
    """The same OPCA with its carrier listed in sorted name order; k and s are kept."""
    order = _sorted_poset(a.order)
    app = {(a.element(x), a.element(y)): a.element(v)
           for x, row in enumerate(a.table) for y, v in enumerate(row) if v is not None}
    return Opca(order, table_from_mapping(order, app), order.index(a.element(a.k)),
                order.index(a.element(a.s)), name=a.name)


def builtin_workspace(seed_order: str = "declared") -> Workspace:
    ws = Workspace(seed_order=seed_order)
    for name, a in fixtures.OPCAS.items():
        ws.opcas[name] = sorted_opca(a) if seed_order == "sorted" else a
        ws.posets[name] = ws.opcas[name].order
    for name in ("A2", "A3"):
        p = getattr(fixtures, name)
        ws.posets[name] = _sorted_poset(p) if seed_order == "sorted" else p
    for name, x in fixtures.ASSEMBLIES.items():
        base = ws.opcas[x.base.name]
        ws.assemblies[name] = asm.assembly(base, {p: x.base.order.names_of(m) for p, m in zip(x.points, x.existence)},
                                           name=name)
    return ws


def load_workspace(paths: Iterable[str | Path], seed_order: str = "declared", strict: bool = True) -> Workspace:
    """Fixtures plus every file in ``paths``; with ``strict`` the first invalid block raises."""
    if seed_order not in SEED_ORDERS:
        raise ValueError(f"seed order must be one of {SEED_ORDERS}")
    ws = builtin_workspace(seed_order)
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read {p}: {e.strerror}", None, None, str(p)) from e
        ws.add_text(text, str(p), strict=strict)
    return ws
