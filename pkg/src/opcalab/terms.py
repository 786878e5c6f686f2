"""Terms over an OPCA: syntax, Kleene-style evaluation and bracket abstraction.

Concrete syntax::

    term := '\\' ident+ '.' term  |  atom+ ['\\' ...]
    atom := ident | '(' term ')'

Juxtaposition is application and associates to the left.  ``λ`` may be used
in place of the backslash.  An identifier is a variable when an enclosing
binder (or the ``variables`` argument of :func:`parse_term`) names it, and an
element constant otherwise.

Evaluation returns an element index, or ``None`` for an undefined term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Iterable, Sequence, Union

from .errors import (OpenTerm, TermSyntaxError, UnboundVariable,
                     UndefinedCombinator, UnknownIdentifier)

if TYPE_CHECKING:
    from .opas import Opas, Opca


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    params: tuple[str, ...]
    body: "Term"

    def __post_init__(self):
        if not self.params:
            raise ValueError("a binder needs at least one variable")
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"duplicate binder variables in {self.params}")


Term = Union[Var, Const, App, Lam]


def apply(head: Term, *args: Term) -> Term:
    """Left-nested application ``head a1 ... an``."""
    for x in args:
        head = App(head, x)
    return head


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return free_vars(t.body) - set(t.params)


def depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(depth(t.fun), depth(t.arg))
    if isinstance(t, Lam):
        return 1 + depth(t.body)
    return 1


# -- printing and parsing ---------------------------------------------------

def format_term(t: Term, opca: "Opas | None" = None) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return _quote(opca.element(t.value)) if opca is not None else f"#{t.value}"
    if isinstance(t, Lam):
        return "\\" + " ".join(t.params) + ". " + format_term(t.body, opca)
    fun = format_term(t.fun, opca)
    if isinstance(t.fun, Lam):
        fun = f"({fun})"
    arg = format_term(t.arg, opca)
    if isinstance(t.arg, (App, Lam)):
        arg = f"({arg})"
    return f"{fun} {arg}"


_TOKEN = re.compile(r'\s*(?:(?P<punct>[()\\λ.])|"(?P<quoted>[^"]*)"|(?P<ident>[^\s()\\λ."]+))')


def _quote(name: str) -> str:
    """Element names with spaces or punctuation are written in double quotes."""
    return name if re.fullmatch(r'[^\s()\\λ."]+', name) else f'"{name}"'


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError("unexpected character", pos)
        kind = next(g for g in ("punct", "quoted", "ident") if m.group(g) is not None)
        value = m.group(kind)
        start = m.start(kind)
        if kind == "quoted":
            kind, start = "ident", start - 1
        out.append((kind, "\\" if value == "λ" else value, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, opca, variables):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.opca = opca
        self.scope = [set(variables)]

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v, at = self.take()
        if v != value or kind == "ident":
            raise TermSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", at)

    def term(self):
        kind, v, at = self.peek()
        if v == "\\" and kind == "punct":
            return self.lam()
        items = []
        while True:
            kind, v, at = self.peek()
            if kind == "ident" or v == "(":
                items.append(self.atom())
            elif v == "\\":
                items.append(self.lam())
                break
            else:
                break
        if not items:
            raise TermSyntaxError(f"expected a term, found {v or 'end of input'!r}", at)
        return apply(*items)

    def lam(self):
        self.expect("\\")
        params = []
        while self.peek()[0] == "ident":
            params.append(self.take()[1])
        kind, v, at = self.peek()
        if not params:
            raise TermSyntaxError("binder without variables", at)
        if len(set(params)) != len(params):
            raise TermSyntaxError(f"duplicate binder variables {params}", at)
        self.expect(".")
        self.scope.append(set(params))
        body = self.term()
        self.scope.pop()
        return Lam(tuple(params), body)

    def atom(self):
        kind, v, at = self.take()
        if v == "(" and kind == "punct":
            t = self.term()
            self.expect(")")
            return t
        if any(v in s for s in self.scope):
            return Var(v)
        if self.opca is not None and v in self.opca.order._index:
            return Const(self.opca.index(v))
        raise UnknownIdentifier(f"{v!r} is neither a bound variable nor an element", at)


def parse_term(text: str, opca: "Opas | None", variables: Iterable[str] = ()) -> Term:
    """Parse the concrete syntax; ``variables`` are free variables in scope."""
    if not text.strip():
        raise TermSyntaxError("empty term", 0)
    p = _Parser(text, opca, variables)
    t = p.term()
    kind, v, at = p.peek()
    if kind != "end":
        raise TermSyntaxError(f"unexpected {v!r}", at)
    return t


# -- evaluation -------------------------------------------------------------

def evaluate(opca: "Opas", t: Term, env: dict | None = None) -> int | None:
    """Value of a Lam-free term under ``env``; None when undefined."""
    table = opca.table
    env = env or {}

    def ev(u):
        if type(u) is Const:
            return u.value
        if type(u) is Var:
            try:
                return env[u.name]
            except KeyError:
                raise OpenTerm(f"free variable {u.name!r}") from None
        if type(u) is App:
            f = ev(u.fun)
            if f is None:
                return None
            x = ev(u.arg)
            if x is None:
                return None
            return table[f][x]
        raise OpenTerm("λ-binders must be compiled before evaluation")

    return ev(t)


def eval_closed(opca: "Opca", t: Term) -> int | None:
    """Interpretation of a closed term; binders are compiled away first."""
    fv = free_vars(t)
    if fv:
        raise OpenTerm(f"term has free variables {sorted(fv)}")
    return evaluate(opca, compile_term(opca, t))


def _materialize(opca: "Opca", t: Term) -> Term:
    if isinstance(t, Const) or free_vars(t):
        return t
    v = evaluate(opca, t)
    if v is None:
        raise UndefinedCombinator(f"combinator term {format_term(t, opca)} is undefined")
    return Const(v)


def abstract(opca: "Opca", x: str, t: Term) -> Term:
    """λ*x.t as a combinator term; closed parts are evaluated to constants."""
    if isinstance(t, Lam):
        t = compile_term(opca, t)
    if isinstance(t, Var) and t.name == x:
        return _materialize(opca, apply(Const(opca.s), Const(opca.k), Const(opca.k)))
    if isinstance(t, (Var, Const)):
        return _materialize(opca, App(Const(opca.k), t))
    return _materialize(opca, apply(Const(opca.s), abstract(opca, x, t.fun), abstract(opca, x, t.arg)))


def compile_term(opca: "Opca", t: Term) -> Term:
    """Eliminate every binder by bracket abstraction (innermost variable first)."""
    if isinstance(t, Lam):
        body = compile_term(opca, t.body)
        for v in reversed(t.params):
            body = abstract(opca, v, body)
        return body
    if isinstance(t, App):
        return App(compile_term(opca, t.fun), compile_term(opca, t.arg))
    return t


def bracket_abstract(opca: "Opca", t: Term, variables: Sequence[str]) -> int:
    """The element λ*x1...xn y.t for ``variables = [x1, ..., xn, y]``."""
    variables = list(variables)
    if not variables:
        raise ValueError("need at least one variable to abstract")
    if len(set(variables)) != len(variables):
        raise ValueError(f"duplicate variables {variables}")
    extra = free_vars(t) - set(variables)
    if extra:
        raise UnboundVariable(f"free variables {sorted(extra)} are not abstracted")
    body = compile_term(opca, t)
    for v in reversed(variables):
        body = abstract(opca, v, body)
    assert isinstance(body, Const)
    return body.value


def completeness_violation(opca: "Opca", t: Term, variables: Sequence[str], element: int):
    """Check both clauses of combinatory completeness for ``element``.

    Returns None, or ``("partial", args)`` when ``element·a1...an`` is
    undefined, or ``("refines", args)`` when ``element·a⃗·b ⪯ t(a⃗, b)`` fails.
    """
    t = compile_term(opca, t)
    n = len(opca)
    table, leq = opca.table, opca.leq
    head, last = list(variables[:-1]), variables[-1]
    for args in product(range(n), repeat=len(head)):
        partial = opca.apply(element, *args)
        if partial is None:
            return ("partial", args)
        env = dict(zip(head, args))
        row = table[partial]
        for b in range(n):
            env[last] = b
            rhs = evaluate(opca, t, env)
            if rhs is None:
                continue
            lhs = row[b]
            if lhs is None or not leq[lhs][rhs]:
                return ("refines", args + (b,))
    return None


KLEENE_MODES = {"refines": "refines", "⪯": "refines", "kleene-equal": "kleene-equal", "≃": "kleene-equal",
                "le": "le", "≤": "le", "eq": "eq", "=": "eq"}


def kleene_compare(opca: "Opca", e1: Term, e2: Term, mode: str) -> bool:
    """Decide ``e1 ⪯ e2``, ``e1 ≃ e2``, ``e1 ≤ e2`` or ``e1 = e2`` for closed terms.

    ``≤`` and ``=`` require both sides to be defined; ``⪯`` only asks that
    definedness of the right side forces definedness of the left.
    """
    try:
        mode = KLEENE_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown comparison {mode!r}") from None
    v1, v2 = eval_closed(opca, e1), eval_closed(opca, e2)
    leq = opca.leq

    def refines(x, y):
        return y is None or (x is not None and leq[x][y])

    if mode == "refines":
        return refines(v1, v2)
    if mode == "kleene-equal":
        return refines(v1, v2) and refines(v2, v1)
    if v1 is None or v2 is None:
        return False
    return leq[v1][v2] if mode == "le" else v1 == v2


def all_terms(atoms: Sequence[Term], max_depth: int) -> list[Term]:
    """Every application term of depth <= max_depth over the given atoms."""
    layers = list(atoms)
    for _ in range(max_depth - 1):
        layers = list(atoms) + [App(f, x) for f in layers for x in layers]
    return layers
