"""Exhaustive search for OPCA structures on a fixed finite poset.

Tables are ordered canonically: row-major, each cell ranging over
"undefined" followed by the elements in declared order.  Two independent
routes produce the same stream:

* brute force (numpy): every table is encoded as a digit vector, axiom (0)
  and the existence of k and s are checked for all tables at once;
* pruned: for each candidate (k, s) a backtracking search fills the cells
  that k and s force to be defined first, abandons partial tables violating
  any axiom, and sorts its results; the per-pair streams are merged and
  deduplicated.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

import numpy as np

from .errors import SizeLimit
from .opas import Opas, Opca, ks_pairs
from .poset import FinPoset

BRUTE_MAX = 3
PRUNED_MAX = 4
CHUNK = 1 << 16


def _leq_ext(order: FinPoset) -> np.ndarray:
    """(n+1)x(n+1) order matrix where index n stands for "undefined" (below nothing)."""
    n = len(order)
    out = np.zeros((n + 1, n + 1), dtype=bool)
    out[:n, :n] = np.array(order.leq, dtype=bool)
    return out


def _decode(codes: np.ndarray, n: int) -> np.ndarray:
    """Integer codes -> (N, n, n) tables with value n meaning undefined."""
    digits = np.empty((codes.shape[0], n * n), dtype=np.int64)
    rest = codes.copy()
    for cell in range(n * n - 1, -1, -1):
        digits[:, cell] = rest % (n + 1)
        rest //= n + 1
    # digit 0 is "undefined", digit d >= 1 is element d-1
    vals = np.where(digits == 0, n, digits - 1)
    return vals.reshape(-1, n, n)


def _survivors(order: FinPoset, lo: int, hi: int) -> np.ndarray:
    """Codes in [lo, hi) whose tables satisfy axiom (0) and admit some k, s."""
    n = len(order)
    codes = np.arange(lo, hi, dtype=np.int64)
    tabs = _decode(codes, n)
    N = tabs.shape[0]
    ext = np.full((N, n + 1, n + 1), n, dtype=np.int64)
    ext[:, :n, :n] = tabs
    leq = _leq_ext(order)
    rows = np.arange(N)

    def at(x, y):
        return ext[rows, x, y]

    ok = np.ones(N, dtype=bool)
    for a in range(n):
        for b in range(n):
            v = tabs[:, a, b]
            for a2 in range(n):
                if not order.leq[a2][a]:
                    continue
                for b2 in range(n):
                    if order.leq[b2][b]:
                        w = tabs[:, a2, b2]
                        ok &= (v == n) | leq[w, v]
    has_k = np.zeros(N, dtype=bool)
    for k in range(n):
        good = np.ones(N, dtype=bool)
        for a in range(n):
            ka = tabs[:, k, a]
            for b in range(n):
                good &= leq[at(ka, b), a]
        has_k |= good
    has_s = np.zeros(N, dtype=bool)
    for s in range(n):
        good = np.ones(N, dtype=bool)
        for a in range(n):
            sa = tabs[:, s, a]
            for b in range(n):
                sab = at(sa, b)
                good &= sab != n
                for c in range(n):
                    rhs = at(tabs[:, a, c], tabs[:, b, c])
                    lhs = at(sab, c)
                    good &= (rhs == n) | leq[lhs, rhs]
        has_s |= good
    return codes[ok & has_k & has_s]


def _brute_codes(order: FinPoset, workers: int) -> list[int]:
    n = len(order)
    total = (n + 1) ** (n * n)
    bounds = [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_survivors, [order] * len(bounds), *zip(*bounds)))
    else:
        parts = [_survivors(order, lo, hi) for lo, hi in bounds]
    return [int(c) for part in parts for c in part]


def _code_table(code: int, n: int) -> tuple[tuple[int | None, ...], ...]:
    digits = []
    for _ in range(n * n):
        code, d = divmod(code, n + 1)
        digits.append(d)
    digits.reverse()
    cells = [None if d == 0 else d - 1 for d in digits]
    return tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(n))


def table_key(table) -> tuple[int, ...]:
    """Canonical sort key: row-major digits, undefined first."""
    return tuple(0 if v is None else v + 1 for row in table for v in row)


# -- pruned backtracking ------------------------------------------------------

UNSET = -1


def _violated(order: FinPoset, T: list[list], k: int, s: int) -> bool:
    """True when some axiom is already certainly violated by the partial table."""
    n = len(order)
    leq, below = order.leq, order.below
    for a in range(n):
        for b in range(n):
            v = T[a][b]
            if v is None or v == UNSET:
                continue
            for a2 in range(n):
                if not below[a] >> a2 & 1:
                    continue
                for b2 in range(n):
                    if below[b] >> b2 & 1:
                        w = T[a2][b2]
                        if w is None or (w != UNSET and not leq[w][v]):
                            return True
    for a in range(n):
        ka = T[k][a]
        if ka is None:
            return True
        if ka == UNSET:
            continue
        for b in range(n):
            v = T[ka][b]
            if v is None or (v != UNSET and not leq[v][a]):
                return True
    for a in range(n):
        sa = T[s][a]
        if sa is None:
            return True
        if sa == UNSET:
            continue
        for b in range(n):
            sab = T[sa][b]
            if sab is None:
                return True
            if sab == UNSET:
                continue
            for c in range(n):
                ac, bc = T[a][c], T[b][c]
                if ac is None or bc is None or ac == UNSET or bc == UNSET:
                    continue
                rhs = T[ac][bc]
                if rhs is None or rhs == UNSET:
                    continue
                lhs = T[sab][c]
                if lhs is None or (lhs != UNSET and not leq[lhs][rhs]):
                    return True
    return False


def _pair_stream(order: FinPoset, k: int, s: int) -> list[tuple[int, ...]]:
    """All tables (as sorted canonical keys) for which k and s satisfy the axioms.

    Cells that k and s force to be defined (row k, row s, and the rows of
    every k·a and s·a already placed) are filled first without the
    "undefined" option; the rest follow in row-major order.
    """
    n = len(order)
    T = [[UNSET] * n for _ in range(n)]
    out = []

    def next_cell():
        for row in (k, s):
            for a in range(n):
                if T[row][a] == UNSET:
                    return row, a, True
        for row in (k, s):
            for a in range(n):
                v = T[row][a]
                for b in range(n):
                    if T[v][b] == UNSET:
                        return v, b, True
        for r in range(n):
            for c in range(n):
                if T[r][c] == UNSET:
                    return r, c, False
        return None

    def fill():
        cell = next_cell()
        if cell is None:
            out.append(table_key(T))
            return
        r, c, forced = cell
        for v in (range(n) if forced else [None, *range(n)]):
            T[r][c] = v
            if not _violated(order, T, k, s):
                fill()
        T[r][c] = UNSET

    fill()
    out.sort()
    return out


def _pruned_keys(order: FinPoset, workers: int) -> Iterator[tuple[int, ...]]:
    n = len(order)
    pairs = [(k, s) for k in range(n) for s in range(n)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            streams = list(ex.map(_pair_stream, [order] * len(pairs), *zip(*pairs)))
    else:
        streams = [_pair_stream(order, k, s) for k, s in pairs]
    last = None
    for key in heapq.merge(*streams):
        if key != last:
            yield key
            last = key


def _key_table(key, n):
    cells = [None if d == 0 else d - 1 for d in key]
    return tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(n))


# -- public entry point -------------------------------------------------------

def enumerate_opcas(order: FinPoset, limit: int | None = None, *, prune: bool = False,
                    max_size: int | None = None, workers: int = 1) -> Iterator[Opca]:
    """Stream every OPCA structure on ``order`` in canonical table order.

    Each structure carries the first valid (k, s) pair.  Without pruning the
    size cap is 3; with pruning it is 4.
    """
    n = len(order)
    cap = max_size if max_size is not None else (PRUNED_MAX if prune else BRUTE_MAX)
    if n > cap:
        raise SizeLimit(f"enumeration over {n} elements exceeds the cap {cap}"
                        + ("" if prune else " (pruning raises it to 4)"))
    if prune:
        tables = (_key_table(key, n) for key in _pruned_keys(order, workers))
    else:
        tables = (_code_table(c, n) for c in _brute_codes(order, workers))
    stream = (_validated(order, t) for t in tables)
    return islice(stream, limit) if limit is not None else stream


def _validated(order: FinPoset, table) -> Opca:
    opas = Opas(order, table)
    k, s = ks_pairs(opas)[0]
    return Opca(order, table, k, s, name=order.name)


@dataclass(frozen=True)
class SweepReport:
    poset: FinPoset
    count: int
    with_least: int
    has_least_element: bool

    @property
    def only_trivial(self) -> bool:
        return self.count == self.with_least


def sweep(order: FinPoset, *, prune: bool = False, workers: int = 1) -> SweepReport:
    """Count the structures on a poset and how many of them have a least element."""
    count = sum(1 for _ in enumerate_opcas(order, prune=prune, workers=workers))
    least = order.least() is not None
    return SweepReport(order, count, count if least else 0, least)
