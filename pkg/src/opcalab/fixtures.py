"""Small shipped structures used by tests, demos and the CLI.

All OPCAs here are meet semilattices with application = meet.  Elements are
declared top first, so the canonical first combinator pair is (top, top).
"""

from __future__ import annotations

from .opas import Opca, meet_opca
from .poset import FinPoset

ONE: Opca = meet_opca(FinPoset(["*"], name="ONE"), name="ONE")
C2: Opca = meet_opca(FinPoset(["1", "0"], [("0", "1")], name="C2"), name="C2")
C3: Opca = meet_opca(FinPoset(["2", "1", "0"], [("0", "1"), ("1", "2")], name="C3"), name="C3")
V3: Opca = meet_opca(FinPoset(["a", "b", "⊥"], [("⊥", "a"), ("⊥", "b")], name="V3"), name="V3")

A2: FinPoset = FinPoset.antichain(["a", "b"], name="A2")
A3: FinPoset = FinPoset.antichain(["a", "b", "c"], name="A3")

OPCAS: dict[str, Opca] = {"ONE": ONE, "C2": C2, "C3": C3, "V3": V3}
POSETS: dict[str, FinPoset] = {"A2": A2, "A3": A3, **{n: a.order for n, a in OPCAS.items()}}

# Imported late: assemblies pulls in the downset machinery.
from .assemblies import Assembly, assembly  # noqa: E402

X: Assembly = assembly(C2, {"x1": ["0"], "x2": ["0", "1"]}, name="X")
ASSEMBLIES: dict[str, Assembly] = {"X": X}
