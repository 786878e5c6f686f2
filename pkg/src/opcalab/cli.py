"""``opca-lab``: run one check against a workspace and report certificates.

Exit status is 0 when every verdict passes (for ``verify``: every replay
reproduces its recorded verdict), 1 otherwise, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import certify
from . import morphisms as mor
from .certificates import Certificate, bundle_json, load_certificates, replay
from .errors import OpcaError, ParseError, UnknownCommand, WorkspaceError
from .workspace import SEED_ORDERS, Workspace, load_workspace

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- commands ----------------------------------------------------------------------
# Each takes (workspace, parsed args) and returns a list of certificates.

def _validate(ws: Workspace, args) -> list[Certificate]:
    names = ws.declared or list(ws.opcas)
    return [certify.validate([ws.opcas[n] for n in names], ws.rejected)]


def _combinators(ws, args):
    return [certify.combinators(ws.opca(args.opca))]


def _compile(ws, args):
    return [certify.compile_term_certificate(ws.opca(args.opca), args.term)]


def _eval(ws, args):
    return [certify.evaluate_term(ws.opca(args.opca), args.term)]


def _hom(ws, args):
    return [certify.hom(ws.opca(args.source), ws.opca(args.target), args.limit or mor.HOM_BUDGET)]


def _ineq(ws, args):
    return [certify.ineq(ws.morphism(args.f), ws.morphism(args.g))]


def _one_morphism(builder):
    return lambda ws, args: [builder(ws.morphism(args.f))]


def _zero(ws, args):
    return [certify.zero(ws.morphism(args.f), args.limit or mor.HOM_BUDGET)]


def _trivial(ws, args):
    return [certify.trivial(ws.opca(args.opca))]


def _product(ws, args):
    from . import products as prod

    a0, a1 = ws.opca(args.a0), ws.opca(args.a1)
    out = [certify.product_certificate(a0, a1)]
    for b in args.sources:
        out.append(certify.two_product_law(prod.product(a0, a1), ws.opca(b), args.limit or mor.HOM_BUDGET))
    return out


def _coproduct(ws, args):
    if args.target is not None:
        return [certify.coproduct_sweep(ws.opca(args.f0), ws.opca(args.f1), ws.opca(args.target))]
    return [certify.coproduct(ws.morphism(args.f0), ws.morphism(args.f1))]


def _biproduct(ws, args):
    a0, a1 = ws.opca(args.a0), ws.opca(args.a1)
    out = [certify.biproduct(a0, a1)]
    for b in args.sources:
        out.append(certify.disjointness(ws.opca(b), a0, a1))
    return out


def _adjoint(ws, args):
    return [certify.adjoint(ws.morphism(args.l), ws.morphism(args.r))]


def _downset(ws, args):
    return [certify.downset(ws.opca(args.opca))]


def _monad_laws(ws, args):
    return [certify.monad_laws(ws.opca(args.opca))]


def _projective(ws, args):
    return [certify.projective_certificate(ws.applicative(args.f))]


def _right_adjoint(ws, args):
    return [certify.right_adjoint(ws.morphism(args.f))]


def _pca_coproduct(ws, args):
    if args.target is not None:
        return [certify.pca_coproduct_sweep(ws.opca(args.f0), ws.opca(args.f1), ws.opca(args.target))]
    return [certify.pca_coproduct(ws.applicative(args.f0), ws.applicative(args.f1))]


def _hmaps(ws, args):
    return [certify.hmaps(ws.opca(args.a0), ws.opca(args.a1))]


def _mediator(ws, args):
    return [certify.mediator(ws.applicative(args.f0), ws.applicative(args.f1))]


def _noprod(ws, args):
    return [certify.noprod(ws.poset(args.p0), ws.poset(args.p1))]


def _enumerate(ws, args):
    return [certify.enumerate_certificate(ws.poset(args.poset), args.limit, args.prune, args.threads)]


def _assembly(ws, args):
    xs = [ws.assembly(n) for n in args.assemblies]
    out = [certify.assembly_certificate(x, args.set) for x in xs]
    if len(xs) > 1:
        out.append(certify.assembly_composition(xs))
    return out


def _kleene(ws, args):
    return [certify.kleene(ws.opca(args.opca), args.lhs, args.rhs, args.mode)]


def _completeness(ws, args):
    return [certify.completeness(ws.opca(args.opca), max_depth=args.limit or 3)]


COMMANDS = {
    "validate": (_validate, "validate every OPCA in the input files", []),
    "combinators": (_combinators, "list valid (k, s) pairs and the derived combinators", ["opca"]),
    "compile": (_compile, "bracket-abstract a term and check completeness for it", ["opca", "term"]),
    "eval": (_eval, "evaluate a closed term", ["opca", "term"]),
    "hom": (_hom, "enumerate the hom-set and its preorder", ["source", "target"]),
    "ineq": (_ineq, "decide f <= g with a realizer", ["f", "g"]),
    "cd": (_one_morphism(certify.cd), "decide computational density", ["f"]),
    "cdm": (_one_morphism(certify.cdm), "decide the variant of density with a factor m", ["f"]),
    "discrete": (_one_morphism(certify.discrete), "decide discreteness", ["f"]),
    "zero": (_zero, "compare the three characterizations of zero morphisms", ["f"]),
    "trivial": (_trivial, "decide triviality and pseudotriviality", ["opca"]),
    "product": (_product, "build A0×A1; with sources, check the product law", ["a0", "a1"]),
    "coproduct": (_coproduct, "cotuple of f0, f1; or with three OPCAs, sweep all cotuples", ["f0", "f1"]),
    "biproduct": (_biproduct, "check the biproduct identities; with sources, disjointness", ["a0", "a1"]),
    "adjoint": (_adjoint, "check l ⊣ r", ["l", "r"]),
    "downset": (_downset, "build the downset OPCA T(A)", ["opca"]),
    "monad-laws": (_monad_laws, "check the monad laws for T on A", ["opca"]),
    "projective": (_projective, "decide projectivity of an applicative morphism", ["f"]),
    "right-adjoint": (_right_adjoint, "build the right adjoint of a cd morphism and extract back", ["f"]),
    "pca-coproduct": (_pca_coproduct, "cotuple of applicative morphisms; or with three OPCAs, sweep all",
                      ["f0", "f1"]),
    "hmaps": (_hmaps, "build the maps between A0 and A1 through their coproduct", ["a0", "a1"]),
    "mediator": (_mediator, "build the maximal mediator and compare every mediator with it", ["f0", "f1"]),
    "noprod": (_noprod, "witness that a product of downset OPCAs does not exist", ["p0", "p1"]),
    "enumerate": (_enumerate, "count the OPCA structures on a poset", ["poset"]),
    "assembly": (_assembly, "check assemblies and the Γ ⊣ ∇ bijection", []),
    "kleene": (_kleene, "compare two terms in a Kleene mode", ["opca", "lhs", "rhs", "mode"]),
    "completeness": (_completeness, "check combinatory completeness on a term corpus", ["opca"]),
    "verify": (None, "replay certificate files", []),
}

_HELP = {
    "opca": "OPCA name or expression (A*B, T(A))",
    "source": "OPCA", "target": "OPCA", "a0": "OPCA", "a1": "OPCA",
    "f": "morphism name or id(A), !(A), <(A,a), const(A,B,b), pi0(A,B), kappa0(A,B)",
    "g": "morphism", "l": "morphism", "r": "morphism", "f0": "morphism", "f1": "morphism",
    "p0": "poset or OPCA", "p1": "poset or OPCA", "poset": "poset or OPCA",
    "term": "term, e.g. '(\\x. x) 0'", "lhs": "term", "rhs": "term",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", action="append", default=[], metavar="PATH",
                        help="workspace file (repeatable); fixtures are always loaded")
    common.add_argument("--json", metavar="PATH", help="write the certificates as canonical JSON")
    common.add_argument("--limit", type=int, metavar="N",
                        help="search budget (hom, zero, product), structures to list (enumerate), term depth (completeness)")
    common.add_argument("--seed-order", choices=SEED_ORDERS, default="declared",
                        help="element order used to seed canonical searches")
    common.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker processes for enumeration; results do not depend on N")
    parser = argparse.ArgumentParser(prog="opca-lab", description="Checks on finite ordered partial combinatory algebras.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, (_, text, positional) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        for arg in positional:
            p.add_argument(arg, help=_HELP.get(arg))
        if name == "verify":
            p.add_argument("certificates", nargs="+", metavar="CERTIFICATE")
        elif name in ("product", "biproduct"):
            p.add_argument("sources", nargs="*", metavar="B", help="OPCAs to test the universal property against")
        elif name in ("coproduct", "pca-coproduct"):
            p.add_argument("target", nargs="?", help="with three OPCAs: sweep all cotuples into this target")
        elif name == "enumerate":
            p.add_argument("--prune", action="store_true", help="use the constraint-pruned search")
        elif name == "assembly":
            p.add_argument("assemblies", nargs="+", metavar="ASSEMBLY")
            p.add_argument("--set", nargs="+", default=["0", "1"], metavar="POINT",
                           help="points of the set S for the Γ ⊣ ∇ bijection (default: 0 1)")
    return parser


# -- reporting ---------------------------------------------------------------------

def _show(value) -> str:
    return value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)


def report(cert: Certificate, out) -> None:
    subject = ", ".join(f"{k}={_show(v)}" for k, v in cert.subject.items())
    print(f"{cert.claim} [{subject}]: {cert.verdict}", file=out)
    for key, value in cert.witness.get("summary", {}).items():
        print(f"  {key}: {_show(value)}", file=out)
    choice = ", ".join(f"{n}: k={k} s={s}" for n, (k, s) in cert.combinator_choice.items())
    if choice:
        print(f"  combinators: {choice}", file=out)
    print(f"  search space: {cert.search_space}", file=out)


def _verify(paths, out) -> int:
    status = EXIT_PASS
    for path in paths:
        try:
            certs = load_certificates(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise ParseError(f"cannot load certificates: {e}", path=path) from e
        for cert in certs:
            r = replay(cert)
            mark = "reproduced" if r.verdict == cert.verdict else "NOT reproduced"
            detail = r.error or (f"failed obligations {list(r.failures)}" if r.failures else "")
            print(f"{path}: {cert.claim}: recorded {cert.verdict}, replayed {r.verdict} ({mark})"
                  + (f"; {detail}" if detail else ""), file=out)
            if r.verdict != cert.verdict:
                status = EXIT_FAIL
    return status


def run_command(ws: Workspace, args) -> list[Certificate]:
    try:
        handler = COMMANDS[args.command][0]
    except KeyError:
        raise UnknownCommand(f"unknown command {args.command!r}") from None
    return handler(ws, args)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return _verify(args.certificates, out)
        ws = load_workspace(args.file, args.seed_order, strict=args.command != "validate")
        certs = run_command(ws, args)
    except (WorkspaceError, OpcaError, ValueError) as e:
        print(f"opca-lab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    for cert in certs:
        report(cert, out)
    if args.json:
        Path(args.json).write_text(certs[0].to_json() if len(certs) == 1 else bundle_json(certs), encoding="utf-8")
    return EXIT_PASS if all(c.verdict == "pass" for c in certs) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
