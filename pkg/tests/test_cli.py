import io
import json
import subprocess
import sys

import pytest

from opcalab.certificates import load_certificates
from opcalab.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, COMMANDS, main, run_command
from opcalab.errors import UnknownCommand
from opcalab.workspace import builtin_workspace


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_combinators_lists_four_pairs(tmp_path):
    path = tmp_path / "c.json"
    code, text = run("combinators", "C2", "--json", str(path))
    assert code == EXIT_PASS
    cert = load_certificates(path.read_text(encoding="utf-8"))[0]
    assert len(cert.witness["summary"]["pairs"]) == 4


def test_noprod_antichains_empty_intersection(tmp_path):
    path = tmp_path / "n.json"
    code, text = run("noprod", "A2", "A2", "--json", str(path))
    assert code == EXIT_PASS
    cert = load_certificates(path.read_text(encoding="utf-8"))[0]
    assert cert.verdict == "pass"
    assert cert.witness["summary"]["intersection"] == []


def test_eval_identity():
    code, text = run("eval", "C2", "(\\x. x) 0")
    assert code == EXIT_PASS
    assert "value: 0" in text


@pytest.mark.parametrize("argv, code", [
    (["validate"], EXIT_PASS),
    (["trivial", "C2"], EXIT_PASS),
    (["cd", "id(C2)"], EXIT_PASS),
    (["cdm", "!(V3)"], EXIT_PASS),
    (["hom", "C2", "ONE"], EXIT_PASS),
    (["ineq", "id(C2)", "const(C2,C2,1)"], EXIT_PASS),
    (["ineq", "const(V3,V3,a)", "const(V3,V3,⊥)"], EXIT_PASS),
    (["biproduct", "C2", "ONE", "C2"], EXIT_PASS),
    (["product", "C2", "C2", "ONE"], EXIT_PASS),
    (["coproduct", "id(C2)", "id(C2)"], EXIT_PASS),
    (["downset", "C2"], EXIT_PASS),
    (["projective", "delta(C2)"], EXIT_PASS),
    (["right-adjoint", "id(C2)"], EXIT_PASS),
    (["hmaps", "ONE", "C2"], EXIT_PASS),
    (["pca-coproduct", "ONE", "C2", "C2"], EXIT_PASS),
    (["coproduct", "ONE", "C2", "C2"], EXIT_PASS),
    (["noprod", "C2", "C2"], EXIT_FAIL),
    (["assembly", "X", "--set", "0", "1", "2"], EXIT_PASS),
    (["enumerate", "A2", "--prune"], EXIT_PASS),
    (["kleene", "C2", "0", "1", "le"], EXIT_PASS),
    (["kleene", "C2", "1", "0", "le"], EXIT_FAIL),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


@pytest.mark.parametrize("argv", [
    [],
    ["no-such-command"],
    ["combinators", "NOPE"],
    ["cd", "nope(C2)"],
    ["eval", "C2", "(1"],
    ["combinators", "C2", "-f", "/nonexistent/file.opca"],
    ["verify", "/nonexistent/cert.json"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_bad_workspace_file(tmp_path):
    path = tmp_path / "bad.opca"
    path.write_text("opca A\n  elements a b\n  app a a -> a\n", encoding="utf-8")
    assert run("combinators", "C2", "-f", str(path))[0] == EXIT_USAGE
    code, text = run("validate", "-f", str(path))
    assert code == EXIT_FAIL and "validate" in text


def test_workspace_file_entities(tmp_path):
    path = tmp_path / "w.opca"
    path.write_text("morphism f : C2 -> ONE\n  map 1 -> *\n  map 0 -> *\n", encoding="utf-8")
    assert run("cd", "f", "-f", str(path))[0] == EXIT_PASS


def test_json_and_verify_round_trip(tmp_path):
    path = tmp_path / "b.json"
    code, _ = run("biproduct", "C2", "ONE", "C2", "V3", "--json", str(path))
    assert code == EXIT_PASS
    certs = load_certificates(path.read_text(encoding="utf-8"))
    assert len(certs) == 3
    code, text = run("verify", str(path))
    assert code == EXIT_PASS
    assert text.count("(reproduced)") == 3


def test_verify_reports_failed_verdicts_honestly(tmp_path):
    path = tmp_path / "f.json"
    assert run("noprod", "C2", "C2", "--json", str(path))[0] == EXIT_FAIL
    code, text = run("verify", str(path))
    assert code == EXIT_PASS and "(reproduced)" in text


def test_verify_detects_tampering(tmp_path):
    path = tmp_path / "t.json"
    run("cd", "id(V3)", "--json", str(path))
    data = json.loads(path.read_text(encoding="utf-8"))
    for ob in data["witness"]["obligations"]:
        if "n" in ob:
            ob["n"] = "b"  # b·a is ⊥, so b cannot choose a realizer for a
    path.write_text(json.dumps(data), encoding="utf-8")
    code, text = run("verify", str(path))
    assert code == EXIT_FAIL and "NOT reproduced" in text


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("monad-laws", "C2", "--json", str(a))
    run("monad-laws", "C2", "--json", str(b), "--threads", "3")
    assert a.read_bytes() == b.read_bytes()


def test_seed_order_sorted():
    code, text = run("combinators", "C2", "--seed-order", "sorted")
    assert code == EXIT_PASS


def test_every_command_has_a_handler():
    required = {"validate", "combinators", "compile", "eval", "hom", "ineq", "cd", "cdm", "discrete", "zero",
                "trivial", "product", "coproduct", "biproduct", "adjoint", "downset", "monad-laws", "projective",
                "right-adjoint", "pca-coproduct", "hmaps", "mediator", "noprod", "enumerate", "assembly", "verify"}
    assert required <= set(COMMANDS)


def test_run_command_unknown():
    class Args:
        command = "frobnicate"
    with pytest.raises(UnknownCommand):
        run_command(builtin_workspace(), Args())


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "opcalab.cli", "eval", "C2", "1 0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "value: 0" in proc.stdout
