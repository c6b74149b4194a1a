import pytest

from diagrel.cli import run

SIG = "sig R : 1 -> 1\nsig S : 2 -> 1\n"
INTERP = """carrier 2
rel R 1 1 {
  (0 ; 0)
  (0 ; 1)
  (1 ; 1)
}
rel S 2 1 {
  (0 0 ; 0)
}
"""
ORDER = """sig R : 1 -> 1
axiom reflexive : (idw 1) <= (gen R)
axiom transitive : (seqw (gen R) (gen R)) <= (gen R)
axiom antisymmetric : (meet (gen R) (dag (gen R))) <= (idw 1)
axiom total : (top 1 1) <= (join (gen R) (dag (gen R)))
"""


@pytest.fixture
def files(tmp_path):
    sig = tmp_path / "t.sig"
    sig.write_text(SIG)
    interp = tmp_path / "t.interp"
    interp.write_text(INTERP)
    thy = tmp_path / "order.thy"
    thy.write_text(ORDER)
    return {"sig": str(sig), "interp": str(interp), "thy": str(thy),
            "dir": tmp_path}


def test_typecheck_ok(files, capsys):
    assert run(["typecheck", "--sig", files["sig"], "(seqw (gen S) (gen R))"]) == 0
    assert capsys.readouterr().out.strip() == "2 -> 1"


def test_typecheck_term_from_file(files, capsys):
    term = files["dir"] / "t.term"
    term.write_text("(dag (gen S))\n")
    assert run(["typecheck", "--sig", files["sig"], str(term)]) == 0
    assert capsys.readouterr().out.strip() == "1 -> 2"


def test_typecheck_errors_exit_2(files, capsys):
    assert run(["typecheck", "--sig", files["sig"], "(seqw (gen R) (gen S))"]) == 2
    assert run(["typecheck", "--sig", files["sig"], "(((("]) == 2
    assert run(["typecheck", "--sig", "/nonexistent.sig", "(idw 1)"]) == 2
    assert run(["no-such-command"]) == 2


def test_desugar(files, capsys):
    assert run(["desugar", "--sig", files["sig"], "(top 1 1)"]) == 0
    out = capsys.readouterr().out
    assert "dscw" in out and "codw" in out


def test_eval_prints_relation(files, capsys):
    assert run(["eval", "--sig", files["sig"], "--interp", files["interp"],
                "(gen R)"]) == 0
    out = capsys.readouterr().out
    assert "(0 ; 1)" in out and "(1 ; 0)" not in out


def test_eval_requires_interp(files, capsys):
    assert run(["eval", "--sig", files["sig"], "(gen R)"]) == 2


def test_included(files, capsys):
    assert run(["included", "--sig", files["sig"], "--interp", files["interp"],
                "(idw 1)", "(gen R)"]) == 0
    assert "included" in capsys.readouterr().out
    assert run(["included", "--sig", files["sig"], "--interp", files["interp"],
                "(top 1 1)", "(gen R)"]) == 1
    assert "witness" in capsys.readouterr().out


def test_check_model(files, capsys):
    good = files["dir"] / "order.interp"
    good.write_text("carrier 2\nrel R 1 1 {\n  (0 ; 0)\n  (0 ; 1)\n  (1 ; 1)\n}\n")
    assert run(["check-model", files["thy"], "--interp", str(good)]) == 0
    assert capsys.readouterr().out.strip().endswith("model")
    bad = files["dir"] / "bad.interp"
    bad.write_text("carrier 2\nrel R 1 1 {\n}\n")
    assert run(["check-model", files["thy"], "--interp", str(bad),
                "--machine"]) == 1
    out = capsys.readouterr().out
    assert "axiom=reflexive holds=false" in out
    assert out.strip().endswith("not a model")


def test_find_models(files, capsys):
    assert run(["find-models", files["thy"], "--size", "2"]) == 0
    assert "models: 2" in capsys.readouterr().out
    assert run(["find-models", files["thy"], "--size", "2", "--max-space",
                "4"]) == 2  # refused: space 16 exceeds 4


def test_check_proof(files, capsys):
    prf = files["dir"] / "p.prf"
    prf.write_text("prove (idw 1) <= (top 1 1)\nstep eta-discard at e dir l2r\nqed\n")
    assert run(["check-proof", "--sig", files["sig"], str(prf)]) == 0
    assert "accepted" in capsys.readouterr().out
    assert run(["check-proof", "--sig", files["sig"], str(prf),
                "--spotcheck", "--trials", "20", "--seed", "4"]) == 0
    assert "spotcheck passed" in capsys.readouterr().out
    bad = files["dir"] / "bad.prf"
    bad.write_text("prove (idw 1) <= (top 1 1)\nqed\n")
    assert run(["check-proof", "--sig", files["sig"], str(bad)]) == 1
    assert "rejected" in capsys.readouterr().out


def test_verify_axioms_and_determinism(files, capsys):
    assert run(["verify-axioms", "--size", "1", "--trials", "3", "--seed", "9",
                "--family", "linear", "--machine"]) == 0
    out1 = capsys.readouterr().out
    assert "failures=0" in out1 and "axiom=" in out1
    assert run(["verify-axioms", "--size", "1", "--trials", "3", "--seed", "9",
                "--family", "linear", "--machine"]) == 0
    assert capsys.readouterr().out == out1


def test_spider(files, capsys):
    assert run(["spider", "(seqw copyw cocw)"]) == 0
    out = capsys.readouterr().out
    assert "colour: white" in out and "1 -> 1" in out
    assert run(["spider", "(gen R)"]) == 2  # outside the fragment, usage error
    assert run(["spider", "--sig", files["sig"],
                "(seqw copyw cocb)"]) == 2  # mixed colours


def test_doctrine_subcommands(capsys):
    assert run(["doctrine", "comprehension", "0", "2", "--size", "3"]) == 0
    out = capsys.readouterr().out
    assert "object size: 2" in out
    # entire functional predicate on 2x2: the identity graph {0, 3}
    assert run(["doctrine", "ruc", "0", "3", "--size", "2"]) == 0
    assert run(["doctrine", "ruc", "0", "--size", "2"]) == 1  # not entire
