import io
import json

from gosil.cli import main


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_check_reports_per_axiom_verdicts(running_example_path):
    code, output = run("check", str(running_example_path))
    assert code == 1  # the corpus contains deliberately ill-typed axioms
    assert "cat_meowing: well-typed" in output
    assert "tom_barks: ill-typed" in output
    assert "expected Dog, found Cat" in output
    assert "any_sound: ill-typed" in output
    assert "sound_by_kind: well-typed" in output


def test_check_derivation_output(running_example_path):
    code, output = run("check", str(running_example_path), "--derivation")
    assert "T-ex ⊢ ?a[Animal]: Cat(a) & meow(a) : Bool  [1 premise]" in output
    assert "  G-c ⊢ Cat(a) & meow(a) : Bool  [2 premises]" in output


def test_check_trace_shows_grounding_chain(running_example_path):
    code, output = run("check", str(running_example_path), "--trace")
    assert (
        "any_sound: grounded concept quantifiers: "
        "!a[Animal]: makingSound(a) <=> $(`meow)(a) | $(`bark)(a)" in output
    )
    assert (
        "any_sound: eliminated intensional terms: "
        "!a[Animal]: makingSound(a) <=> meow(a) | bark(a)" in output
    )


def test_check_json(running_example_path):
    code, output = run("check", str(running_example_path), "--json")
    payload = json.loads(output.splitlines()[-1])
    verdicts = {a["label"]: a["verdict"] for a in payload["axioms"]}
    assert verdicts["cat_meowing"] == "well-typed"
    assert verdicts["tom_barks"] == "ill-typed"
    errors = {a["label"]: a["error"] for a in payload["axioms"]}
    assert errors["tom_barks"]["kind"] == "ArgumentTypeMismatch"
    assert errors["tom_barks"]["expected"] == "Dog"
    assert errors["tom_barks"]["line"] is not None


def test_elaborate_command(running_example_path):
    code, output = run("elaborate", str(running_example_path))
    assert code == 0
    assert "implicit_meow: ?a[Animal]: Cat(a) & meow(a)" in output
    assert (
        "each_its_sound: !a[Animal]: (Cat(a) => meow(a)) & (Dog(a) => bark(a))"
        in output
    )


def test_ground_command(running_example_path):
    code, output = run("ground", str(running_example_path))
    assert code == 0
    assert "any_sound: !a[Animal]: makingSound(a) <=> meow(a) | bark(a)" in output
    assert (
        "sound_by_kind: !a[Animal]: makingSound(a) <=> Cat(a) & meow(a) | Dog(a) & bark(a)"
        in output
    )


def test_eval_all_true(sounds_path, s0_path):
    code, output = run("eval", str(sounds_path), "--structure", str(s0_path))
    assert code == 0
    lines = [l for l in output.splitlines() if l]
    assert all(line.endswith(": true") for line in lines)


def test_eval_reports_ill_typed(running_example_path, s0_path):
    code, output = run("eval", str(running_example_path), "--structure", str(s0_path))
    assert code == 1
    assert "tom_barks: error" in output
    assert "cat_meowing: true" in output


def test_models_command(tmp_path):
    theory = tmp_path / "t.gos"
    theory.write_text("type T\npred p : T\naxiom some: ?x[T]: p(x)\n")
    code, output = run("models", str(theory), "--bound", "T=1")
    assert code == 0
    assert "// model 1" in output
    assert "type T = { t0 }" in output
    assert "interp p = { (t0) }" in output
    assert output.strip().endswith("model(s)")


def test_models_unsat_exit_code(tmp_path):
    theory = tmp_path / "t.gos"
    theory.write_text("type T\naxiom no: false\n")
    code, output = run("models", str(theory), "--bound", "T=1")
    assert code == 1
    assert "// 0 model(s)" in output


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.gos"
    bad.write_text("type Cat\npred meow : Cat\nconst tom : Cat\naxiom b: meow(tom,\n")
    code, output = run("check", str(bad))
    assert code == 2
    assert "error:" in output
    assert "bad.gos" in output


def test_missing_file_exit_code(tmp_path):
    code, output = run("check", str(tmp_path / "nope.gos"))
    assert code == 2


def test_byte_identical_reruns(running_example_path, sounds_path, s0_path):
    for argv in (
        ("check", str(running_example_path), "--derivation", "--trace"),
        ("ground", str(running_example_path), "--trace"),
        ("elaborate", str(running_example_path)),
        ("eval", str(sounds_path), "--structure", str(s0_path), "--json"),
    ):
        assert run(*argv) == run(*argv)


def test_check_json_with_derivation(running_example_path):
    code, output = run("check", str(running_example_path), "--derivation", "--json")
    payload = json.loads(output.splitlines()[-1])
    by_label = {a["label"]: a for a in payload["axioms"]}
    tree = by_label["cat_meowing"]["derivation"]
    assert tree["rule"] == "T-ex"
    assert tree["children"][0]["rule"] == "G-c"


def test_eval_with_nat_bound(tmp_path):
    theory = tmp_path / "t.gos"
    theory.write_text(
        "type A\nconst c : A\nfunc size : A -> Nat\naxiom some: ?n[Nat]: size(c) = n\n"
    )
    structure = tmp_path / "t.str"
    structure.write_text("type A = { x }\ninterp c = { () -> x }\ninterp size = { (x) -> 2 }\n")
    code, output = run("eval", str(theory), "--structure", str(structure), "--nat-bound", "3")
    assert code == 0
    assert "some: true" in output
    code, output = run("eval", str(theory), "--structure", str(structure))
    assert code == 1
    assert "UnboundedNatQuantifier" in output
