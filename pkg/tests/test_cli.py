import io
from contextlib import redirect_stderr, redirect_stdout

from lcatch.cli import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


# ------------- eval -------------


def test_eval_product_example():
    code, out, _ = run_cli("eval", "-e", "prodz [#4, #0, #9]", "--count")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "#0"
    assert lines[1].startswith("steps: ")


def test_eval_pred():
    code, out, _ = run_cli("eval", "-e", "pred #5")
    assert code == 0
    assert out.splitlines() == ["#4"]


def test_eval_trace():
    code, out, _ = run_cli("eval", "-e", "(\\x:1. x) ()", "--trace")
    assert code == 0
    assert out.splitlines() == ["step 1: [beta_v] ()", "()"]


def test_eval_type_error_exit_code():
    code, out, err = run_cli("eval", "-e", "catch a. \\x:1. x")
    assert code == 2
    assert "NonArrowFreeCatch" in err


def test_eval_parse_error_exit_code():
    code, _, err = run_cli("eval", "-e", "(\\x. x")
    assert code == 1
    assert "parse error" in err


def test_eval_out_of_fuel_exit_code():
    code, out, err = run_cli("eval", "-e", "(\\x:1. x) ()", "--max-steps", "0")
    assert code == 4


def test_eval_no_sugar():
    code, out, _ = run_cli("eval", "-e", "pred #3", "--no-sugar")
    assert code == 0
    assert out.splitlines() == ["[(), ()]"]


def test_eval_no_prelude_makes_names_unbound():
    code, _, err = run_cli("eval", "-e", "pred #3", "--no-prelude")
    assert code == 2
    assert "UnboundVar" in err


def test_eval_deterministic_output():
    first = run_cli("eval", "-e", "times #3 #4", "--count", "--trace")
    second = run_cli("eval", "-e", "times #3 #4", "--count", "--trace")
    assert first == second


# ------------- check -------------


def test_check_prelude_file(tmp_path):
    from lcatch.prelude import prelude_source
    target = tmp_path / "prelude.lc"
    target.write_text(prelude_source())
    code, out, _ = run_cli("check", str(target))
    assert code == 0
    assert "pred : [1] -> [1]" in out.splitlines()


def test_check_reports_non_arrow_free_catch(tmp_path):
    target = tmp_path / "bad.lc"
    target.write_text("def bad = catch a. \\x:1. x;\n")
    code, _, err = run_cli("check", str(target))
    assert code == 2
    assert "NonArrowFreeCatch" in err


def test_check_parse_error(tmp_path):
    target = tmp_path / "broken.lc"
    target.write_text("def broken = ;\n")
    code, _, err = run_cli("check", str(target))
    assert code == 1


def test_check_empty_file(tmp_path):
    target = tmp_path / "empty.lc"
    target.write_text("")
    code, out, _ = run_cli("check", str(target))
    assert code == 0
    assert out == ""


def test_check_missing_file():
    code, _, err = run_cli("check", "/nonexistent/nowhere.lc")
    assert code == 1


def test_check_main_expression(tmp_path):
    target = tmp_path / "prog.lc"
    target.write_text("def id = \\x:1. x;\nmain = id ();\n")
    code, out, _ = run_cli("check", str(target))
    assert code == 0
    assert out.splitlines() == ["id : 1 -> 1", "main : 1"]


# ------------- redexes -------------


def test_redexes_lines():
    code, out, _ = run_cli("redexes", "-e", "catch a. throw a ((\\x:1. x) ())")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("[beta_v] @ /0/0 -> ")
    assert lines[1].startswith("[catch_1] @ / -> ")


def test_redexes_none_for_normal_form():
    code, out, _ = run_cli("redexes", "-e", "()")
    assert code == 0 and out == ""


def test_redexes_cons_throw():
    code, out, _ = run_cli("redexes", "-e", "cons (throw a ()) []")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("[throw] @ /0 -> ")


# ------------- develop -------------


def test_develop_single_round():
    code, out, _ = run_cli("develop", "-e", "(\\x:1. x) ()")
    assert code == 0 and out.strip() == "()"


def test_develop_catch_throw():
    code, out, _ = run_cli("develop", "-e", "catch a. throw a ()")
    assert code == 0 and out.strip() == "catch a. ()"


def test_develop_two_rounds():
    code, out, _ = run_cli("develop", "-e", "catch a. throw a ()", "-n", "2")
    assert code == 0 and out.strip() == "()"


def test_develop_rejects_zero_rounds():
    code, _, err = run_cli("develop", "-e", "()", "-n", "0")
    assert code == 1


# ------------- meta -------------


def test_meta_selected_props():
    code, out, _ = run_cli("meta", "--props", "sr,progress",
                           "--cases", "60", "--seed", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "PROP SubjectReduction CASES 60 FAILURES 0"
    assert lines[1] == "PROP Progress CASES 60 FAILURES 0"


def test_meta_zero_cases():
    code, out, _ = run_cli("meta", "--props", "sr", "--cases", "0")
    assert code == 0
    assert out.strip() == "PROP SubjectReduction CASES 0 FAILURES 0"


def test_meta_diamond():
    code, out, _ = run_cli("meta", "--props", "diamond",
                           "--cases", "40", "--size", "12")
    assert code == 0
    assert out.startswith("PROP Diamond CASES 40 FAILURES 0")


def test_meta_unknown_property():
    code, _, err = run_cli("meta", "--props", "nonsense")
    assert code == 1
    assert "unknown property" in err


def test_meta_deterministic_output():
    args = ("meta", "--props", "takahashi", "--cases", "30", "--seed", "3")
    assert run_cli(*args) == run_cli(*args)
