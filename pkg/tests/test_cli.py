import io
import json
from contextlib import redirect_stderr, redirect_stdout
from importlib import resources

from ringlab.cli import main
from ringlab.selftest import FIXTURE_NAMES, fixture_text


def fixture_path(name):
    return str(resources.files("ringlab.fixtures").joinpath(f"{name}.json"))


def run_cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()


def test_analyze_h3_text():
    code, out, err = run_cli("analyze", fixture_path("h3"))
    assert code == 0 and not err
    assert "nilpotency_class: 2" in out
    assert "center: [z]" in out
    assert "structurally_satisfied: True" in out


def test_analyze_h3_json():
    code, out, _ = run_cli("analyze", fixture_path("h3"), "--format", "json")
    assert code == 0
    tree = json.loads(out)
    assert tree["annihilator"] == ["z"]
    assert tree["categoricity"]["structurally_satisfied"] is True


def test_analyze_paper_example():
    code, out, _ = run_cli("analyze", fixture_path("paper-example-r"))
    assert code == 0
    assert "annihilator: [u]" in out
    assert "square_ideal: [2*u]" in out
    assert "failed_side: addition" in out


def test_analyze_zero_bilinear():
    import tempfile

    doc = {
        "kind": "bilinear",
        "domain": "Q",
        "basis": ["a", "b"],
        "table": [
            [["0", "0"], ["0", "0"]],
            [["0", "0"], ["0", "0"]],
        ],
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(doc, f)
        path = f.name
    code, out, _ = run_cli("analyze", path)
    assert code == 0
    assert "width 0 (exact)" in out
    assert "is_identically_degenerate: True" in out


def test_analyze_module_free_line_is_stage_error():
    import tempfile

    doc = {
        "kind": "module",
        "domain": "Z",
        "summands": ["Z"],
        "basis": ["e"],
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(doc, f)
        path = f.name
    code, out, err = run_cli("analyze", path)
    assert code == 2
    assert "divisible_bounded_split" in err


def test_analyze_module_mixed():
    import tempfile

    doc = {
        "kind": "module",
        "domain": "Z",
        "summands": ["Q", "Q", {"torsion": 4}],
        "basis": ["a", "b", "c"],
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(doc, f)
        path = f.name
    code, out, _ = run_cli("analyze", path)
    assert code == 0
    assert "divisible_part: Q + Q" in out
    assert "bounded_part: Z/4" in out


def test_malcev_mul():
    code, out, _ = run_cli("malcev", "mul", fixture_path("h3"), "(1,0,0)", "(0,1,0)")
    assert code == 0
    assert "result: (1, 1, 1/2)" in out


def test_malcev_pow():
    code, out, _ = run_cli("malcev", "pow", fixture_path("h3"), "(1,0,0)", "1/2")
    assert code == 0
    assert "result: (1/2, 0, 0)" in out


def test_malcev_comm():
    code, out, _ = run_cli("malcev", "comm", fixture_path("h3"), "(1,0,0)", "(0,1,0)")
    assert code == 0
    assert "result: (0, 0, 1)" in out


def test_malcev_decompose():
    code, out, _ = run_cli("malcev", "decompose", fixture_path("h3-plus-abelian"))
    assert code == 0
    assert "abelian_factor_dim: 1" in out
    assert "cross_commutators_trivial: True" in out


def test_parse_error_exit_code():
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        f.write("{not json")
        path = f.name
    code, _, err = run_cli("analyze", path)
    assert code == 1
    assert "line" in err


def test_validation_error_exit_code():
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        f.write('{"kind": "bogus", "domain": "Q", "basis": ["x"], "table": [[["0"]]]}')
        path = f.name
    code, _, err = run_cli("analyze", path)
    assert code == 1
    assert "kind" in err


def test_determinism_analyze_byte_identical():
    for name in FIXTURE_NAMES:
        _, out1, _ = run_cli("analyze", fixture_path(name), "--format", "json")
        _, out2, _ = run_cli("analyze", fixture_path(name), "--format", "json")
        assert out1 == out2


def test_selftest_quick_passes_and_is_deterministic():
    code1, out1, _ = run_cli("selftest", "quick")
    code2, out2, _ = run_cli("selftest", "quick")
    assert code1 == code2 == 0
    assert out1 == out2
    assert "status: pass" in out1


def test_extension_flag():
    code, out, _ = run_cli(
        "analyze", fixture_path("h3"), "--extension=-2,0,1", "--format", "json"
    )
    assert code == 0
    tree = json.loads(out)
    assert tree["carrier"].startswith("Q[t]/(")


def test_witnesses_flag():
    code, out, _ = run_cli(
        "analyze", fixture_path("h3-plus-abelian"), "--witnesses", "--format", "json"
    )
    assert code == 0
    tree = json.loads(out)
    assert "factor_rows" in tree


def test_round_trip_all_fixtures():
    from ringlab.documents import load_document, serialize_document

    for name in FIXTURE_NAMES:
        doc = load_document(fixture_text(name))
        text = serialize_document(doc)
        doc2 = load_document(text)
        assert serialize_document(doc2) == text
