import json
from pathlib import Path

from multirole.cli import main

CORPUS = Path(__file__).parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_golden_exit_zero(capsys):
    code, out, _ = run(capsys, "check", str(CORPUS / "golden_mrl2.sexp"))
    assert code == 0
    assert "accepted" in out


def test_check_mutants_exit_one(capsys):
    code, out, _ = run(capsys, "check", str(CORPUS / "mutants_mrl2.sexp"))
    assert code == 1
    assert "rejected" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--json", str(CORPUS / "golden_mrl3.sexp"))
    assert code == 0
    payload = json.loads(out)
    assert all(entry["status"] == "accepted" for entry in payload["derivations"])


def test_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.sexp"
    bad.write_text("(session 2 mrl)(ifm [0,7] (atom a))")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "universe" in err


def test_usage_error_exit_two(capsys):
    assert main(["eliminate", "--op", "bogus", "x"]) == 2


def test_eliminate_one_cut(tmp_path, capsys):
    src = tmp_path / "s.sexp"
    src.write_text(
        "(session 2 mrl)\n"
        "(def d (d (seq (ifm [] (atom a)) (ifm [0,1] (atom a))) (rule id (at 0 1))))\n"
    )
    out_path = tmp_path / "out.sexp"
    code, out, _ = run(capsys, "eliminate", "--op", "one_cut", "--at", "0",
                       "-o", str(out_path), str(src))
    assert code == 0
    code, _, _ = run(capsys, "check", str(out_path))
    assert code == 0


def test_eliminate_mp_cut_three_party(tmp_path, capsys):
    src = tmp_path / "mp3.sexp"
    src.write_text(
        "(session 3 mrl)\n"
        "(def d1 (d (seq (ifm [0] (atom a)) (ifm [1,2] (atom a))) (rule id (at 0 1))))\n"
        "(def d2 (d (seq (ifm [1] (atom a)) (ifm [0,2] (atom a))) (rule id (at 0 1))))\n"
        "(def d3 (d (seq (ifm [2] (atom a)) (ifm [0,1] (atom a))) (rule id (at 0 1))))\n"
    )
    out_path = tmp_path / "out.sexp"
    code, out, _ = run(capsys, "eliminate", "--op", "mp_cut", "--at", "1,1,1",
                       "-o", str(out_path), str(src))
    assert code == 0
    code, _, _ = run(capsys, "check", str(out_path))
    assert code == 0


def test_eliminate_trace(tmp_path, capsys):
    src = tmp_path / "s.sexp"
    src.write_text(
        "(session 2 mrl)\n"
        "(def d (d (seq (ifm [0,1] (atom a))) (rule id (at 0))))\n"
    )
    code, _, err = run(capsys, "eliminate", "--op", "role_split", "--at", "0",
                       "--part1", "[0]", "--part2", "[1]", "--trace", str(src))
    assert code == 0
    assert "role_split" in err


def test_search_found_and_not_found(tmp_path, capsys):
    src = tmp_path / "s.sexp"
    src.write_text(
        "(session 2 mrl)\n"
        "(def g1 (seq (ifm [0] (atom a)) (ifm [1] (atom a))))\n"
        "(def g2 (seq (ifm [0] (atom a))))\n"
    )
    code, out, _ = run(capsys, "search", "--goal", "g1", "--depth", "4", str(src))
    assert code == 0
    assert "(rule id" in out
    code, out, _ = run(capsys, "search", "--goal", "g2", "--depth", "6", str(src))
    assert code == 1


def test_search_json(tmp_path, capsys):
    src = tmp_path / "s.sexp"
    src.write_text("(session 2 mrl)(def g (seq (ifm [0,1] (atom a))))")
    code, out, _ = run(capsys, "search", "--goal", "g", "--depth", "3", "--json", str(src))
    assert code == 0
    assert json.loads(out)["found"] is True


def test_fmt_idempotent(tmp_path, capsys):
    code, out1, _ = run(capsys, "fmt", str(CORPUS / "golden_lmrl2.sexp"))
    assert code == 0
    f = tmp_path / "once.sexp"
    f.write_text(out1)
    code, out2, _ = run(capsys, "fmt", str(f))
    assert code == 0
    assert out1 == out2


def test_selftest_small(capsys):
    code, out, _ = run(
        capsys, "selftest", "--universe", "2", "--measure", "0",
        "--rules", "one_cut,mp_cut_2", "--mode", "mrl",
    )
    assert code == 0
    assert "all suites passed" in out


def test_selftest_json(capsys):
    code, out, _ = run(
        capsys, "selftest", "--universe", "2", "--measure", "0",
        "--rules", "one_cut", "--mode", "lmrl", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["failures"] == 0
    assert payload["reports"]
