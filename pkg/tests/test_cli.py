import json

import pytest

from gw3ca.cli import EXIT_FAIL, EXIT_OK, EXIT_POLE, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def test_ope_text(capsys):
    code, out, _ = run(capsys, "ope", "L", "W")
    assert code == EXIT_OK
    assert "(D + 3*l)W" in out


def test_ope_json_and_composites(capsys):
    code, rep, _ = run_json(capsys, "ope", "W", "LM")
    assert code == EXIT_OK
    assert rep["status"] == "pass" and rep["bracket"]


def test_jacobi(capsys):
    code, rep, _ = run_json(capsys, "jacobi")
    assert code == EXIT_OK and rep["zero"] == rep["total"] == 20
    code, rep, _ = run_json(capsys, "jacobi", "--preset", "gw3_nogo")
    assert code == EXIT_OK and rep["expected_nonzero"] == "confirmed"


def test_det(capsys):
    code, rep, _ = run_json(capsys, "det", "1", "--cM", "3", "--hM", "0", "--hV", "0")
    assert code == EXIT_OK and rep["vanishes"] is True
    code, rep, _ = run_json(capsys, "det", "2")
    assert code == EXIT_OK and rep["dimension"] == 14 and not rep["vanishes"]


def test_det_certificate_is_deterministic(capsys):
    _, a, _ = run_json(capsys, "det", "4", "--seed", "5", "--cM", "2", "--cL", "1", "--hL", "1", "--hW", "2", "--hM", "3")
    _, b, _ = run_json(capsys, "det", "4", "--seed", "5", "--cM", "2", "--cL", "1", "--hL", "1", "--hW", "2", "--hM", "3")
    assert a == b
    assert len(a["certificate"]["points"]) == 20
    assert a["vanishes_at_no_point"]


def test_dn(capsys):
    code, rep, _ = run_json(capsys, "dn", "2")
    assert code == EXIT_OK and rep["matches"] and rep["pairing_sign"] == -1
    code, rep, _ = run_json(capsys, "dn", "3", "--hL", "0", "--hW", "0", "--hM", "0", "--hV", "0")
    assert code == EXIT_FAIL and rep["h0_printed_matches"] is False


def test_singular(capsys):
    code, rep, _ = run_json(capsys, "singular", "1", "--cM", "3", "--hM", "0", "--hV", "0")
    assert code == EXIT_OK and rep["dimension"] == 2


def test_character(capsys):
    code, rep, _ = run_json(capsys, "character", "5", "--module", "vacuum")
    assert code == EXIT_OK and rep["counts"] == [1, 0, 2, 4, 7, 12] and "note" in rep
    code, rep, _ = run_json(capsys, "character", "4", "--module", "verma")
    assert code == EXIT_OK and rep["counts"] == [1, 4, 14, 40, 105]


def test_freefield_weights(capsys):
    code, rep, _ = run_json(capsys, "freefield", "weights", "--lam", "1/3", "--mu", "2", "--p", "1", "--q", "2")
    assert code == EXIT_OK and all(rep["match"].values())


def test_usage_errors(capsys):
    assert run(capsys, "ope", "L", "Q")[0] == EXIT_USAGE
    assert run(capsys, "jacobi", "--preset", "nope")[0] == EXIT_USAGE
    assert run(capsys, "det", "1", "--cM", "1/")[0] == EXIT_USAGE
    assert run(capsys, "freefield", "verify", "--lam", "1")[0] == EXIT_USAGE
    assert run(capsys, "bogus")[0] == EXIT_USAGE


def test_pole_exit_codes(capsys):
    code, _, err = run(capsys, "dn", "1", "--cM", "0")
    assert code == EXIT_POLE and "pole" in err
    assert run(capsys, "freefield", "weights", "--lam", "0", "--mu", "0")[0] == EXIT_POLE


def test_text_output_has_status(capsys):
    code, out, _ = run(capsys, "character", "3")
    assert code == EXIT_OK and "status: pass" in out


@pytest.mark.slow
def test_freefield_verify(capsys):
    code, rep, _ = run_json(capsys, "freefield", "verify")
    assert code == EXIT_OK and rep["summary"] == "10/10 brackets match"
