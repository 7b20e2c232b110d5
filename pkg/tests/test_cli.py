import io

import pytest

from alterfold.cli import run, selftest
from alterfold.simplicial import boundary_of_simplex, format_triangulation


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_gram_kernel():
    code, out, _ = call("gram", "--circles", "3", "--kernel", "--psd")
    assert code == 0
    assert "rank 4" in out and "kernel_dim 1" in out and "psd true" in out
    assert "kernel (" in out and "(1.41421)" in out


def test_gram_machine():
    code, out, _ = call("gram", "--circles", "3", "--kernel", "--machine")
    lines = [line.split("\t") for line in out.splitlines()]
    assert code == 0
    assert ["rank", "4"] in lines
    (kernel,) = [fields[1:] for fields in lines if fields[0] == "kernel"]
    assert kernel[0] == kernel[4] and kernel[1] == kernel[2] == kernel[3]


def test_verify_one_five():
    code, out, _ = call("verify-pachner", "--move", "1,5", "--data", "ising3")
    assert code == 0 and "2044/2044 passed" in out


def test_verify_failure_exit(tmp_path):
    from importlib import resources
    text = resources.files("alterfold").joinpath("data", "ising3.txt").read_text()
    bad = tmp_path / "bad.txt"
    bad.write_text(text.replace("A_0 A_0 A_0 A_0 A_0 1\n", "A_0 A_0 A_0 A_0 A_0 2\n"))
    code, out, _ = call("verify-pachner", "--move", "1,5", "--data", str(bad), "--max-failures", "3", "--machine")
    assert code == 1
    failures = [line for line in out.splitlines() if line.startswith("failure\t")]
    assert len(failures) == 3
    assert all(len(line.split("\t")) == 5 for line in failures)


def test_verify_sample_and_wrong_move():
    code, out, _ = call("verify-pachner", "--move", "2,4", "--sample", "5", "--seed", "2")
    assert code == 0 and "passed" in out
    assert call("verify-pachner", "--move", "2,2")[0] == 2
    code, out, _ = call("verify-pachner", "--move", "1,3", "--data", "toy1")
    assert code == 0


def test_eval(tmp_path):
    p = tmp_path / "s4.tri"
    p.write_text(format_triangulation(boundary_of_simplex(5)))
    code, out, _ = call("eval", "--triangulation", str(p))
    assert code == 0 and out.startswith("value 1/2 (0.5)\n")
    code, out, _ = call("eval", "--triangulation", str(p), "--machine", "--jobs", "2")
    assert code == 0 and out.splitlines()[0] == "value\t1/2\t0.5"


def test_eval_errors(tmp_path):
    code, _, err = call("eval", "--triangulation", str(tmp_path / "missing.tri"))
    assert code == 2 and "missing.tri" in err
    p = tmp_path / "bad.tri"
    p.write_text("dim 4\nnonsense\n")
    assert call("eval", "--triangulation", str(p))[0] == 2
    p.write_text(format_triangulation(boundary_of_simplex(3)))
    assert call("eval", "--triangulation", str(p))[0] == 2


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["gram"], ["gram", "--circles", "0"],
                                  ["gram", "--circles", "2", "--bogus"], ["mednykh", "--group", "S3"]])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and "usage" in err


def test_mednykh_cli(tmp_path):
    code, out, _ = call("mednykh", "--group", "S3", "--genus", "2")
    assert code == 0 and "mednykh pass" in out
    p = tmp_path / "g.txt"
    p.write_text("order 2\n0 1\n1 0\nidentity 0\n")
    assert call("mednykh", "--group", str(p), "--genus", "1")[0] == 2
    assert call("mednykh", "--group", str(tmp_path / "nope.txt"), "--genus", "1")[0] == 2
    assert call("mednykh", "--group", "Q8", "--genus", "6")[0] == 2


def test_validate_data(tmp_path):
    code, out, _ = call("validate-data", "--machine")
    assert code == 0 and "violations\t0" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("labels 0 pt\nlabels 1 1\ntrace pt 1\ngdim pt 0\n")
    code, out, _ = call("validate-data", "--data", str(bad))
    assert code == 1 and "zero global dimension" in out


def test_output_deterministic():
    assert call("gram", "--circles", "4", "--kernel", "--psd") == call("gram", "--circles", "4", "--kernel", "--psd")


def test_selftest_passes_and_ignores_jobs():
    lines_1, lines_4 = [], []
    r1 = selftest(sample=15, seed=1, jobs=1, emit=lambda n, ok: lines_1.append((n, ok)))
    r4 = selftest(sample=15, seed=1, jobs=4, emit=lambda n, ok: lines_4.append((n, ok)))
    assert all(r1.values()) and lines_1 == lines_4
    assert [n for n, _ in lines_1] == ["validate-data", "field", "gram", "mednykh", "pachner-spot"]


def test_selftest_corrupted_dataset(tmp_path):
    bad = tmp_path / "ising3.txt"
    bad.write_text("labels 0 pt\ngdim pt 0\n")
    code, out, _ = call("selftest", "--data", str(bad), "--sample", "1")
    assert code == 1
    assert out.splitlines()[0] == "validate-data: FAIL"
