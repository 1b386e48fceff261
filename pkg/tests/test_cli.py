import io
import json
import subprocess
import sys

import pytest

from hlvkit.cli import EXIT_DOMAIN, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


GOLDEN = [
    (["macdonald", "--lambda", "2"], "m[2] + (q+1)*m[1,1]\n"),
    (["macdonald", "--lambda", "1,1"], "m[2] + (t+1)*m[1,1]\n"),
    (["macdonald", "--lambda", "1,1", "--t0"], "m[2] + m[1,1]\n"),
    (["hall-littlewood", "--lambda", "2"], "m[2] + (q+1)*m[1,1]\n"),
    (["poincare", "--genus", "0", "--rank", "2", "--mults", "1,1;1,1;1,1"], "1\n"),
    (["poincare", "--genus", "1", "--rank", "1", "--mults", "1"], "s^2 - 2*s + 1\n"),
    (["poincare", "--genus", "0", "--rank", "2", "--mults", "1,1;1,1;1,1;1,1"], "5*s^2 + 1\n"),
    (["springer", "--lambda", "1,1", "--mu", "1,1", "--tmax", "2"], "t^0: 1\nt^1: 1 + q^-1\nt^2: q^-1 + q^-2\n"),
    (["classify", "0,x;0,0 @p=2,m=4"],
     "lambda = 1,1\nd = 1\nnondegenerate = false\npole_order = 0\nprecision = 4\n"),
]


@pytest.mark.parametrize("argv,want", GOLDEN, ids=[" ".join(a[:1]) + str(i) for i, (a, _) in enumerate(GOLDEN)])
def test_golden(argv, want):
    code, out, err = call(*argv)
    assert (code, out, err) == (EXIT_OK, want, "")


def test_kernel_text_and_json():
    code, out, _ = call("kernel", "--genus", "0", "--punctures", "1", "--tmax", "1")
    assert code == EXIT_OK and "m[1](X1)" in out
    code, out, _ = call("hlog", "--genus", "0", "--punctures", "2", "--Tmax", "2", "--json")
    data = json.loads(out)
    assert code == EXIT_OK and data["genus"] == 0 and len(data["result"]) == 1


def test_json_outputs_parse():
    for argv in (["macdonald", "--lambda", "2,1", "--json"],
                 ["poincare", "--genus", "0", "--rank", "2", "--mults", "1,1;1,1;1,1", "--json"],
                 ["springer", "--lambda", "2", "--mu", "1,1", "--json"],
                 ["classify", "0,1;0,0 @p=3,m=4", "--json"]):
        code, out, _ = call(*argv)
        assert code == EXIT_OK
        json.loads(out)
    _, out, _ = call("poincare", "--genus", "0", "--rank", "2", "--mults", "1,1;1,1;1,1", "--json")
    assert json.loads(out)["dim"] == 0


def test_repeat_runs_are_byte_identical():
    for argv in (["macdonald", "--lambda", "3,1"], ["kernel", "--genus", "1", "--punctures", "1", "--tmax", "2"],
                 ["verify", "--suite", "mass", "--p", "2", "--max", "3"]):
        assert call(*argv) == call(*argv)


def test_verify_ok():
    code, out, _ = call("verify", "--suite", "flags", "--p", "2", "--max", "3")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"] and rep["checks"] > 0 and rep["failures"] == []


def test_verify_mismatch_exit_code(monkeypatch):
    import hlvkit.suites as suites

    def broken(p, nmax):
        rep = suites.SuiteReport("flags", p, nmax)
        rep.record(False, case="forced")
        return rep

    monkeypatch.setitem(suites.SUITES, "flags", broken)
    code, out, _ = call("verify", "--suite", "flags")
    assert code == EXIT_MISMATCH and json.loads(out)["ok"] is False


@pytest.mark.parametrize("argv", [
    ["macdonald", "--lambda", "2,3"],
    ["macdonald", "--lambda", "a"],
    ["poincare", "--genus", "0", "--rank", "2", "--mults", "1,1"],
    ["poincare", "--genus", "0", "--rank", "2", "--mults", "1"],
    ["springer", "--lambda", "2", "--mu", "1"],
    ["classify", "0,1;1,0 @p=2,m=4"],
    ["classify", "0,x;0,0"],
    ["verify", "--suite", "flags", "--p", "7"],
])
def test_domain_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_DOMAIN and out == "" and err.startswith("hlvkit ")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["macdonald"],
    ["kernel", "--genus", "-1", "--punctures", "0", "--tmax", "1"],
    ["verify", "--suite", "nope"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_USAGE and out == "" and "usage:" in err


def test_help_exits_zero():
    assert call("--help")[0] == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hlvkit", "macdonald", "--lambda", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "m[2] + (q+1)*m[1,1]\n"
    proc = subprocess.run([sys.executable, "-m", "hlvkit", "bogus"], capture_output=True, text=True, check=False)
    assert proc.returncode == 64
