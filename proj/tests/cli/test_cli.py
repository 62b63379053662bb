import json
import os
import shlex
import subprocess

import pytest

QLIFT = os.environ.get("QLIFT_BIN", "qlift")


def run(*args, env=None):
    p = subprocess.run([QLIFT, *args], capture_output=True, text=True, env=env, timeout=600)
    return p.returncode, p.stdout, p.stderr


@pytest.fixture()
def cache_env(tmp_path):
    env = dict(os.environ)
    env["QLIFT_CACHE_DIR"] = str(tmp_path / "cache")
    return env


def test_pqlp_example():
    rc, out, err = run("pqlp", "--p", "103", "--N", "11", "--sigma", "2,1,1,0", "--seed", "7")
    assert rc == 0, out + err
    j = json.loads(out)
    assert j["seed"] == "7"
    assert "seed=7" in err
    assert set(j) >= {"sigma", "lambda", "norm"}
    assert all(isinstance(v, str) for v in j["sigma"]["num"])


def test_iserp_demo_example():
    rc, out, _ = run("iserp-demo", "--p", "103", "--N", "15", "--seed", "1")
    assert rc == 0
    j = json.loads(out)
    assert j["verdicts"] and all(j["verdicts"].values())


@pytest.mark.parametrize(
    "args",
    [
        ["pqlp", "--p", "103", "--N", "14", "--sigma", "2,1,1,0"],
        ["pqlp", "--p", "100", "--N", "11", "--sigma", "2,1,1,0"],
        ["pqlp", "--p", "103", "--N", "103", "--sigma", "2,1,1,0"],
        ["pqlp", "--p", "103", "--N", "11", "--sigma", "2,1"],
        ["pqlp", "--p", "103", "--N", "11"],
        ["iserp-demo", "--p", "103", "--N", "16"],
        ["borel-solve", "--N", "12", "--planted", "2,2"],
        ["lift-precomp", "--p", "103", "--N", "11", "--B", "1048576", "--matrix", "1,1,1,1"],
        ["no-such-command"],
    ],
)
def test_validation_exit_2(args, cache_env):
    rc, out, _ = run(*args, env=cache_env)
    assert rc == 2
    j = json.loads(out)
    assert set(j) == {"error", "detail"}


@pytest.mark.parametrize(
    "args",
    [
        ["pqlp", "--p", "1019", "--N", "105", "--sigma", "1,2,3,5", "--seed", "5", "--trace"],
        ["decompose", "--p", "103", "--N", "11", "--sigma", "2,1,1,0", "--seed", "2"],
        ["repint", "--p", "103", "--N", "11", "--alpha", "1,2,3,1", "--seed", "3"],
        ["strongapprox", "--p", "103", "--N", "11", "--mu", "1,2", "--seed", "3"],
        ["explicit-iso", "--N", "35", "--scramble", "--seed", "4"],
        ["borel-solve", "--N", "360", "--planted", "7,3", "--seed", "2"],
        ["iserp-demo", "--p", "1019", "--N", "45", "--seed", "3", "--mode", "order-invariant"],
        ["params", "--p", "1019"],
    ],
)
def test_deterministic(args):
    a = run(*args)
    b = run(*args)
    assert a[0] == 0, a[1] + a[2]
    assert a[1] == b[1]


def test_precompute_cache(cache_env):
    base = ["--p", "103", "--N", "15", "--B", "1048576", "--seed", "9"]
    rc, out, err = run("precompute", *base, env=cache_env)
    assert rc == 0 and "wrote" in err
    files = os.listdir(cache_env["QLIFT_CACHE_DIR"])
    assert files == ["precomp-v1-p103-N15-B1048576-s9.json"]
    rc, out1, err = run("lift-precomp", *base, "--matrix", "2,1,7,4", env=cache_env)
    assert rc == 0 and "loaded" in err
    j = json.loads(out1)
    assert j["factors_used"] <= 4 * 4 + 1
    rc, out2, _ = run("lift-precomp", *base, "--matrix", "2,1,7,4", env=cache_env)
    assert out1 == out2


def test_borel_subprocess_oracle():
    serve = f"{shlex.quote(QLIFT)} oracle-serve --N 105 --planted 4,1"
    rc, out, err = run("borel-solve", "--N", "105", "--oracle-cmd", serve, "--seed", "6")
    assert rc == 0, out + err
    # <(4, 1)> = <(1, 4^-1 mod 105)>
    assert json.loads(out)["submodule"]["generator"] == ["1", str(pow(4, -1, 105))]


def test_selftest_subset():
    rc, out, err = run("selftest", "--criterion", "6", "--criterion", "7")
    assert rc == 0, err
    j = json.loads(out)
    assert [c["criterion"] for c in j["criteria"]] == ["6", "7"]
    assert all(c["pass"] for c in j["criteria"])
