import math

import pytest

import qlift


def test_params():
    P = qlift.params(103)
    assert P["q"] == "1"
    assert P["discriminant"] == "103"


def test_pqlp_lift_verifies():
    r = qlift.pqlp_lift(103, 11, (2, 1, 1, 0), seed=7)
    assert r["verified"]
    assert math.gcd(int(r["lambda"]), 11) == 1
    n = 1
    for q, e in r["norm"]["factorization"]:
        assert int(q) ** int(e) <= int(r["norm"]["bound"])
        n *= int(q) ** int(e)
    assert n == int(r["norm"]["value"])
    assert r == qlift.pqlp_lift(103, 11, (2, 1, 1, 0), seed=7)


def test_validation_errors():
    with pytest.raises(qlift.MalformedInput):
        qlift.pqlp_lift(103, 14, (2, 1, 1, 0))
    with pytest.raises(ValueError):
        qlift.params(100)


def test_explicit_isomorphism():
    iso = qlift.explicit_isomorphism(103, 15, seed=2)
    assert iso["N"] == "15"
    assert len(iso["forward"]) == 4


def test_precomputed_lift():
    r = qlift.precomputed_lift(103, 11, (1, 2, 3, 4), seed=1)
    assert r["factors_used"] <= 4 * 4 + 1


def test_borel_planted_and_callable():
    r = qlift.borel_solve(45, planted=(2, 1), seed=3)
    assert r["same_stabilizer"]
    assert r["submodule"]["generator"] == ["1", "23"]

    # label: the line spanned by M s
    N, sx, sy = 35, 3, 1

    def oracle(m):
        (a, b), (c, d) = m
        x, y = (a * sx + b * sy) % N, (c * sx + d * sy) % N
        best = None
        for t in range(1, N):
            if math.gcd(t, N) == 1:
                v = ((t * x) % N, (t * y) % N)
                best = v if best is None or v < best else best
        return f"{best[0]},{best[1]}"

    r = qlift.borel_solve(N, oracle, seed=1)
    assert r["submodule"]["generator"] == ["1", str(pow(3, -1, 35))]


def test_iserp_attack():
    t = qlift.iserp_attack(103, 15, seed=1)
    assert all(t["verdicts"].values())
    t2 = qlift.iserp_attack(1019, 15, seed=2, mode="order-invariant")
    assert t2["verdicts"]["right_order_hnf"]
