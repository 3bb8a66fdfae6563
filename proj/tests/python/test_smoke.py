import json
import math

import pytest

import fblbench as fb


def test_space_norms():
    s = fb.Space("l2:2")
    assert s.dim == 2
    assert s.norm([3, 4]) == 5
    assert fb.Space("l1:3").dual_norm([1, -2, 0.5]) == 2
    assert str(fb.Space("linf:3")) == "linf:3"


def test_expression_round_trip_and_eval():
    f = fb.Expr("|d(1,0)| v |d(0,1)|")
    assert f.dim == 2
    assert f(fb.Space("l1:2"), [0.5, -2]) == 2
    assert str(fb.Expr(str(f))) == str(f)


def test_parse_error_offset():
    with pytest.raises(fb.ParseError):
        fb.Expr("d(1,")
    with pytest.raises(ValueError):
        fb.Space("l7")


def test_norm_bounds():
    s = fb.Space("l1:2")
    f = fb.Expr("|d(1,0)| v |d(0,1)|")
    est = fb.norm_lower_bound(f, s, k=2, restarts=200, seed=0)
    assert est["lower_bound"] >= 1.999
    assert len(est["witness"]) == 2
    up = fb.norm_upper_bound(f, s, [1, 2])
    assert up["upper_bound"] == 2 and up["certified"]


def test_tuple_constraint():
    assert fb.tuple_constraint(fb.Space("l2:2"), [[1, 0], [0, 1]]) == pytest.approx(math.sqrt(2))


def test_lifting():
    s = fb.Space("l2:4")
    x = [1.0, -0.5, 0.0, 2.0]
    assert fb.beta(fb.lift(s, x), s) == pytest.approx(x, abs=1e-12)
    assert str(fb.lift(s, [0, 1, 0, 0])) == "f(2)"
    with pytest.raises(fb.ConfigError):
        fb.LiftParams("harmonic")


def test_checks():
    s = fb.Space("linf:5")
    assert fb.check_biorthogonal(s)["passed"]
    assert fb.check_disjoint(s, samples=500)["passed"]
    assert fb.check_normspan(s, [1, 0, -2, 0.5, 0], restarts=5)["passed"]
    assert fb.check_freenorm(fb.Space("l2:6"), 1, 1, restarts=10)["passed"]
    report = fb.check_lemma44(instances=200, seed=1)
    assert report["passed"] and report["instances"] == 200


def test_cli_entry():
    code, out, _ = fb.run_cli(["lemma44", "--instances", "0"])
    assert code == 0
    assert json.loads(out)["instances"] == 0
    code, _, _ = fb.run_cli(["lemma44", "--l", "30"])
    assert code == 3
