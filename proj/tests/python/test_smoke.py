import json
import math

import pytest

import mee


MODEL = json.dumps(
    {
        "d": 2,
        "margins": {"family": "lomax", "gamma": 0.5, "scale": 1.0},
        "copula": {"kind": "comonotone"},
        "covariate": {"kind": "constant", "grid_size": 4, "value": 0.0},
    }
)


def test_simulate_shapes_and_determinism():
    x, y = mee.simulate(MODEL, 200, seed=5)
    x2, y2 = mee.simulate(MODEL, 200, seed=5)
    assert len(x) == len(y) == 200
    assert len(x[0]) == 2 and len(y[0]) == 4
    assert x == x2 and y == y2
    x3, _ = mee.simulate(MODEL, 200, seed=6)
    assert x3 != x


def test_comonotone_margins_are_coupled():
    x, _ = mee.simulate(MODEL, 500, seed=1)
    for row in x:
        assert row[1] == pytest.approx(row[0], rel=1e-12)


INDEP_MODEL = json.dumps(
    {
        "d": 2,
        "margins": {"family": "lomax", "gamma": 0.5, "scale": 1.0},
        "copula": {"kind": "independence"},
        "covariate": {"kind": "constant", "grid_size": 4, "value": 0.0},
    }
)


def test_estimate_recovers_independence_root():
    # The independence system is well conditioned at its root, so the solver
    # should drive the residual to solver level and the fitted eta should obey
    # eta = gamma / (d (1 - gamma)) at the estimated gamma.
    x, y = mee.simulate(INDEP_MODEL, 8000, seed=11)
    res = mee.estimate(x, y, [0.0] * 4, alpha=0.99, kn=140)
    assert res["converged"]
    g = res["gamma"]
    assert g == pytest.approx(0.5, abs=0.2)
    assert res["theta"]["eta"] == pytest.approx(g / (2.0 * (1.0 - g)), abs=0.1)
    assert res["theta"]["beta"][0] == pytest.approx(1.0, abs=0.15)
    assert res["loss"] < 1e-10
    assert len(res["expectile"]) == 2
    assert all(v > 0 for v in res["expectile"])


def test_direct_expectile_known_values():
    assert mee.direct_expectile([[0.0], [2.0]], 0.75)[0] == pytest.approx(1.5, abs=1e-8)
    got = mee.direct_expectile([[1.0, 3.0], [1.0, 3.0]], 0.6)
    assert got == pytest.approx([1.0, 3.0], abs=1e-8)


def test_lambda_oracle():
    assert mee.lambda_oracle("survival_clayton", 1.0, 1.0, 3.0) == pytest.approx(0.75)
    assert mee.lambda_oracle("comonotone", 0.0, 1.0, 3.0) == pytest.approx(1.0)
    assert mee.lambda_oracle("independence", 0.0, 1.0, 3.0) == 0.0


def test_theta_star():
    star = mee.theta_star("independence", 2, 0.5)
    assert star["eta"] == pytest.approx(0.5)
    assert star["beta"] == [1.0]
    assert mee.theta_star("survival_clayton", 2, 0.5) is None


def test_rate_plan_frozen_values():
    r = mee.rate_plan(10000, 0.99, 0.01, 100, 0.5, 1.0)
    assert r["delta0"] == pytest.approx(1.0)
    assert r["delta_minus1"] == pytest.approx(100.0)
    assert r["delta_gamma"] == pytest.approx(5.0)
    assert r["combined"] == pytest.approx(5.0)


def test_errors_translate():
    x, y = mee.simulate(MODEL, 100, seed=2)
    with pytest.raises(mee.EstimationError):
        mee.estimate(x, y, [0.0] * 4, alpha=2.0)
    with pytest.raises(mee.EstimationError):
        mee.lambda_oracle("survival_clayton", -1.0, 1.0, 1.0)
