import math

import pytest

import lcoguard


def test_tuning_closed_form():
    t = lcoguard.optimal_tuning(0.05)
    assert t["gamma_opt"] == pytest.approx(1 / math.sqrt(1.05), abs=1e-12)
    assert t["mu1_max"] == pytest.approx(math.sqrt(0.05) / 2, abs=1e-12)
    assert lcoguard.critical_mu1(0.05, t["mu2_opt"], t["gamma_opt"]) == pytest.approx(t["mu1_max"], abs=1e-7)


def test_system_defaults_and_validation():
    s = lcoguard.System(0.05, alpha3=0.3)
    assert s.gamma == pytest.approx(1 / math.sqrt(1.05))
    assert lcoguard.is_stable(s)
    with pytest.raises(ValueError):
        lcoguard.System(-1.0)
    jac = s.jacobian([0.1, 0.0, 0.0, 0.0])
    assert jac.shape == (4, 4)


def test_criticality_signs():
    assert lcoguard.delta(0.05, 0.12, 0.97, 0.3, 0.0)["criticality"] == "subcritical"
    assert lcoguard.delta(0.05, 0.12, 0.97, 0.3, 0.0136)["criticality"] == "supercritical"


def test_probability_golden():
    assert lcoguard.supercritical_probability(0.05, 0.5, "ltva", 100000, 1) == pytest.approx(0.51003, abs=1e-12)


def test_branch_folds():
    s = lcoguard.System(0.05, mu2=0.12, gamma=0.985, alpha3=0.3)
    b = lcoguard.branch(s)
    folds = [e for e in b["events"] if e["kind"] == "fold"]
    assert len(folds) >= 2
    assert len(b["mu1"]) == len(b["amplitude"])


def test_cli_exit_codes():
    code, out, _ = lcoguard.run_cli(["tune", "--eps", "0.05"])
    assert code == 0 and "gamma_opt" in out
    code, _, err = lcoguard.run_cli(["tune", "--eps", "-1"])
    assert code == 2 and "eps" in err
