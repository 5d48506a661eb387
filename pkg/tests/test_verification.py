import numpy as np
import pytest

from core.errors import ValidationError
from core.verification import CHECKS, random_poles, run_checks

EXPECTED_CHECKS = {"parseval_white", "parseval_auto", "displacement", "displacement_inverse",
                   "blaschke_unit_modulus", "u_vector_rational", "u_vector_mass", "semi_parseval",
                   "toeplitz_eigen", "lower_bound_white", "convolution_theorem", "gradient"}


def test_registry():
    assert set(CHECKS) == EXPECTED_CHECKS


def test_full_suite_passes():
    report = run_checks(seed=0)
    assert report["failures"] == []
    assert report["passed"] is True
    assert [check["name"] for check in report["checks"]] == list(CHECKS)


def test_report_shape():
    report = run_checks(seed=1, names=["u_vector_mass"])
    assert list(report) == ["passed", "seed", "checks", "failures"]
    check = report["checks"][0]
    assert set(check) == {"name", "passed", "value", "tolerance", "detail"}
    assert isinstance(check["passed"], bool)
    assert isinstance(check["value"], float)


def test_perturbed_gram_fails_the_displacement_check():
    report = run_checks(seed=0, perturb_cauchy=1e-3, names=["displacement", "u_vector_mass"])
    assert report["passed"] is False
    assert report["failures"] == ["displacement"]
    assert 1e-12 < report["checks"][0]["value"] <= 1e-3


def test_same_seed_same_report():
    assert run_checks(seed=7, names=["gradient"]) == run_checks(seed=7, names=["gradient"])


def test_unknown_check():
    with pytest.raises(KeyError):
        run_checks(names=["displacement", "no_such_check"])


def test_negative_seed():
    with pytest.raises(ValidationError):
        run_checks(seed=-1)


def test_random_poles_cover_every_sector(rng):
    a = random_poles(rng, 8, 0.2, 0.8)
    assert np.all((np.abs(a) >= 0.2) & (np.abs(a) <= 0.8))
    sectors = np.floor((np.angle(a) + np.pi) / (2 * np.pi / 8)).astype(int)
    assert sorted(sectors.tolist()) == list(range(8))
