import numpy as np
import pytest

from feeclab.core import random_complex
from feeclab.studies import perturbation_sweep, run_battery, run_trial
from feeclab.studies.battery import CHECKS, hodge_violation, poincare_violation


def test_trials_have_no_violations():
    seeds = np.random.SeedSequence(5).spawn(8)
    for trial, seed in enumerate(seeds):
        result = run_trial(seed, trial)
        assert set(result.violations) == set(CHECKS)
        assert not any(result.violations.values()), (trial, result.kind)
        if result.kind == "unitary":
            assert result.crime_terms <= 1e-12


def test_property_checks_accept_random_complexes():
    rng = np.random.default_rng(80)
    rep = random_complex(rng)
    for k in range(rep.top + 1):
        w = rng.standard_normal(rep.dim(k))
        assert not hodge_violation(rep, k, w)
        assert not poincare_violation(rep, k, w)


def test_perturbation_sweep_is_linear_in_crimes():
    sweep = perturbation_sweep(7)
    assert sweep.at_zero == 0.0
    assert sweep.slope >= 0.9
    assert all(c >= 0 for c in sweep.constants)
    assert sweep.crimes[0] > sweep.crimes[-1]


def test_battery_report():
    progress = []
    report = run_battery(3, 10, max_concurrent=2, progress_callback=lambda *a: progress.append(a))
    assert len(progress) == 10
    document = report.to_dict()
    assert document["trials"] == 10
    assert set(document["violations"]) == set(CHECKS)
    assert len(document["slopes"]) == 5
    assert document["pass"] is report.passed
    assert report.passed, document


@pytest.mark.slow
def test_full_battery():
    assert run_battery(42, 100, max_concurrent=4).passed
