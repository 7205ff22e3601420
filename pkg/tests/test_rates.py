import json
import math

import numpy as np
import pytest

from feeclab.core import ValidationError
from feeclab.studies import LimitCheck, RateTable, RateTarget, Verdict, fit_rate

H = (0.4, 0.2, 0.1, 0.05)


def _table(l2_u=None):
    l2_u = l2_u if l2_u is not None else [3 * h**2 for h in H]
    rows = [
        (level, h, e, 2 * h, 0.0, 0.0, 0.0, h**2, 1 / 3)
        for level, (h, e) in enumerate(zip(H, l2_u))
    ]
    return RateTable(rows=tuple(rows))


def test_fit_rate_recovers_exact_slope():
    h = np.array(H)
    assert fit_rate(h, 5 * h**3) == pytest.approx(3.0)
    assert fit_rate(h, 5 * h**3, finest=2) == pytest.approx(3.0)


def test_fit_rate_uses_finest_rows_only():
    h = np.array(H)
    errors = h**2
    errors[0] = 1.0
    assert fit_rate(h, errors) == pytest.approx(2.0)


def test_fit_rate_special_values():
    h = np.array(H)
    assert fit_rate(h, np.zeros(4)) == math.inf
    assert math.isnan(fit_rate(h, np.array([1.0, 0.0, 0.0, 1.0])))
    with pytest.raises(ValidationError):
        fit_rate(h, np.ones(3))


def test_rate_table_fitted_rates():
    rates = _table().fitted_rates
    assert rates["l2_u"] == pytest.approx(2.0)
    assert rates["graph_u"] == pytest.approx(1.0)
    assert rates["l2_sigma"] == math.inf
    assert rates["data_error"] == pytest.approx(0.0, abs=1e-12)
    assert set(rates) == set(_table().error_columns)


def test_rate_table_csv():
    lines = _table().to_csv().splitlines()
    assert lines[0].split(",") == list(RateTable(rows=()).columns)
    assert lines[0].endswith("jacobian_deviation,data_error")
    assert lines[1].split(",")[0] == "0"
    assert lines[1].split(",")[-1] == "0.333333333333"
    assert len(lines) == 1 + len(H)


def test_rate_table_json_replaces_infinite_rates(tmp_path):
    path = tmp_path / "table.json"
    _table().write(path, "json")
    document = json.loads(path.read_text())
    assert document["fitted_rates"]["l2_sigma"] is None
    assert document["rows"][0][1] == H[0]


def test_rate_table_validation():
    with pytest.raises(ValidationError, match="decrease"):
        RateTable(rows=((0, 0.1, 1.0), (1, 0.2, 0.5)), columns=("level", "h", "e"))
    with pytest.raises(ValidationError, match="entries"):
        RateTable(rows=((0, 0.1),), columns=("level", "h", "e"))
    with pytest.raises(ValidationError):
        _table().column("l3_u")


def test_rate_target():
    assert RateTarget("l2_u", 2.0).met(2.1)
    assert not RateTarget("l2_u", 2.0, tol=0.05).met(2.1)
    assert RateTarget("l2_u", 2.0, kind="min").met(3.5)
    assert not RateTarget("l2_u", 2.0, kind="min").met(1.7)
    assert not RateTarget("l2_u", 2.0).met(math.nan)
    assert RateTarget("l2_u", 2.0, kind="min").met(math.inf)
    with pytest.raises(ValidationError):
        RateTarget("l2_u", 2.0, kind="max")


def test_verdict_document(tmp_path):
    targets = [RateTarget("l2_u", 2.0), RateTarget("graph_u", 2.0, kind="min")]
    verdict = Verdict.check(_table(), targets)
    assert not verdict.passed
    path = tmp_path / "verdict.json"
    verdict.write(path)
    document = json.loads(path.read_text())
    assert document["pass"] is False
    assert document["fitted"] == pytest.approx([2.0, 1.0])
    assert document["targets"][1] == {"column": "graph_u", "value": 2.0, "tol": 0.2, "kind": "min"}
    assert Verdict.check(_table(), targets[:1]).passed


def test_untracked_columns_are_not_fitted():
    rows = tuple((level, h, 3 * h**2, 3) for level, h in enumerate(H))
    table = RateTable(rows=rows, columns=("level", "h", "e", "m"), untracked=("m",))
    assert set(table.fitted_rates) == {"e"}
    assert table.column("m")[-1] == 3
    with pytest.raises(ValidationError, match="existing"):
        RateTable(rows=rows, columns=("level", "h", "e", "m"), untracked=("n",))


def test_limit_check():
    assert LimitCheck("gap", 0.04, 0.05).passed
    assert not LimitCheck("gap", 0.06, 0.05).passed
    assert not LimitCheck("gap", math.nan, 0.05).passed
    assert LimitCheck("multiplicity_1", 3.0, 3.0, "equal").passed
    assert not LimitCheck("multiplicity_1", 2.0, 3.0, "equal").passed
    with pytest.raises(ValidationError):
        LimitCheck("gap", 0.0, 1.0, "min")


def test_failed_limit_check_fails_verdict():
    targets = [RateTarget("l2_u", 2.0)]
    checks = [LimitCheck("gap", 0.01, 0.05), LimitCheck("multiplicity_1", 2.0, 3.0, "equal")]
    verdict = Verdict.check(_table(), targets, checks)
    assert not verdict.passed
    document = verdict.to_dict()
    assert [c["pass"] for c in document["checks"]] == [True, False]
    assert document["checks"][1] == {
        "name": "multiplicity_1", "value": 2.0, "limit": 3.0, "kind": "equal", "pass": False
    }
    assert Verdict.check(_table(), targets, checks[:1]).passed
