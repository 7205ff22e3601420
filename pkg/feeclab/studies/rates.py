"""Least-squares convergence rates, rate tables and pass/fail verdicts."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar, Optional, Union

import numpy as np

from feeclab.core.exceptions import ValidationError

EXACT_TOL = 1e-12
MIN_FIT_POINTS = 3


def fit_rate(h: np.ndarray, errors: np.ndarray, finest: Optional[int] = None) -> float:
    """OLS slope of log(error) against log(h) over the finest rows.

    Args:
    ----
        h: Mesh sizes, coarse to fine
        errors: Errors per row
        finest: Rows to fit, default max(3, rows − 1)

    Returns:
    -------
        The fitted rate; inf when every error is below EXACT_TOL, nan when fewer than two
        positive errors remain

    """
    h = np.asarray(h, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(h) != len(errors):
        raise ValidationError("errors", "need one error per mesh size", len(errors))
    count = finest if finest is not None else max(MIN_FIT_POINTS, len(h) - 1)
    h, errors = h[-count:], errors[-count:]
    if errors.size and np.all(np.abs(errors) <= EXACT_TOL):
        return math.inf
    keep = errors > 0
    if keep.sum() < 2:  # noqa: PLR2004
        return math.nan
    slope, _ = np.polyfit(np.log(h[keep]), np.log(errors[keep]), 1)
    return float(slope)


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_number(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


@dataclass(frozen=True)
class RateTable:
    """Rows of a refinement study and the fitted rates of its error columns.

    Columns listed in ``untracked`` (counts, multiplicities) are reported but not fitted.
    """

    rows: tuple[tuple[Any, ...], ...]
    columns: tuple[str, ...] = (
        "level",
        "h",
        "l2_u",
        "graph_u",
        "l2_sigma",
        "graph_sigma",
        "l2_p",
        "jacobian_deviation",
        "data_error",
    )
    untracked: tuple[str, ...] = ()
    KEY_COLUMNS: ClassVar[tuple[str, ...]] = ("level", "h")

    def __post_init__(self) -> None:
        """Validate row widths and the mesh-size ordering."""
        rows = tuple(tuple(row) for row in self.rows)
        if any(len(row) != len(self.columns) for row in rows):
            raise ValidationError("rows", f"every row needs {len(self.columns)} entries")
        if not set(self.untracked) <= set(self.columns):
            raise ValidationError("untracked", "must name existing columns", self.untracked)
        h = [float(row[1]) for row in rows]
        if any(b >= a for a, b in zip(h, h[1:])):
            raise ValidationError("rows", "h must decrease strictly along the rows", h)
        object.__setattr__(self, "rows", rows)

    def column(self, name: str) -> np.ndarray:
        """Values of one column."""
        try:
            index = self.columns.index(name)
        except ValueError:
            raise ValidationError("column", "unknown column", name) from None
        return np.array([row[index] for row in self.rows], dtype=float)

    @property
    def error_columns(self) -> tuple[str, ...]:
        """Columns with fitted rates."""
        skip = (*self.KEY_COLUMNS, *self.untracked)
        return tuple(c for c in self.columns if c not in skip)

    @property
    def fitted_rates(self) -> dict[str, float]:
        """Rate of every error column."""
        h = self.column("h")
        return {name: fit_rate(h, self.column(name)) for name in self.error_columns}

    def to_csv(self) -> str:
        """CSV text with a header row; floats carry 12 significant digits."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows([_cell(value) for value in row] for row in self.rows)
        return buffer.getvalue()

    def to_dict(self) -> dict[str, Any]:
        """Convert table to dictionary.

        Returns
        -------
            Columns, rows and fitted rates (non-finite rates become null)

        """
        return {
            "columns": list(self.columns),
            "rows": [[float(v) if isinstance(v, float) else v for v in row] for row in self.rows],
            "fitted_rates": {k: _json_number(v) for k, v in self.fitted_rates.items()},
        }

    def write(self, path: Union[str, Path], fmt: str = "csv") -> None:
        """Write the table as CSV or JSON."""
        text = self.to_csv() if fmt == "csv" else json.dumps(self.to_dict(), indent=2) + "\n"
        Path(path).write_text(text, encoding="utf-8")


@dataclass(frozen=True)
class RateTarget:
    """Expected rate of a column.

    ``approx`` asks for |rate − value| <= tol, ``min`` for rate >= value − tol.
    """

    column: str
    value: float
    tol: float = 0.2
    kind: str = "approx"
    KINDS: ClassVar[tuple[str, ...]] = ("approx", "min")

    def __post_init__(self) -> None:
        """Validate the comparison kind."""
        if self.kind not in self.KINDS:
            raise ValidationError("kind", f"must be one of {self.KINDS}", self.kind)

    def met(self, rate: float) -> bool:
        """Whether a fitted rate meets the target."""
        if math.isnan(rate):
            return False
        if self.kind == "min":
            return rate >= self.value - self.tol
        return abs(rate - self.value) <= self.tol

    def to_dict(self) -> dict[str, Any]:
        """Convert target to dictionary.

        Returns
        -------
            Dictionary representation of the target

        """
        return {"column": self.column, "value": self.value, "tol": self.tol, "kind": self.kind}


@dataclass(frozen=True)
class LimitCheck:
    """A finest-level quantity compared with a fixed limit.

    ``max`` asks for value <= limit, ``equal`` for value == limit.
    """

    name: str
    value: float
    limit: float
    kind: str = "max"
    KINDS: ClassVar[tuple[str, ...]] = ("max", "equal")

    def __post_init__(self) -> None:
        """Validate the comparison kind."""
        if self.kind not in self.KINDS:
            raise ValidationError("kind", f"must be one of {self.KINDS}", self.kind)

    @property
    def passed(self) -> bool:
        """Whether the value respects the limit."""
        if math.isnan(self.value):
            return False
        if self.kind == "equal":
            return self.value == self.limit
        return self.value <= self.limit

    def to_dict(self) -> dict[str, Any]:
        """Convert check to dictionary.

        Returns
        -------
            Name, value, limit, kind and outcome

        """
        return {
            "name": self.name,
            "value": _json_number(self.value),
            "limit": self.limit,
            "kind": self.kind,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class Verdict:
    """Fitted rates checked against their targets, plus optional limit checks."""

    targets: tuple[RateTarget, ...]
    fitted: tuple[float, ...] = field(default_factory=tuple)
    checks: tuple[LimitCheck, ...] = field(default_factory=tuple)

    @classmethod
    def check(
        cls,
        table: RateTable,
        targets: list[RateTarget],
        checks: Optional[list[LimitCheck]] = None,
    ) -> "Verdict":
        """Fit every targeted column of a table."""
        rates = table.fitted_rates
        return cls(
            targets=tuple(targets),
            fitted=tuple(rates[t.column] for t in targets),
            checks=tuple(checks or ()),
        )

    @property
    def passed(self) -> bool:
        """Whether every target is met and every check holds."""
        rates_met = all(t.met(rate) for t, rate in zip(self.targets, self.fitted))
        return rates_met and all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        """Convert verdict to its JSON document.

        Returns
        -------
            {"targets": [...], "fitted": [...], "checks": [...], "pass": bool}

        """
        return {
            "targets": [t.to_dict() for t in self.targets],
            "fitted": [_json_number(rate) for rate in self.fitted],
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }

    def write(self, path: Union[str, Path]) -> None:
        """Write the verdict JSON."""
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
