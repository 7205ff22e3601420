"""Randomized property battery over abstract crime pairs."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar, Optional

import numpy as np

from feeclab.core.hilbert import hodge_decompose, poincare_constant
from feeclab.core.models import ComplexRep
from feeclab.crimes.audits import (
    cohomology_isomorphism_check,
    discrete_poincare_check,
    projection_data,
)
from feeclab.crimes.models import CrimePair
from feeclab.crimes.problems import crime_report
from feeclab.crimes.sampling import adversarial_pair, random_crime_pair, unitary_pair
from feeclab.studies.rates import fit_rate
from feeclab.studies.runner import LevelRunner

logger = logging.getLogger(__name__)

HODGE_TOL = 1e-10
POINCARE_RTOL = 1e-8
SWEEP_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4)
SWEEP_SEEDS = 5
MIN_SLOPE = 0.9
CHECKS = ("hodge", "poincare", "discrete_poincare", "cohomology", "projection_data")


@dataclass(frozen=True)
class TrialResult:
    """Violation counts of one random pair."""

    trial: int
    kind: str
    violations: dict[str, int]
    crime_terms: float = 0.0


@dataclass(frozen=True)
class SweepResult:
    """Perturbation term against the crime terms along an ε-sweep."""

    epsilons: tuple[float, ...]
    crimes: tuple[float, ...]
    perturbations: tuple[float, ...]
    at_zero: float

    @property
    def slope(self) -> float:
        """Log-log slope of the perturbation term against the crime terms."""
        return fit_rate(np.array(self.crimes), np.array(self.perturbations), len(self.crimes))

    @property
    def constants(self) -> tuple[float, ...]:
        """Measured perturbation constants."""
        return tuple(p / c if c > 0 else 0.0 for p, c in zip(self.perturbations, self.crimes))


@dataclass(frozen=True)
class BatteryReport:
    """Outcome of the property battery."""

    seed: int
    trials: int
    violations: dict[str, int]
    slopes: tuple[float, ...]
    constants: tuple[float, ...]
    zero_at_origin: bool
    unitary_max: float
    sweeps: tuple[SweepResult, ...] = field(default_factory=tuple)
    UNITARY_TOL: ClassVar[float] = 1e-12

    @property
    def passed(self) -> bool:
        """Zero violations, slopes >= 0.9, exact zero at ε = 0 and crime-free unitary pairs."""
        return (
            not any(self.violations.values())
            and all(slope >= MIN_SLOPE for slope in self.slopes)
            and self.zero_at_origin
            and self.unitary_max <= self.UNITARY_TOL
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert report to dictionary.

        Returns
        -------
            Dictionary representation of the report

        """
        return {
            "seed": self.seed,
            "trials": self.trials,
            "violations": dict(self.violations),
            "slopes": list(self.slopes),
            "constant_range": [min(self.constants, default=0.0), max(self.constants, default=0.0)],
            "zero_at_origin": self.zero_at_origin,
            "unitary_max": self.unitary_max,
            "pass": self.passed,
        }


def _norm(gram: np.ndarray, x: np.ndarray) -> float:
    return float(np.sqrt(max(float(x @ gram @ x), 0.0)))


def hodge_violation(rep: ComplexRep, k: int, w: np.ndarray) -> bool:
    """Whether the decomposition of w fails to partition w into G-orthogonal parts."""
    gram = np.asarray(rep.gram(k))
    split = hodge_decompose(rep, k, w)
    scale = max(_norm(gram, w) ** 2, 1.0)
    if np.abs(split.total() - w).max(initial=0.0) > HODGE_TOL * max(1.0, np.abs(w).max()):
        return True
    parts = (split.boundary, split.harmonic, split.coexact)
    return any(
        abs(float(parts[i] @ gram @ parts[j])) > HODGE_TOL * scale
        for i in range(3)
        for j in range(i + 1, 3)
    )


def poincare_violation(rep: ComplexRep, k: int, w: np.ndarray) -> bool:
    """Whether the coexact part c of w breaks ‖c‖ <= c_P ‖dc‖."""
    result = poincare_constant(rep, k)
    if result.degenerate:
        return False
    coexact = hodge_decompose(rep, k, w).coexact
    lhs = _norm(np.asarray(rep.gram(k)), coexact)
    derivative = _norm(np.asarray(rep.gram(k + 1)), np.asarray(rep.diff(k) @ coexact))
    return lhs > result.constant * derivative * (1 + POINCARE_RTOL) + HODGE_TOL


def _pair_for_trial(rng: np.random.Generator, trial: int) -> tuple[str, CrimePair]:
    if trial % 5 == 0:
        return "unitary", unitary_pair(rng)
    if trial % 7 == 3:  # noqa: PLR2004
        return "adversarial", adversarial_pair(rng)
    return "random", random_crime_pair(rng, float(rng.uniform(0.0, 0.5)))


def run_trial(seed: np.random.SeedSequence, trial: int) -> TrialResult:
    """Sample one pair and count violations of every check."""
    rng = np.random.default_rng(seed)
    kind, pair = _pair_for_trial(rng, trial)
    violations = dict.fromkeys(CHECKS, 0)
    crime_terms = 0.0
    for k in range(pair.top + 1):
        for rep in (pair.true_complex, pair.approx_complex):
            w = rng.standard_normal(rep.dim(k))
            violations["hodge"] += hodge_violation(rep, k, w)
            violations["poincare"] += poincare_violation(rep, k, w)
        if k < pair.top:
            violations["discrete_poincare"] += discrete_poincare_check(pair, k).violated
        f = rng.standard_normal(pair.true_complex.dim(k))
        audit = projection_data(pair, k, pair.projection.maps[k], f)
        violations["projection_data"] += audit.violated
        if kind == "unitary":
            report = crime_report(pair, k, f, pair.projection.maps[k] @ f)
            terms = report.data_error + report.geometry_error + report.perturbation
            crime_terms = max(crime_terms, terms)
    violations["cohomology"] += sum(v.violated for v in cohomology_isomorphism_check(pair))
    if any(violations.values()):
        logger.warning("trial %d (%s): violations %s", trial, kind, violations)
    return TrialResult(trial=trial, kind=kind, violations=violations, crime_terms=crime_terms)


def perturbation_sweep(
    seed: int, k: int = 1, epsilons: tuple[float, ...] = SWEEP_EPSILONS
) -> SweepResult:
    """Perturbation term against ‖f_h − i_h* f‖ + ‖I − J_h‖‖f‖ for injections (I + εK)."""

    def report_at(epsilon: float) -> tuple[float, float]:
        pair = random_crime_pair(
            np.random.default_rng(seed), epsilon, coupled=False, shifted=False
        )
        f = np.random.default_rng(seed + 1).standard_normal(pair.true_complex.dim(k))
        report = crime_report(pair, k, f)
        return report.data_error + report.geometry_error, report.perturbation

    crimes, perturbations = zip(*(report_at(eps) for eps in epsilons))
    return SweepResult(
        epsilons=tuple(epsilons),
        crimes=tuple(crimes),
        perturbations=tuple(perturbations),
        at_zero=report_at(0.0)[1],
    )


def run_battery(
    seed: int,
    trials: int,
    max_concurrent: int = 1,
    progress_callback: Optional[Callable[[int, int, TrialResult], None]] = None,
) -> BatteryReport:
    """Run the battery over ``trials`` random pairs and the ε-sweeps.

    Args:
    ----
        seed: Root seed; trial i uses the i-th spawned seed
        trials: Number of random pairs
        max_concurrent: Trials computed at once
        progress_callback: Progress callback (done, total, result)

    Returns:
    -------
        The battery report

    """
    seeds = np.random.SeedSequence(seed).spawn(trials)
    runner = LevelRunner(lambda i: run_trial(seeds[i], i), max_concurrent)
    results = runner.run(list(range(trials)), progress_callback)
    violations = {name: sum(r.violations[name] for r in results) for name in CHECKS}
    sweeps = tuple(perturbation_sweep(seed + 1000 * i) for i in range(SWEEP_SEEDS))
    unitary = [r.crime_terms for r in results if r.kind == "unitary"]
    report = BatteryReport(
        seed=seed,
        trials=trials,
        violations=violations,
        slopes=tuple(s.slope for s in sweeps),
        constants=tuple(c for s in sweeps for c in s.constants),
        zero_at_origin=all(s.at_zero == 0.0 for s in sweeps),
        unitary_max=max(unitary, default=0.0),
        sweeps=sweeps,
    )
    logger.info("battery: %s", report.to_dict())
    return report
