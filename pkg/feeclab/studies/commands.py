"""Study commands: meshes, geometry, single solves, refinement and eigenvalue studies."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.core.solvers import solve_hodge_eigen
from feeclab.derham.assembly import assemble, assemble_true_gram
from feeclab.derham.exact import sphere_spectrum
from feeclab.geometry.io import write_soff
from feeclab.geometry.mesh import SurfaceMesh, euler_characteristic, mesh_family
from feeclab.geometry.report import geometry_report
from feeclab.geometry.surfaces import Sphere, get_surface
from feeclab.studies.battery import BatteryReport, run_battery
from feeclab.studies.config import StudyConfig
from feeclab.studies.rates import LimitCheck, RateTable, RateTarget, Verdict
from feeclab.studies.runner import LevelRunner
from feeclab.studies.solve import LevelResult, solve_level

logger = logging.getLogger(__name__)

MIN_STUDY_LEVELS = 3
BOUND_SLACK = 1e-8
CLUSTER_RTOL = 0.05
EIGEN_GAP_TOL = 0.05
GEOMETRY_COLUMNS = (
    "level", "h", "delta_inf", "normal_gap_inf", "sv_min", "sv_max",
    "bound_0", "bound_1", "bound_2", "deviation_0", "deviation_1", "deviation_2",
)  # fmt: skip


@dataclass(frozen=True)
class StudyResult:
    """Rate table, verdict and per-level details of a study."""

    table: RateTable
    verdict: Verdict
    details: tuple[Any, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        """Whether the verdict passed."""
        return self.verdict.passed

    def to_dict(self) -> dict[str, Any]:
        """Convert study result to dictionary.

        Returns
        -------
            Table and verdict documents

        """
        return {"table": self.table.to_dict(), "verdict": self.verdict.to_dict()}


def _output_dir(config: StudyConfig) -> Optional[Path]:
    if config.out is None:
        return None
    path = Path(config.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_study(config: StudyConfig, result: StudyResult, stem: str) -> None:
    out = _output_dir(config)
    if out is None:
        return
    result.table.write(out / f"{stem}.{config.format}", config.format)
    result.verdict.write(out / f"{stem}_verdict.json")
    logger.info("wrote %s outputs to %s", stem, out)


def _meshes(config: StudyConfig) -> dict[int, SurfaceMesh]:
    surface = get_surface(config.surface)
    family = mesh_family(surface, config.levels, config.s, config.min_level)
    return dict(zip(config.level_range, family))


def _run(config: StudyConfig, work: Any) -> list[Any]:
    return LevelRunner(work, config.max_concurrent).run(config.level_range)


def cmd_mesh(config: StudyConfig) -> list[dict[str, Any]]:
    """Generate the mesh of every level; write SOFF files when ``out`` is set.

    Returns
    -------
        Per-level summaries with entity counts, h and the Euler characteristic

    """
    out = _output_dir(config)
    summaries = []
    for level, mesh in _meshes(config).items():
        summary = {"level": level, **mesh.to_dict(), "euler": euler_characteristic(mesh)}
        if out is not None:
            path = out / f"{config.surface}_s{config.s}_level{level}.soff"
            write_soff(mesh, path)
            summary["path"] = str(path)
        summaries.append(summary)
    return summaries


def geometry_row(config: StudyConfig, mesh: SurfaceMesh, level: int) -> tuple[Any, ...]:
    """Geometry report and Jacobian deviations of one level."""
    surface = get_surface(config.surface)
    report = geometry_report(surface, mesh, config.quad_degree, config.exact_geometry)
    assembled = assemble(mesh, "whitney", config.quad_degree, surface, config.exact_geometry)
    deviations = [
        assemble_true_gram(mesh, surface, k, assembled=assembled)[1].deviation for k in range(3)
    ]
    for k, (deviation, bound) in enumerate(zip(deviations, report.jacobian_bound)):
        if deviation > bound + BOUND_SLACK:
            logger.warning("level %d, k = %d: deviation %.3e above bound %.3e", level, k,
                           deviation, bound)
    return (level, report.h, report.delta_inf, report.normal_gap_inf, *report.sv_range,
            *report.jacobian_bound, *deviations)


def cmd_geom(config: StudyConfig) -> StudyResult:
    """Geometry report across levels; passes when every deviation rate is >= s + 1 − 0.25."""
    meshes = _meshes(config)
    rows = _run(config, lambda level: geometry_row(config, meshes[level], level))
    table = RateTable(rows=tuple(rows), columns=GEOMETRY_COLUMNS)
    targets = [RateTarget(f"deviation_{k}", config.s + 1, 0.25, "min") for k in range(3)]
    result = StudyResult(table=table, verdict=Verdict.check(table, targets))
    _write_study(config, result, f"geometry_{config.surface}_s{config.s}")
    return result


def cmd_solve(config: StudyConfig, level: int) -> LevelResult:
    """Assemble and solve at one level; writes ``solve_level<L>.json`` when ``out`` is set."""
    if level < 0:
        raise ValidationError("level", "must be nonnegative", level)
    single = config.with_overrides(min_level=level, levels=level + 1)
    result = solve_level(single, _meshes(single)[level], level)
    out = _output_dir(config)
    if out is not None:
        path = out / f"solve_level{level}.json"
        path.write_text(json.dumps(result.to_dict(), indent=2) + "\n", encoding="utf-8")
    return result


def study_targets(config: StudyConfig) -> list[RateTarget]:
    """Rate targets of a manufactured-solution study."""
    geometric = float(config.s + 1)
    if config.k == 0:
        tol = 0.15 if config.r == 1 else 0.2
        targets = [
            RateTarget("l2_u", float(min(config.r, config.s) + 1), tol),
            RateTarget("graph_u", float(min(config.r, config.s + 1)), tol),
        ]
    else:
        targets = [RateTarget("l2_u", 1.0, 0.1, "min"), RateTarget("l2_sigma", 1.0, 0.1, "min")]
    targets.append(RateTarget("jacobian_deviation", geometric, 0.2, "min"))
    if config.project_load:
        targets.append(RateTarget("data_error", geometric, 0.2, "min"))
    return targets


def cmd_study(config: StudyConfig) -> StudyResult:
    """Refinement study with rate fitting.

    Raises
    ------
        ValidationError: Fewer than three levels

    """
    if len(config.level_range) < MIN_STUDY_LEVELS:
        raise ValidationError("levels", f"a study needs at least {MIN_STUDY_LEVELS} levels",
                              len(config.level_range))
    meshes = _meshes(config)
    results = _run(config, lambda level: solve_level(config, meshes[level], level))
    table = RateTable(rows=tuple(r.row for r in results))
    result = StudyResult(
        table=table, verdict=Verdict.check(table, study_targets(config)), details=tuple(results)
    )
    _write_study(config, result, f"study_k{config.k}_r{config.r}_s{config.s}")
    return result


def clusters(values: np.ndarray, rtol: float = CLUSTER_RTOL) -> list[tuple[float, int]]:
    """Group ascending eigenvalues into (mean, multiplicity) clusters."""
    groups: list[list[float]] = []
    for value in values:
        if groups and abs(value - groups[-1][0]) <= rtol * abs(groups[-1][0]):
            groups[-1].append(float(value))
        else:
            groups.append([float(value)])
    return [(float(np.mean(g)), len(g)) for g in groups]


def eigen_row(config: StudyConfig, mesh: SurfaceMesh, level: int) -> tuple[Any, ...]:
    """Lowest nonzero eigenvalues of one level, their sphere error and lowest multiplicity."""
    surface = get_surface(config.surface)
    assembled = assemble(mesh, config.family, config.quad_degree, surface, config.exact_geometry)
    values = solve_hodge_eigen(assembled.rep, config.k, config.nev).eigenvalues
    if isinstance(surface, Sphere):
        error = float(np.max(np.abs(values - sphere_spectrum(config.k, config.nev,
                                                             surface.radius))))
    else:
        error = float("nan")
    groups = clusters(values)
    logger.info("level %d eigenvalue clusters: %s", level, groups)
    return (level, mesh.h, *values, error, groups[0][1])


def eigen_checks(config: StudyConfig, table: RateTable) -> list[LimitCheck]:
    """Finest-level checks on the sphere: lowest cluster multiplicity and distance to λ_1."""
    surface = get_surface(config.surface)
    if not isinstance(surface, Sphere):
        return []
    exact = sphere_spectrum(config.k, config.nev, surface.radius)
    multiplicity = float(table.column("multiplicity_1")[-1])
    gap = abs(float(table.column("lambda_1")[-1]) - float(exact[0]))
    return [
        LimitCheck("multiplicity_1", multiplicity, float(clusters(exact)[0][1]), "equal"),
        LimitCheck("lambda_1_gap", gap, EIGEN_GAP_TOL),
    ]


def cmd_eigen(config: StudyConfig) -> StudyResult:
    """Eigenvalue table across levels with lowest-cluster multiplicities.

    On the sphere the maximal eigenvalue error is fitted, and the finest level must reproduce
    the multiplicity of the lowest exact eigenvalue within EIGEN_GAP_TOL of it.
    """
    meshes = _meshes(config)
    rows = _run(config, lambda level: eigen_row(config, meshes[level], level))
    columns = (
        "level",
        "h",
        *(f"lambda_{i + 1}" for i in range(config.nev)),
        "eigen_error",
        "multiplicity_1",
    )
    table = RateTable(rows=tuple(rows), columns=columns, untracked=("multiplicity_1",))
    targets = []
    if config.surface == "sphere":
        targets.append(RateTarget("eigen_error", float(min(2 * config.r, config.s + 1)), 0.2,
                                  "min"))
    verdict = Verdict.check(table, targets, eigen_checks(config, table))
    result = StudyResult(table=table, verdict=verdict)
    _write_study(config, result, f"eigen_k{config.k}_r{config.r}_s{config.s}")
    return result


def cmd_abstract(config: StudyConfig) -> BatteryReport:
    """Property battery over ``trials`` random crime pairs seeded by ``seed``."""
    report = run_battery(config.seed, config.trials, config.max_concurrent)
    out = _output_dir(config)
    if out is not None:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
        (out / "battery.json").write_text(text, encoding="utf-8")
    return report
