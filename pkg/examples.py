import asyncio

import numpy as np

from feeclab import ValidationError
from feeclab.core import betti_numbers, hodge_decompose, poincare_constant, random_complex
from feeclab.crimes import (
    adversarial_pair,
    cohomology_isomorphism_check,
    crime_report,
    random_crime_pair,
)
from feeclab.derham import assemble, assemble_true_gram
from feeclab.geometry import Sphere, Torus, geometry_report, mesh_family
from feeclab.studies import LevelRunner, StudyConfig, cmd_solve, run_battery


def abstract_complex():
    """Demonstrates Hodge theory on a random Hilbert complex."""
    print("=== Running Abstract Complex Example ===")
    rng = np.random.default_rng(0)
    rep = random_complex(rng)
    print(f"Dimensions: {rep.dims}, Betti numbers: {betti_numbers(rep)}")

    split = hodge_decompose(rep, 1, rng.standard_normal(rep.dim(1)))
    print(f"Harmonic part norm: {np.linalg.norm(split.harmonic):.4f}")
    print(f"Poincaré constant at level 0: {poincare_constant(rep, 0).constant:.4f}")


def crime_budget():
    """Demonstrates the error budget of a perturbed crime pair."""
    print("\n=== Running Crime Budget Example ===")
    rng = np.random.default_rng(1)
    for epsilon in (0.1, 0.01, 0.001):
        pair = random_crime_pair(np.random.default_rng(7), epsilon, coupled=False, shifted=False)
        f = rng.standard_normal(pair.true_complex.dim(1))
        report = crime_report(pair, 1, f)
        print(
            f"epsilon = {epsilon:g}: geometry {report.geometry_error:.3e}, "
            f"perturbation {report.perturbation:.3e}"
        )

    verdicts = cohomology_isomorphism_check(adversarial_pair(rng))
    for verdict in verdicts:
        print(f"level {verdict.level}: gap {verdict.gap:.3f}, bijective {verdict.bijective}")


def surface_geometry():
    """Demonstrates geometry reports and Jacobian deviations on the sphere."""
    print("\n=== Running Surface Geometry Example ===")
    sphere = Sphere()
    for s in (1, 2):
        for mesh in mesh_family(sphere, 3, s=s):
            report = geometry_report(sphere, mesh)
            _, jacobian = assemble_true_gram(mesh, sphere, 1)
            print(
                f"s = {s}, h = {report.h:.4f}: delta {report.delta_inf:.3e}, "
                f"deviation {jacobian.deviation:.3e}"
            )


async def concurrent_levels():
    """Demonstrates assembling several torus levels concurrently."""
    print("\n=== Running Concurrent Levels Example ===")
    torus = Torus()
    meshes = mesh_family(torus, 2)

    def dims(level):
        return assemble(meshes[level]).rep.dims

    def progress_callback(current, total, result):
        print(f"Assembled {current}/{total}: dims {result}")

    await LevelRunner(dims, max_concurrent=2).run_levels([0, 1], progress_callback)


def manufactured_solution():
    """Demonstrates a single solve with the default study configuration."""
    print("\n=== Running Manufactured Solution Example ===")
    result = cmd_solve(StudyConfig(k=1, ell=2), level=1)
    print(f"Errors (level, h, ...): {result.row}")
    print(f"Crime report: {result.crime.to_dict()}")


def error_handling_example():
    """Demonstrates validation errors for unsupported configurations."""
    print("\n=== Running Error Handling Example ===")
    try:
        StudyConfig(surface="torus", s=2)
    except ValidationError as e:
        print(f"Caught expected validation error: {e.field} - {e.message}")


def property_battery():
    """Demonstrates a short run of the property battery."""
    print("\n=== Running Property Battery Example ===")
    report = run_battery(seed=42, trials=20)
    print(f"Violations: {report.violations}")
    print(f"Slopes: {[round(s, 3) for s in report.slopes]}, pass: {report.passed}")


if __name__ == "__main__":
    abstract_complex()
    crime_budget()
    surface_geometry()
    asyncio.run(concurrent_levels())
    manufactured_solution()
    error_handling_example()
    # property_battery()  # Takes a few seconds
