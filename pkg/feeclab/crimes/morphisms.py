"""Morphism checks and composition."""

import numpy as np

from feeclab.core.exceptions import MorphismError
from feeclab.core.hilbert import graph_gram
from feeclab.core.linalg import dense, mat_norm, operator_norm
from feeclab.crimes.models import ComplexMorphism, MorphismDiagnostics

RETRACTION_TOL = 1e-12


def commutation_defect(morphism: ComplexMorphism, k: int) -> float:
    """Relative defect of D^target_k F_k = F_{k+1} D^source_k."""
    f, g = morphism.maps[k], morphism.maps[k + 1]
    d_source = dense(morphism.source.diff(k))
    d_target = dense(morphism.target.diff(k))
    scale = mat_norm(d_target) * mat_norm(f) + mat_norm(g) * mat_norm(d_source)
    if scale == 0:
        return 0.0
    return mat_norm(d_target @ f - g @ d_source) / scale


def check_morphism(morphism: ComplexMorphism) -> MorphismDiagnostics:
    """Commutation defects and W- and V-operator norms of every map.

    Args:
    ----
        morphism: Morphism to check

    Returns:
    -------
        Per-level diagnostics

    """
    source, target = morphism.source, morphism.target
    return MorphismDiagnostics(
        commutation_defects=tuple(
            commutation_defect(morphism, k) for k in range(source.top)
        ),
        w_norms=tuple(
            operator_norm(f, target.gram(k), source.gram(k)) for k, f in enumerate(morphism.maps)
        ),
        v_norms=tuple(
            operator_norm(f, graph_gram(target, k), graph_gram(source, k))
            for k, f in enumerate(morphism.maps)
        ),
    )


def compose_projection(
    transfer: ComplexMorphism, projection: ComplexMorphism, injection: ComplexMorphism
) -> ComplexMorphism:
    """Pull a projection π′_h: W′ → W_h back along f: W → W′ to π_h = π′_h ∘ f.

    Args:
    ----
        transfer: Morphism f from the true complex W to W′
        projection: Projection π′_h from W′ to the approximating complex
        injection: Injection i_h from the approximating complex into W

    Returns:
    -------
        π_h with π_h ∘ i_h = id

    Raises:
    ------
        MorphismError: π′_h ∘ (f ∘ i_h) is not the identity

    """
    through = transfer.after(injection)
    for k, (p, fi) in enumerate(zip(projection.maps, through.maps)):
        if fi.size == 0:
            continue
        scale = max(1.0, float(np.abs(p).max()) * float(np.abs(fi).max()))
        defect = float(np.abs(p @ fi - np.eye(fi.shape[1])).max()) / scale
        if defect > RETRACTION_TOL:
            raise MorphismError(f"π′_h∘f∘i_h differs from identity by {defect:.3e}", k)
    return projection.after(transfer)
