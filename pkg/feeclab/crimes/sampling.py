"""Random crime pairs with a controllable Jacobian deviation."""

from typing import Any, Optional

import numpy as np

from feeclab.core.hilbert import direct_sum
from feeclab.core.sampling import LevelLayout, StandardForm, random_gram, sample_form
from feeclab.crimes.models import ComplexMorphism, CrimePair


def standard_chain_map(
    rng: np.random.Generator, source: StandardForm, target: StandardForm
) -> list[np.ndarray]:
    """Random chain map between two standard forms, in their conjugated coordinates.

    Each map is block upper triangular over (B, H, C); the B-B block at level k+1 is forced
    to S^target_k F_CC^k (S^source_k)^{-1} so that the squares commute.
    """
    maps = []
    previous_cc: Optional[np.ndarray] = None
    for k, (s, t) in enumerate(zip(source.layouts, target.layouts)):
        f = np.zeros((t.dim, s.dim))
        sb, sh = s.boundaries, s.boundaries + s.harmonics
        tb, th = t.boundaries, t.boundaries + t.harmonics
        if previous_cc is not None and tb and sb:
            f[:tb, :sb] = (
                target.scales[k - 1][:, None] * previous_cc / source.scales[k - 1][None, :]
            )
        f[:tb, sb:] = rng.standard_normal((tb, s.dim - sb))
        f[tb:th, sb:] = rng.standard_normal((th - tb, s.dim - sb))
        cc = rng.standard_normal((t.dim - th, s.dim - sh))
        f[th:, sh:] = cc
        previous_cc = cc
        maps.append(target.unimodular[k] @ f @ source.inverses[k])
    return maps


def _normalized(maps: list[np.ndarray]) -> list[np.ndarray]:
    scale = max((np.linalg.norm(f, 2) for f in maps if f.size), default=0.0)
    return [f / scale for f in maps] if scale > 0 else maps


def _extra_layouts(
    rng: np.random.Generator, levels: int, max_dim: int, harmonics: bool
) -> tuple[LevelLayout, ...]:
    while True:
        ranks = [int(rng.integers(0, 3)) for _ in range(levels - 1)]
        extra = [int(rng.integers(0, 3)) if harmonics else 0 for _ in range(levels)]
        layouts = tuple(
            LevelLayout(
                ranks[k - 1] if k > 0 else 0, extra[k], ranks[k] if k < levels - 1 else 0
            )
            for k in range(levels)
        )
        total = sum(layout.dim for layout in layouts)
        if total <= max_dim and (not harmonics or sum(extra) > 0):
            return layouts


def random_crime_pair(
    rng: np.random.Generator,
    epsilon: float = 0.0,
    *,
    levels: int = 3,
    max_dim: int = 40,
    coupled: bool = True,
    shifted: bool = True,
    extra_harmonics: bool = False,
    perturbation: Optional[list[np.ndarray]] = None,
    form: Optional[StandardForm] = None,
) -> CrimePair:
    """Random pair W = W_h ⊕ E with i_h = [(I + εK); 0] and π_h = (I + εK)^{-1}[I, Φ].

    K is a chain map of W_h with spectral norm 1, Φ a chain map E → W_h, and the true
    Gram couples W_h and E through a random block X while staying positive definite.

    Args:
    ----
        rng: Random generator
        epsilon: Size of the perturbation of the isometric embedding
        levels: Number of levels
        max_dim: Upper bound on the true total dimension
        coupled: Use a nonzero coupling block X in the true Gram
        shifted: Use a nonzero Φ in the projection
        extra_harmonics: Allow harmonic blocks in the complement E
        perturbation: Fixed chain map K (for parameter sweeps)
        form: Fixed standard form of W_h (for parameter sweeps)

    Returns:
    -------
        The pair; with epsilon = 0 and coupled = False the injection is isometric

    """
    form = form or sample_form(rng, levels, max_dim=max(3, (3 * max_dim) // 5))
    approx_dims = [layout.dim for layout in form.layouts]
    extra_form = sample_form(
        rng,
        layouts=_extra_layouts(rng, levels, max_dim - sum(approx_dims), extra_harmonics),
    )
    extra_dims = [layout.dim for layout in extra_form.layouts]

    approx_grams = [random_gram(rng, n) for n in approx_dims]
    extra_grams = [random_gram(rng, n) for n in extra_dims]
    approx = form.complex(approx_grams)
    extra = extra_form.complex(extra_grams)

    k_maps = perturbation if perturbation is not None else _normalized(
        standard_chain_map(rng, form, form)
    )
    phi = (
        _normalized(standard_chain_map(rng, extra_form, form))
        if shifted
        else [np.zeros((n, e)) for n, e in zip(approx_dims, extra_dims)]
    )

    true_grams = []
    for g_h, g_e in zip(approx_grams, extra_grams):
        n, e = g_h.shape[0], g_e.shape[0]
        x = rng.standard_normal((n, e)) if coupled else np.zeros((n, e))
        lower = g_e + x.T @ np.linalg.solve(g_h, x) if n and e else g_e
        gram = np.block([[g_h, x], [x.T, lower]])
        true_grams.append(0.5 * (gram + gram.T))
    true = direct_sum(approx, extra).with_grams(true_grams)

    injections, projections = [], []
    for k_map, phi_map, e in zip(k_maps, phi, extra_dims):
        n = k_map.shape[0]
        shifted_identity = np.eye(n) + epsilon * k_map
        injections.append(np.vstack([shifted_identity, np.zeros((e, n))]))
        projections.append(np.linalg.solve(shifted_identity, np.hstack([np.eye(n), phi_map])))
    return CrimePair(
        true_complex=true,
        approx_complex=approx,
        injection=ComplexMorphism(approx, true, tuple(injections)),
        projection=ComplexMorphism(true, approx, tuple(projections)),
    )


def unitary_pair(rng: np.random.Generator, **kwargs: Any) -> CrimePair:
    """Crime-free pair: isometric i_h, π_h = i_h*, matching harmonic spaces."""
    return random_crime_pair(
        rng, 0.0, coupled=False, shifted=False, extra_harmonics=False, **kwargs
    )


def adversarial_pair(rng: np.random.Generator, **kwargs: Any) -> CrimePair:
    """Pair whose i_hπ_h annihilates harmonic vectors of the complement."""
    return random_crime_pair(
        rng, 0.0, coupled=False, shifted=False, extra_harmonics=True, **kwargs
    )


def scaled_pair(pair: CrimePair, factor: float) -> CrimePair:
    """Replace i_h by factor·i_h and π_h by π_h/factor."""
    return CrimePair(
        true_complex=pair.true_complex,
        approx_complex=pair.approx_complex,
        injection=pair.injection.scaled(factor),
        projection=pair.projection.scaled(1.0 / factor),
    )
