"""Quadrature rules on the reference triangle and interval."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from feeclab.core.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points and weights on the reference triangle {ξ1, ξ2 >= 0, ξ1 + ξ2 <= 1}."""

    degree: int
    points: np.ndarray
    weights: np.ndarray

    def to_dict(self) -> dict[str, object]:
        """Convert rule descriptor to dictionary.

        Returns
        -------
            Degree and point count

        """
        return {"degree": self.degree, "points": len(self.weights)}


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> QuadratureRule:
    """Collapsed Gauss–Jacobi × Gauss–Legendre rule, exact for total degree <= ``degree``.

    The weights sum to the reference area 1/2.
    """
    if degree < 0:
        raise ValidationError("quad_degree", "must be nonnegative", degree)
    n = max(1, int(np.ceil((degree + 1) / 2)))
    t, wt = roots_jacobi(n, 1.0, 0.0)
    s, ws = roots_legendre(n)
    u = (1 + t) / 2
    v = (1 + s) / 2
    uu, vv = np.meshgrid(u, v, indexing="ij")
    points = np.stack([uu.ravel(), (vv * (1 - uu)).ravel()], axis=1)
    weights = np.outer(wt / 4, ws / 2).ravel()
    return QuadratureRule(degree=degree, points=points, weights=weights)


@lru_cache(maxsize=None)
def interval_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre points and weights on [0, 1], exact for degree <= ``degree``."""
    n = max(1, int(np.ceil((degree + 1) / 2)))
    s, ws = roots_legendre(n)
    return (1 + s) / 2, ws / 2


REFERENCE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
