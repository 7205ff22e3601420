"""Lagrange shape functions on the reference triangle."""

import numpy as np

from feeclab.core.exceptions import ValidationError

BARYCENTRIC_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
EDGE_PAIRS = ((0, 1), (1, 2), (2, 0))


def barycentric(points: np.ndarray) -> np.ndarray:
    """(λ0, λ1, λ2) = (1 − ξ1 − ξ2, ξ1, ξ2) at points of shape (Q, 2)."""
    points = np.atleast_2d(points)
    return np.stack([1 - points[:, 0] - points[:, 1], points[:, 0], points[:, 1]], axis=1)


def lagrange_shape(order: int, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values (Q, n) and reference gradients (Q, n, 2) of P1 or P2 Lagrange functions.

    P2 nodes are ordered v0, v1, v2, m01, m12, m20.
    """
    lam = barycentric(points)
    q = lam.shape[0]
    grad = np.broadcast_to(BARYCENTRIC_GRADIENTS, (q, 3, 2))
    if order == 1:
        return lam, grad.copy()
    if order != 2:  # noqa: PLR2004
        raise ValidationError("order", "Lagrange order must be 1 or 2", order)
    values = [lam[:, i] * (2 * lam[:, i] - 1) for i in range(3)]
    grads = [(4 * lam[:, i] - 1)[:, None] * grad[:, i] for i in range(3)]
    for i, j in EDGE_PAIRS:
        values.append(4 * lam[:, i] * lam[:, j])
        grads.append(4 * (lam[:, j, None] * grad[:, i] + lam[:, i, None] * grad[:, j]))
    return np.stack(values, axis=1), np.stack(grads, axis=1)
