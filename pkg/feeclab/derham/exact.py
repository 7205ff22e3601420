"""Manufactured solutions of the Hodge Laplacian on a sphere from spherical harmonics."""

from dataclasses import dataclass
from typing import Callable, ClassVar, Optional

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.derham.forms import FormCallback, zero_form

Polynomial = tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]


def _columns(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return x[:, 0], x[:, 1], x[:, 2]


def _harmonic(ell: int) -> Polynomial:
    """A homogeneous harmonic polynomial of degree ℓ and its gradient."""
    if ell == 1:
        return (
            lambda x: x[:, 2],
            lambda x: np.tile([0.0, 0.0, 1.0], (len(x), 1)),
        )
    if ell == 2:  # noqa: PLR2004
        return (
            lambda x: x[:, 0] * x[:, 1],
            lambda x: np.stack([x[:, 1], x[:, 0], np.zeros(len(x))], axis=1),
        )
    if ell == 3:  # noqa: PLR2004
        return (
            lambda x: x[:, 0] * x[:, 1] * x[:, 2],
            lambda x: np.stack([x[:, 1] * x[:, 2], x[:, 0] * x[:, 2], x[:, 0] * x[:, 1]], 1),
        )

    def value(x: np.ndarray) -> np.ndarray:
        a, b, _ = _columns(x)
        return a**3 * b - a * b**3

    def gradient(x: np.ndarray) -> np.ndarray:
        a, b, _ = _columns(x)
        return np.stack([3 * a**2 * b - b**3, a**3 - 3 * a * b**2, np.zeros(len(x))], axis=1)

    return value, gradient


@dataclass(frozen=True)
class SphereSolution:
    """Exact (σ, u, p) and load f of the mixed problem at level k; σ is None at k = 0."""

    k: int
    ell: int
    eigenvalue: float
    u: FormCallback
    f: FormCallback
    p: FormCallback
    sigma: Optional[FormCallback] = None
    DEGREES: ClassVar[tuple[int, ...]] = (1, 2, 3, 4)


def sphere_solution(k: int, ell: int = 2, radius: float = 1.0) -> SphereSolution:
    """Eigenform solution built from Y_ℓ(x) = P_ℓ(x/|x|) on the sphere of a given radius.

    k = 0: u = Y, f = λY. k = 1: u = ∇_M Y, σ = λY, f = λu. k = 2: u = Y vol_M,
    σ = ∇_M Y × ν, f = λY vol_M. In every case λ = ℓ(ℓ+1)/radius² and p = 0.
    """
    if k not in (0, 1, 2):
        raise ValidationError("k", "surface forms have degree 0, 1 or 2", k)
    if ell not in SphereSolution.DEGREES:
        raise ValidationError("ell", f"must be one of {SphereSolution.DEGREES}", ell)
    poly, poly_gradient = _harmonic(ell)
    eigenvalue = ell * (ell + 1) / radius**2

    def y(x: np.ndarray) -> np.ndarray:
        return poly(x / np.linalg.norm(x, axis=1)[:, None])

    def grad_y(x: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(x, axis=1)[:, None]
        hat = x / r
        g = poly_gradient(hat)
        return (g - np.einsum("ij,ij->i", g, hat)[:, None] * hat) / r

    def scaled(fn: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: eigenvalue * fn(x)

    def rotated(x: np.ndarray) -> np.ndarray:
        return np.cross(grad_y(x), x / np.linalg.norm(x, axis=1)[:, None])

    if k == 0:
        u = FormCallback(0, y, FormCallback(1, grad_y, zero_form(2), "dY"), "Y")
        f = FormCallback(0, scaled(y), FormCallback(1, scaled(grad_y), zero_form(2)), "f")
        return SphereSolution(k=0, ell=ell, eigenvalue=eigenvalue, u=u, f=f, p=zero_form(0))
    if k == 1:
        u = FormCallback(1, grad_y, zero_form(2), "dY")
        sigma = FormCallback(0, scaled(y), FormCallback(1, scaled(grad_y), zero_form(2)), "σ")
        f = FormCallback(1, scaled(grad_y), zero_form(2), "f")
        return SphereSolution(
            k=1, ell=ell, eigenvalue=eigenvalue, u=u, f=f, p=zero_form(1), sigma=sigma
        )
    u = FormCallback(2, y, name="Y vol")
    sigma = FormCallback(1, rotated, FormCallback(2, scaled(y)), "σ")
    f = FormCallback(2, scaled(y), name="f")
    return SphereSolution(
        k=2, ell=ell, eigenvalue=eigenvalue, u=u, f=f, p=zero_form(2), sigma=sigma
    )


def sphere_spectrum(k: int, count: int, radius: float = 1.0) -> np.ndarray:
    """Lowest ``count`` nonzero Hodge-Laplace eigenvalues on the sphere, with multiplicity.

    Eigenvalues are ℓ(ℓ+1)/radius², ℓ >= 1, with multiplicity 2ℓ+1 for k = 0, 2 and
    2(2ℓ+1) for k = 1 (exact and coexact forms).
    """
    if k not in (0, 1, 2):
        raise ValidationError("k", "surface forms have degree 0, 1 or 2", k)
    values: list[float] = []
    ell = 1
    while len(values) < count:
        multiplicity = (2 * ell + 1) * (2 if k == 1 else 1)
        values.extend([ell * (ell + 1) / radius**2] * multiplicity)
        ell += 1
    return np.array(values[:count])
