"""Implicit hypersurfaces of R^3 and their tubular-neighborhood calculus.

All evaluators are vectorized: points are arrays of shape (..., 3).
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, ClassVar, Optional

import numpy as np

from feeclab.core.exceptions import NeighborhoodError, ValidationError

logger = logging.getLogger(__name__)


class ImplicitSurface(ABC):
    """Closed surface M given by its signed distance δ with ∇δ = ν (outward)."""

    name: ClassVar[str] = "surface"
    reach: float
    diameter: float

    @abstractmethod
    def distance(self, x: np.ndarray) -> np.ndarray:
        """Signed distance δ(x), shape (...)."""

    @abstractmethod
    def normal(self, x: np.ndarray) -> np.ndarray:
        """Unit normal ν(x) = ∇δ(x), shape (..., 3)."""

    @abstractmethod
    def hessian(self, x: np.ndarray) -> np.ndarray:
        """Hessian ∇²δ(x), shape (..., 3, 3)."""

    def check_neighborhood(self, x: np.ndarray) -> np.ndarray:
        """Return δ(x), raising if any point lies outside the tubular neighborhood."""
        delta = self.distance(x)
        worst = float(np.max(np.abs(delta), initial=0.0))
        if worst >= self.reach:
            raise NeighborhoodError(
                f"Point at distance {worst:.6g} outside neighborhood of half-width {self.reach}",
                worst,
            )
        return delta

    def closest_point(self, x: np.ndarray) -> np.ndarray:
        """a(x) = x − δ(x) ν(x)."""
        x = np.asarray(x, dtype=float)
        delta = self.check_neighborhood(x)
        return x - delta[..., None] * self.normal(x)


def closest_point(surface: ImplicitSurface, x: np.ndarray) -> np.ndarray:
    """Closest-point projection a(x) onto M."""
    return surface.closest_point(x)


def shape_operator(surface: ImplicitSurface, x: np.ndarray) -> np.ndarray:
    """S = −∇²δ(x); symmetric with S ν = 0."""
    x = np.asarray(x, dtype=float)
    surface.check_neighborhood(x)
    return -surface.hessian(x)


def tangent_projector(normal: np.ndarray) -> np.ndarray:
    """P = I − ν ⊗ ν for stacked normals."""
    return np.eye(3) - normal[..., :, None] * normal[..., None, :]


def closest_point_jacobian(surface: ImplicitSurface, x: np.ndarray) -> np.ndarray:
    """∇a(x) = P + δ S."""
    x = np.asarray(x, dtype=float)
    delta = surface.check_neighborhood(x)
    return tangent_projector(surface.normal(x)) - delta[..., None, None] * surface.hessian(x)


def parallel_curvatures(surface: ImplicitSurface, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Tangential eigenvalues of +∇ν at x and their prediction κ(a)/(1 + δκ(a)).

    Args:
    ----
        surface: Surface
        x: Single point in the tubular neighborhood

    Returns:
    -------
        (measured, predicted), each sorted ascending with two entries

    """
    x = np.asarray(x, dtype=float)
    delta = float(surface.check_neighborhood(x))
    a = surface.closest_point(x)

    def tangential(point: np.ndarray) -> np.ndarray:
        values, vectors = np.linalg.eigh(surface.hessian(point))
        normal_index = int(np.argmax(np.abs(vectors.T @ surface.normal(point))))
        return np.sort(np.delete(values, normal_index))

    at_surface = tangential(a)
    return tangential(x), np.sort(at_surface / (1.0 + delta * at_surface))


class Sphere(ImplicitSurface):
    """Sphere of the given radius centered at the origin."""

    name = "sphere"

    def __init__(self, radius: float = 1.0) -> None:
        """Initialize sphere.

        Args:
        ----
            radius: Sphere radius

        """
        if radius <= 0:
            raise ValidationError("radius", "must be positive", radius)
        self.radius = radius
        self.reach = radius
        self.diameter = 2 * radius

    def distance(self, x: np.ndarray) -> np.ndarray:
        """|x| − radius."""
        return np.linalg.norm(x, axis=-1) - self.radius

    def check_neighborhood(self, x: np.ndarray) -> np.ndarray:
        """Return δ(x); only the center is excluded, outward distance is unbounded."""
        delta = self.distance(x)
        worst = float(np.min(delta, initial=0.0))
        if worst <= -self.radius:
            raise NeighborhoodError(f"Point at the center of the sphere (δ = {worst:.6g})",
                                    abs(worst))
        return delta

    def normal(self, x: np.ndarray) -> np.ndarray:
        """x / |x|."""
        return x / np.linalg.norm(x, axis=-1)[..., None]

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """(I − x̂x̂ᵀ) / |x|."""
        r = np.linalg.norm(x, axis=-1)
        return tangent_projector(x / r[..., None]) / r[..., None, None]


class Torus(ImplicitSurface):
    """Torus of revolution about the z-axis with tube radius ``minor`` around a circle."""

    name = "torus"

    def __init__(self, major: float = 2.0, minor: float = 0.5) -> None:
        """Initialize torus.

        Args:
        ----
            major: Radius R of the core circle
            minor: Tube radius ρ < R

        """
        if not 0 < minor < major:
            raise ValidationError("minor", "need 0 < minor < major", minor)
        self.major = major
        self.minor = minor
        self.reach = min(minor, major - minor)
        self.diameter = 2 * (major + minor)

    def _frame(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        q = np.hypot(x[..., 0], x[..., 1])
        radial = np.stack([x[..., 0] / q, x[..., 1] / q, np.zeros_like(q)], axis=-1)
        offset = x - self.major * radial
        tube = np.linalg.norm(offset, axis=-1)
        return q, radial, offset, tube

    def distance(self, x: np.ndarray) -> np.ndarray:
        """Distance to the core circle minus ρ."""
        _, _, _, tube = self._frame(x)
        return tube - self.minor

    def normal(self, x: np.ndarray) -> np.ndarray:
        """Unit vector from the nearest core-circle point."""
        _, _, offset, tube = self._frame(x)
        return offset / tube[..., None]

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """(I − nnᵀ − (R/q) f fᵀ) / t with f the azimuthal direction."""
        q, radial, offset, tube = self._frame(x)
        n = offset / tube[..., None]
        azimuth = np.stack([-radial[..., 1], radial[..., 0], np.zeros_like(q)], axis=-1)
        ff = azimuth[..., :, None] * azimuth[..., None, :]
        return (tangent_projector(n) - (self.major / q)[..., None, None] * ff) / tube[
            ..., None, None
        ]

    def point(self, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """Parametric point at azimuth θ and tube angle φ."""
        ring = self.major + self.minor * np.cos(phi)
        return np.stack(
            [ring * np.cos(theta), ring * np.sin(theta), self.minor * np.sin(phi)], axis=-1
        )


class Plane(ImplicitSurface):
    """Affine plane n·x = offset; flat, with S = 0."""

    name = "plane"

    def __init__(self, normal: tuple[float, float, float] = (0.0, 0.0, 1.0),
                 offset: float = 0.0) -> None:
        """Initialize plane.

        Args:
        ----
            normal: Plane normal (normalized internally)
            offset: Signed offset along the normal

        """
        n = np.asarray(normal, dtype=float)
        self.unit = n / np.linalg.norm(n)
        self.offset = offset
        self.reach = np.inf
        self.diameter = 1.0

    def distance(self, x: np.ndarray) -> np.ndarray:
        """n·x − offset."""
        return np.asarray(x, dtype=float) @ self.unit - self.offset

    def normal(self, x: np.ndarray) -> np.ndarray:
        """Constant normal."""
        return np.broadcast_to(self.unit, np.shape(x)).copy()

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """Zero."""
        return np.zeros(np.shape(x)[:-1] + (3, 3))


class LevelSetSurface(ImplicitSurface):
    """Surface {φ = 0} of a smooth function, with Newton closest point and FD Hessians."""

    name = "levelset"
    MAX_STEPS: ClassVar[int] = 50
    RESIDUAL_TOL: ClassVar[float] = 1e-13
    FD_STEP: ClassVar[float] = 1e-5

    def __init__(
        self,
        function: Callable[[np.ndarray], float],
        gradient: Callable[[np.ndarray], np.ndarray],
        reach: float,
        diameter: float,
        hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> None:
        """Initialize level-set surface.

        Args:
        ----
            function: Level-set function φ of one point
            gradient: ∇φ of one point
            reach: Tubular-neighborhood half-width
            diameter: Surface diameter (scales the finite-difference step)
            hessian: ∇²φ of one point; finite differences of ``gradient`` when omitted

        """
        self.function = function
        self.gradient = gradient
        self.function_hessian = hessian
        self.reach = reach
        self.diameter = diameter

    def _phi_hessian(self, a: np.ndarray) -> np.ndarray:
        if self.function_hessian is not None:
            return np.asarray(self.function_hessian(a), dtype=float)
        step = self.FD_STEP * self.diameter
        columns = [
            (self.gradient(a + step * e) - self.gradient(a - step * e)) / (2 * step)
            for e in np.eye(3)
        ]
        h = np.column_stack(columns)
        return 0.5 * (h + h.T)

    def _project(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        a = np.array(x, dtype=float)
        for _ in range(5):
            g = self.gradient(a)
            a = a - self.function(a) * g / float(g @ g)
        g = self.gradient(a)
        lam = float((x - a) @ g / (g @ g))
        unknowns = np.concatenate([a, [lam]])
        for _ in range(self.MAX_STEPS):
            a, lam = unknowns[:3], unknowns[3]
            g = self.gradient(a)
            residual = np.concatenate([a + lam * g - x, [self.function(a)]])
            if np.max(np.abs(residual)) <= self.RESIDUAL_TOL * max(1.0, self.diameter):
                break
            jac = np.zeros((4, 4))
            jac[:3, :3] = np.eye(3) + lam * self._phi_hessian(a)
            jac[:3, 3] = g
            jac[3, :3] = g
            unknowns = unknowns - np.linalg.solve(jac, residual)
        else:
            logger.warning("closest point Newton did not converge at %s", x)
        a = unknowns[:3]
        g = self.gradient(a)
        nu = g / np.linalg.norm(g)
        return a, float((x - a) @ nu)

    def _pointwise(self, x: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 3)
        values = np.array([fn(p) for p in flat])
        return values.reshape(x.shape[:-1] + values.shape[1:])

    def distance(self, x: np.ndarray) -> np.ndarray:
        """Signed distance from the Newton projection."""
        return self._pointwise(x, lambda p: self._project(p)[1])

    def normal(self, x: np.ndarray) -> np.ndarray:
        """Normalized ∇φ at the closest point."""

        def one(p: np.ndarray) -> np.ndarray:
            g = self.gradient(self._project(p)[0])
            return g / np.linalg.norm(g)

        return self._pointwise(x, one)

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """Central differences of ν with step FD_STEP × diameter."""
        step = self.FD_STEP * self.diameter

        def one(p: np.ndarray) -> np.ndarray:
            columns = [
                (self.normal(p + step * e) - self.normal(p - step * e)) / (2 * step)
                for e in np.eye(3)
            ]
            h = np.column_stack(columns)
            return 0.5 * (h + h.T)

        return self._pointwise(x, one)

    def closest_point(self, x: np.ndarray) -> np.ndarray:
        """Newton solution of x = a + λ∇φ(a), φ(a) = 0."""
        x = np.asarray(x, dtype=float)
        self.check_neighborhood(x)
        return self._pointwise(x, lambda p: self._project(p)[0])


SURFACES: dict[str, Callable[[], ImplicitSurface]] = {"sphere": Sphere, "torus": Torus}


def get_surface(name: str) -> ImplicitSurface:
    """Built-in surface by name."""
    try:
        return SURFACES[name]()
    except KeyError:
        raise ValidationError(
            "surface", f"unknown surface; choose from {sorted(SURFACES)}", name
        ) from None
