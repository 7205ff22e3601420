"""Differential forms on M given by ambient proxies, and their pullbacks to the mesh."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.geometry.mapping import PointGeometry

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FormCallback:
    """A k-form on M through its ambient proxy.

    The proxy is a scalar u for k = 0, a tangent vector field U with ω(X) = U·X for k = 1,
    and a density ρ with ω = ρ vol_M for k = 2. ``field`` maps points (N, 3) to (N,) or
    (N, 3); ``derivative`` is the callback of dω, if known.
    """

    degree: int
    field: Field
    derivative: Optional["FormCallback"] = None
    name: str = ""

    def __post_init__(self) -> None:
        """Validate degree after initialization."""
        if self.degree not in (0, 1, 2):
            raise ValidationError("degree", "surface forms have degree 0, 1 or 2", self.degree)
        if self.derivative is not None and self.derivative.degree != self.degree + 1:
            raise ValidationError("derivative", "must have degree k + 1", self.derivative.degree)

    @property
    def d(self) -> "FormCallback":
        """Callback of the exterior derivative."""
        if self.derivative is None:
            label = self.name or "form"
            raise ValidationError("derivative", f"no exterior derivative for {label}")
        return self.derivative

    def ambient(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the proxy at points of any leading shape (..., 3)."""
        points = np.asarray(points, dtype=float)
        lead = points.shape[:-1]
        values = np.asarray(self.field(points.reshape(-1, 3)), dtype=float)
        return values.reshape(lead + values.shape[1:])

    def evaluate(self, points: np.ndarray, frame: np.ndarray) -> np.ndarray:
        """Coefficients in a positively oriented orthonormal tangent frame (..., 3, 2).

        Returns the value (k = 0), the frame components (ω(f1), ω(f2)) (k = 1), or the
        density (k = 2).
        """
        values = self.ambient(points)
        if self.degree == 1:
            return np.einsum("...c,...cj->...j", values, frame)
        return values


def zero_form(degree: int) -> FormCallback:
    """The zero k-form, closed."""

    def zero(points: np.ndarray) -> np.ndarray:
        shape = (len(points), 3) if degree == 1 else (len(points),)
        return np.zeros(shape)

    derivative = zero_form(degree + 1) if degree < 2 else None  # noqa: PLR2004
    return FormCallback(degree=degree, field=zero, derivative=derivative, name="zero")


def pullback_coefficients(form: FormCallback, geometry: PointGeometry) -> np.ndarray:
    """ξ-coefficients of the pullback of ``form`` to the reference triangles.

    With surface data in ``geometry`` the form is pulled back through φ_h = a ∘ x_h, so it is
    evaluated at a(x) against Ta J. Otherwise it is evaluated on the mesh itself.
    """
    if geometry.target is not None and geometry.tangent_map is not None:
        points, jac, normal = geometry.target, geometry.tangent_map @ geometry.jac, geometry.normal
    else:
        points, jac, normal = geometry.x, geometry.jac, geometry.normal_h
    values = form.ambient(points)
    if form.degree == 0:
        return values
    if form.degree == 1:
        return np.einsum("fqc,fqcj->fqj", values, jac)
    area = np.einsum("fqc,fqc->fq", normal, np.cross(jac[..., 0], jac[..., 1]))
    return values * area
