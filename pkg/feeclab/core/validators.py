"""Complex validation utilities."""

import weakref
from typing import ClassVar

import numpy as np
import scipy.sparse as sp

from feeclab.core.exceptions import ComplexError
from feeclab.core.linalg import mat_norm, min_eigenvalue
from feeclab.core.models import ComplexDiagnostics, ComplexRep, Matrix

_VALIDATED: "weakref.WeakKeyDictionary[ComplexRep, ComplexDiagnostics]" = (
    weakref.WeakKeyDictionary()
)


class ComplexValidator:
    """Checks the Hilbert-complex axioms on a finite-dimensional representation."""

    SYMMETRY_RTOL: ClassVar[float] = 1e-12
    COCHAIN_RTOL: ClassVar[float] = 1e-12

    def symmetry_defect(self, gram: Matrix) -> float:
        """Relative asymmetry ‖G − Gᵀ‖ / ‖G‖.

        Args:
        ----
            gram: Gram matrix

        Returns:
        -------
            Relative symmetry defect

        """
        scale = mat_norm(gram)
        if scale == 0:
            return 0.0
        return mat_norm(gram - gram.T) / scale

    def cochain_defect(self, rep: ComplexRep, k: int) -> float:
        """Relative defect ‖D_{k+1}D_k‖ / (‖D_{k+1}‖‖D_k‖).

        Args:
        ----
            rep: Complex
            k: Level

        Returns:
        -------
            Relative cochain defect, 0 when either map is empty

        """
        first, second = rep.diff(k), rep.diff(k + 1)
        scale = mat_norm(first) * mat_norm(second)
        if scale == 0:
            return 0.0
        product = second @ first
        if not sp.issparse(product):
            product = np.asarray(product)
        return mat_norm(product) / scale

    def validate(self, rep: ComplexRep) -> ComplexDiagnostics:
        """Report cochain defects, Gram symmetry and Gram positivity per level.

        Args:
        ----
            rep: Complex to check

        Returns:
        -------
            Diagnostics; ``valid`` is True iff every invariant holds

        """
        cached = _VALIDATED.get(rep)
        if cached is not None:
            return cached
        messages = []
        defects = tuple(self.cochain_defect(rep, k) for k in range(rep.top))
        symmetry = tuple(self.symmetry_defect(level.gram) for level in rep.levels)
        minima = tuple(min_eigenvalue(level.gram) for level in rep.levels)
        for k, defect in enumerate(defects):
            if defect > self.COCHAIN_RTOL:
                messages.append(f"D_{k + 1} D_{k} != 0 (relative defect {defect:.3e})")
        for k, (asym, low) in enumerate(zip(symmetry, minima)):
            if asym > self.SYMMETRY_RTOL:
                messages.append(f"G_{k} is not symmetric (relative defect {asym:.3e})")
            if not low > 0:
                messages.append(f"G_{k} is not positive definite (min eigenvalue {low:.3e})")
        diagnostics = ComplexDiagnostics(
            valid=not messages,
            cochain_defects=defects,
            gram_min_eigenvalues=minima,
            symmetry_defects=symmetry,
            messages=tuple(messages),
        )
        _VALIDATED[rep] = diagnostics
        return diagnostics

    def require_valid(self, rep: ComplexRep) -> None:
        """Raise unless the complex satisfies every invariant.

        Args:
        ----
            rep: Complex to check

        Raises:
        ------
            ComplexError: The complex is invalid

        """
        diagnostics = self.validate(rep)
        if not diagnostics.valid:
            raise ComplexError("Invalid complex: " + "; ".join(diagnostics.messages),
                               diagnostics.to_dict())

    def require_level(self, rep: ComplexRep, k: int, low: int = 0) -> None:
        """Raise unless ``low <= k <= m``."""
        if not low <= k <= rep.top:
            raise ComplexError(f"Level {k} outside {low}..{rep.top}", {"level": k})

    def require_vector(self, rep: ComplexRep, k: int, vector: np.ndarray) -> None:
        """Raise unless the vector has length n_k."""
        if np.shape(vector) != (rep.dim(k),):
            raise ComplexError(
                f"Expected a vector of length {rep.dim(k)} at level {k}",
                {"level": k, "shape": list(np.shape(vector))},
            )


def validate(rep: ComplexRep) -> ComplexDiagnostics:
    """Validate a complex with the default validator."""
    return ComplexValidator().validate(rep)
