"""feeclab data models for morphisms, crime pairs and their audit records."""

from dataclasses import dataclass
from typing import Any, ClassVar, Optional

import numpy as np

from feeclab.core.exceptions import MorphismError
from feeclab.core.models import ComplexRep


@dataclass(frozen=True, eq=False)
class ComplexMorphism:
    """Per-level maps F_k from ``source`` to ``target`` commuting with the differentials."""

    source: ComplexRep
    target: ComplexRep
    maps: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        """Validate level counts and map shapes after initialization."""
        if self.source.top != self.target.top:
            raise MorphismError("Source and target have different level counts")
        maps = tuple(np.asarray(f, dtype=float) for f in self.maps)
        if len(maps) != self.source.top + 1:
            raise MorphismError(f"Expected {self.source.top + 1} maps, got {len(maps)}")
        for k, f in enumerate(maps):
            expected = (self.target.dim(k), self.source.dim(k))
            if f.shape != expected:
                raise MorphismError(
                    f"Map at level {k} has shape {f.shape}, expected {expected}", k
                )
        object.__setattr__(self, "maps", maps)

    @classmethod
    def identity(cls, rep: ComplexRep) -> "ComplexMorphism":
        """Identity morphism of a complex."""
        return cls(source=rep, target=rep, maps=tuple(np.eye(n) for n in rep.dims))

    def scaled(self, factor: float) -> "ComplexMorphism":
        """Same morphism with every map multiplied by ``factor``."""
        return ComplexMorphism(self.source, self.target, tuple(factor * f for f in self.maps))

    def after(self, first: "ComplexMorphism") -> "ComplexMorphism":
        """Composition self ∘ first."""
        if first.target.dims != self.source.dims:
            raise MorphismError("Composition of morphisms with mismatched complexes")
        return ComplexMorphism(
            source=first.source,
            target=self.target,
            maps=tuple(g @ f for g, f in zip(self.maps, first.maps)),
        )


@dataclass(frozen=True)
class MorphismDiagnostics:
    """Commutation defects and operator norms of a morphism."""

    commutation_defects: tuple[float, ...]
    w_norms: tuple[float, ...]
    v_norms: tuple[float, ...]
    MAX_DEFECT: ClassVar[float] = 1e-12

    @property
    def valid(self) -> bool:
        """Whether every square of the diagram commutes."""
        return all(d <= self.MAX_DEFECT for d in self.commutation_defects)

    def to_dict(self) -> dict[str, Any]:
        """Convert diagnostics to dictionary.

        Returns
        -------
            Dictionary representation of diagnostics

        """
        return {
            "valid": self.valid,
            "commutation_defects": list(self.commutation_defects),
            "w_norms": list(self.w_norms),
            "v_norms": list(self.v_norms),
        }


@dataclass(frozen=True, eq=False)
class CrimePair:
    """A true complex, an approximating complex, and morphisms i_h and π_h with π_h∘i_h = id."""

    true_complex: ComplexRep
    approx_complex: ComplexRep
    injection: ComplexMorphism
    projection: ComplexMorphism
    MAX_RETRACTION_DEFECT: ClassVar[float] = 1e-12

    def __post_init__(self) -> None:
        """Validate morphism endpoints and the retraction property."""
        if self.injection.source.dims != self.approx_complex.dims:
            raise MorphismError("Injection must start at the approximating complex")
        if self.injection.target.dims != self.true_complex.dims:
            raise MorphismError("Injection must end at the true complex")
        if self.projection.source.dims != self.true_complex.dims:
            raise MorphismError("Projection must start at the true complex")
        if self.projection.target.dims != self.approx_complex.dims:
            raise MorphismError("Projection must end at the approximating complex")
        for k, defect in enumerate(self.retraction_defects()):
            if defect > self.MAX_RETRACTION_DEFECT:
                raise MorphismError(f"π_h∘i_h differs from identity by {defect:.3e}", k)

    @property
    def top(self) -> int:
        """Index of the top level."""
        return self.approx_complex.top

    def retraction_defects(self) -> tuple[float, ...]:
        """max |π_k i_k − I| per level, relative to the map sizes."""
        defects = []
        for p, i in zip(self.projection.maps, self.injection.maps):
            if i.size == 0:
                defects.append(0.0)
                continue
            scale = max(1.0, float(np.abs(p).max()) * float(np.abs(i).max()))
            defects.append(float(np.abs(p @ i - np.eye(i.shape[1])).max()) / scale)
        return tuple(defects)

    def to_dict(self) -> dict[str, Any]:
        """Convert pair to dictionary.

        Returns
        -------
            Dictionary with both complexes and the morphism matrices

        """
        return {
            "true_complex": self.true_complex.to_dict(),
            "approx_complex": self.approx_complex.to_dict(),
            "injection": [f.tolist() for f in self.injection.maps],
            "projection": [f.tolist() for f in self.projection.maps],
        }


@dataclass(frozen=True, eq=False)
class JacobianOp:
    """J_k = G_{h,k}^{-1} Ĝ_k with Ĝ_k the pulled-back true inner product."""

    level: int
    deviation: float
    true_gram: Any
    gram: Any
    matrix: Optional[np.ndarray] = None
    spectrum: tuple[float, float] = (1.0, 1.0)

    def to_dict(self) -> dict[str, Any]:
        """Convert Jacobian summary to dictionary.

        Returns
        -------
            Level, deviation and spectral range

        """
        return {"level": self.level, "deviation": self.deviation, "spectrum": list(self.spectrum)}


@dataclass(frozen=True)
class CrimeReport:
    """Error budget of a discrete solution measured against the true solution."""

    lhs: float
    best_approx: float
    data_error: float
    geometry_error: float
    mu: float
    ratio: float
    perturbation: float = 0.0
    perturbation_constant: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        """Convert report to dictionary.

        Returns
        -------
            Dictionary with the fixed report field names

        """
        return {
            "lhs": self.lhs,
            "best_approx": self.best_approx,
            "data_error": self.data_error,
            "geometry_error": self.geometry_error,
            "mu": self.mu,
            "ratio": self.ratio,
            "perturbation": self.perturbation,
            "perturbation_constant": self.perturbation_constant,
        }


@dataclass(frozen=True)
class ProjectionAudit:
    """Measured terms of the quasi-optimality bound for a data projection Π_h."""

    lhs: float
    geometry_term: float
    best_approx: float
    constant: float

    @property
    def bound(self) -> float:
        """Right-hand side C (‖I − J_h‖‖f‖ + inf ‖f − i_hφ‖)."""
        return self.constant * (self.geometry_term + self.best_approx)

    @property
    def violated(self) -> bool:
        """Whether the measured left side exceeds the bound beyond round-off."""
        return self.lhs > self.bound * (1 + 1e-9) + 1e-12

    def to_dict(self) -> dict[str, Any]:
        """Convert audit to dictionary.

        Returns
        -------
            Dictionary representation of the audit

        """
        return {
            "lhs": self.lhs,
            "geometry_term": self.geometry_term,
            "best_approx": self.best_approx,
            "constant": self.constant,
            "bound": self.bound,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class PoincareAudit:
    """Discrete Poincaré constant against c_P ‖π_h^k‖_V ‖i_h^{k+1}‖_V."""

    measured: float
    bound: float
    degenerate: bool = False

    @property
    def violated(self) -> bool:
        """Whether the measured constant exceeds the bound beyond round-off."""
        return not self.degenerate and self.measured > self.bound * (1 + 1e-8) + 1e-12

    def to_dict(self) -> dict[str, Any]:
        """Convert audit to dictionary.

        Returns
        -------
            Dictionary representation of the audit

        """
        return {
            "measured": self.measured,
            "bound": self.bound,
            "degenerate": self.degenerate,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class CohomologyVerdict:
    """Gap hypothesis and bijectivity of the induced map on harmonic spaces at one level."""

    level: int
    gap: float
    hypothesis: bool
    bijective: bool

    @property
    def violated(self) -> bool:
        """The hypothesis holds but the induced map is not an isomorphism."""
        return self.hypothesis and not self.bijective

    def to_dict(self) -> dict[str, Any]:
        """Convert verdict to dictionary.

        Returns
        -------
            Dictionary representation of the verdict

        """
        return {
            "level": self.level,
            "gap": self.gap,
            "hypothesis": self.hypothesis,
            "applicable": self.hypothesis,
            "bijective": self.bijective,
            "violated": self.violated,
        }


@dataclass(frozen=True, eq=False)
class EigenComparison:
    """True, discrete and modified eigenvalues with the solution-operator gap."""

    true_values: np.ndarray
    discrete_values: np.ndarray
    modified_values: np.ndarray
    operator_gap: float
    deviation: float

    def to_dict(self) -> dict[str, Any]:
        """Convert comparison to dictionary.

        Returns
        -------
            Eigenvalue triples and gap measurements

        """
        return {
            "triples": [
                [float(a), float(b), float(c)]
                for a, b, c in zip(self.true_values, self.discrete_values, self.modified_values)
            ],
            "operator_gap": self.operator_gap,
            "deviation": self.deviation,
        }
