"""feeclab data models for finite-dimensional Hilbert complexes."""

from dataclasses import dataclass, field
from typing import Any, ClassVar, Optional, Union

import numpy as np
import scipy.sparse as sp

from feeclab.core.exceptions import ValidationError

Matrix = Union[np.ndarray, sp.spmatrix]


def _as_matrix(value: Any, name: str) -> Matrix:
    if sp.issparse(value):
        return sp.csr_matrix(value, dtype=float)
    array = np.asarray(value, dtype=float)
    if array.ndim != 2:  # noqa: PLR2004
        raise ValidationError(name, "must be a two-dimensional matrix", array.shape)
    return array


def _to_rows(matrix: Matrix) -> list[list[float]]:
    dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
    return [[float(x) for x in row] for row in dense]


@dataclass(frozen=True, eq=False)
class Level:
    """One level W^k of a complex: its Gram matrix and the differential to level k+1."""

    dim: int
    gram: Matrix
    diff: Matrix

    def __post_init__(self) -> None:
        """Validate matrix shapes after initialization."""
        gram = _as_matrix(self.gram, "gram")
        diff = _as_matrix(self.diff, "diff")
        if gram.shape != (self.dim, self.dim):
            raise ValidationError("gram", f"expected shape ({self.dim}, {self.dim})", gram.shape)
        if diff.shape[1] != self.dim:
            raise ValidationError("diff", f"expected {self.dim} columns", diff.shape)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "diff", diff)

    def to_dict(self) -> dict[str, Any]:
        """Convert level to dictionary.

        Returns
        -------
            Dictionary representation of the level

        """
        data: dict[str, Any] = {"dim": self.dim, "gram": _to_rows(self.gram)}
        if self.diff.shape[0] > 0:
            data["diff"] = _to_rows(self.diff)
        return data


@dataclass(frozen=True, eq=False)
class ComplexRep:
    """A finite-dimensional Hilbert cochain complex stored as Grams and differentials."""

    levels: tuple[Level, ...]

    def __post_init__(self) -> None:
        """Validate level chaining after initialization."""
        levels = tuple(self.levels)
        if not levels:
            raise ValidationError("levels", "a complex needs at least one level")
        for k, level in enumerate(levels):
            expected = levels[k + 1].dim if k + 1 < len(levels) else 0
            if level.diff.shape[0] != expected:
                raise ValidationError(
                    "diff", f"level {k} must map into dimension {expected}", level.diff.shape
                )
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_matrices(cls, grams: list[Any], diffs: list[Any]) -> "ComplexRep":
        """Build a complex from per-level Grams and the differentials between them.

        Args:
        ----
            grams: Gram matrices G_0..G_m
            diffs: Differentials D_0..D_{m-1}; D_k maps level k to level k+1

        Returns:
        -------
            The assembled complex

        """
        if len(diffs) != len(grams) - 1:
            raise ValidationError("diffs", "need exactly one differential per adjacent pair")
        levels = []
        for k, gram in enumerate(grams):
            gram = gram if sp.issparse(gram) else np.asarray(gram, dtype=float)
            n = gram.shape[0]
            diff = diffs[k] if k < len(diffs) else np.zeros((0, n))
            levels.append(Level(dim=n, gram=gram, diff=diff))
        return cls(levels=tuple(levels))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ComplexRep":
        """Build a complex from its JSON document.

        Args:
        ----
            data: Document of the form {"levels": [{"dim", "gram", "diff"}]}

        Returns:
        -------
            The complex

        """
        raw = data.get("levels")
        if not raw:
            raise ValidationError("levels", "document has no levels")
        dims = [int(entry["dim"]) for entry in raw]
        levels = []
        for k, entry in enumerate(raw):
            n = dims[k]
            gram = np.asarray(entry["gram"], dtype=float).reshape(n, n)
            rows = dims[k + 1] if k + 1 < len(dims) else 0
            diff_data = entry.get("diff")
            if diff_data is None:
                diff = np.zeros((rows, n))
            else:
                diff = np.asarray(diff_data, dtype=float).reshape(rows, n)
            levels.append(Level(dim=n, gram=gram, diff=diff))
        return cls(levels=tuple(levels))

    @property
    def top(self) -> int:
        """Index m of the top level."""
        return len(self.levels) - 1

    @property
    def dims(self) -> tuple[int, ...]:
        """Dimensions n_0..n_m."""
        return tuple(level.dim for level in self.levels)

    @property
    def total_dim(self) -> int:
        """Sum of all level dimensions."""
        return sum(self.dims)

    @property
    def is_sparse(self) -> bool:
        """Whether any level stores sparse matrices."""
        return any(sp.issparse(lv.gram) or sp.issparse(lv.diff) for lv in self.levels)

    def dim(self, k: int) -> int:
        """Dimension of level k, zero outside 0..m."""
        return self.levels[k].dim if 0 <= k <= self.top else 0

    def gram(self, k: int) -> Matrix:
        """Gram matrix G_k (empty outside 0..m)."""
        if 0 <= k <= self.top:
            return self.levels[k].gram
        return np.zeros((0, 0))

    def diff(self, k: int) -> Matrix:
        """Differential D_k from level k to k+1, with the empty conventions at the ends."""
        if 0 <= k <= self.top:
            return self.levels[k].diff
        if k == -1:
            return np.zeros((self.dim(0), 0))
        return np.zeros((0, 0))

    def with_grams(self, grams: list[Matrix]) -> "ComplexRep":
        """Same differentials, new inner products."""
        return ComplexRep(
            levels=tuple(
                Level(dim=lv.dim, gram=g, diff=lv.diff) for lv, g in zip(self.levels, grams)
            )
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert complex to its JSON document.

        Returns
        -------
            Dictionary representation of the complex

        """
        return {"levels": [level.to_dict() for level in self.levels]}


@dataclass(frozen=True)
class ComplexDiagnostics:
    """Validation report for a complex."""

    valid: bool
    cochain_defects: tuple[float, ...]
    gram_min_eigenvalues: tuple[float, ...]
    symmetry_defects: tuple[float, ...]
    messages: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        """Convert diagnostics to dictionary.

        Returns
        -------
            Dictionary representation of diagnostics

        """
        return {
            "valid": self.valid,
            "cochain_defects": list(self.cochain_defects),
            "gram_min_eigenvalues": list(self.gram_min_eigenvalues),
            "symmetry_defects": list(self.symmetry_defects),
            "messages": list(self.messages),
        }


@dataclass(frozen=True, eq=False)
class HodgeSplit:
    """Strong Hodge decomposition w = boundary + harmonic + coexact."""

    boundary: np.ndarray
    harmonic: np.ndarray
    coexact: np.ndarray

    def total(self) -> np.ndarray:
        """Recombine the three components."""
        return self.boundary + self.harmonic + self.coexact

    def to_dict(self) -> dict[str, Any]:
        """Convert split to dictionary.

        Returns
        -------
            Dictionary representation of the split

        """
        return {
            "boundary": self.boundary.tolist(),
            "harmonic": self.harmonic.tolist(),
            "coexact": self.coexact.tolist(),
        }


@dataclass(frozen=True, eq=False)
class PoincareResult:
    """Poincaré constant with its extremal vector."""

    constant: float
    achiever: Optional[np.ndarray]
    degenerate: bool = False

    def to_dict(self) -> dict[str, Any]:
        """Convert result to dictionary.

        Returns
        -------
            Dictionary representation of the result

        """
        return {
            "constant": self.constant,
            "achiever": None if self.achiever is None else self.achiever.tolist(),
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True, eq=False)
class MixedSolution:
    """Solution (σ, u, p) of a mixed Hodge-Laplace problem."""

    sigma: np.ndarray
    u: np.ndarray
    p_coords: np.ndarray
    p: np.ndarray
    residual: float
    MAX_RESIDUAL: ClassVar[float] = 1e-9

    @property
    def converged(self) -> bool:
        """Whether the residual meets the solver tolerance."""
        return self.residual <= self.MAX_RESIDUAL

    def to_dict(self) -> dict[str, Any]:
        """Convert solution to dictionary.

        Returns
        -------
            Dictionary representation of the solution

        """
        return {
            "sigma": self.sigma.tolist(),
            "u": self.u.tolist(),
            "p_coords": self.p_coords.tolist(),
            "residual": self.residual,
        }


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Lowest nonzero eigenpairs of the mixed Hodge-Laplace eigenproblem."""

    eigenvalues: np.ndarray
    sigmas: np.ndarray
    us: np.ndarray
    orthonormality_defect: float
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict[str, Any]:
        """Convert eigen result to dictionary.

        Returns
        -------
            Dictionary representation of the eigen result

        """
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "orthonormality_defect": self.orthonormality_defect,
            "residuals": self.residuals.tolist(),
        }
