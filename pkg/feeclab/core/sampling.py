"""Random complexes with integer differentials and well-conditioned Grams."""

from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.core.models import ComplexRep


@dataclass(frozen=True)
class LevelLayout:
    """Block sizes of one level in standard form: boundaries, harmonics, coboundary sources."""

    boundaries: int
    harmonics: int
    sources: int

    @property
    def dim(self) -> int:
        """Total dimension of the level."""
        return self.boundaries + self.harmonics + self.sources


@dataclass(frozen=True, eq=False)
class StandardForm:
    """Integer complex D_k = U_{k+1} S_k U_k^{-1} built from a block standard form.

    In standard coordinates each level splits as (B, H, C); D_k maps the C block of level k
    onto the B block of level k+1 through the integer diagonal ``scales[k]``.
    """

    layouts: tuple[LevelLayout, ...]
    scales: tuple[np.ndarray, ...]
    unimodular: tuple[np.ndarray, ...]
    inverses: tuple[np.ndarray, ...]

    MAX_SCALE: ClassVar[int] = 3

    @property
    def top(self) -> int:
        """Index of the top level."""
        return len(self.layouts) - 1

    def standard_diff(self, k: int) -> np.ndarray:
        """D_k in standard coordinates."""
        source = self.layouts[k]
        target_dim = self.layouts[k + 1].dim if k < self.top else 0
        d = np.zeros((target_dim, source.dim))
        if source.sources:
            start = source.boundaries + source.harmonics
            d[: source.sources, start:] = np.diag(self.scales[k])
        return d

    def diff(self, k: int) -> np.ndarray:
        """D_k in the conjugated integer coordinates."""
        d = self.standard_diff(k)
        if k == self.top:
            return d
        return np.rint(self.unimodular[k + 1] @ d @ self.inverses[k])

    def complex(self, grams: list[np.ndarray]) -> ComplexRep:
        """Attach Gram matrices to the differentials."""
        return ComplexRep.from_matrices(grams, [self.diff(k) for k in range(self.top)])


def sample_layouts(
    rng: np.random.Generator, levels: int, max_dim: int, harmonics: bool = True
) -> tuple[LevelLayout, ...]:
    """Random standard-form layouts with total dimension at most ``max_dim``.

    Args:
    ----
        rng: Random generator
        levels: Number of levels m + 1
        max_dim: Upper bound on the total dimension
        harmonics: Whether harmonic blocks may be nonempty

    Returns:
    -------
        One layout per level with sources_k = boundaries_{k+1}

    """
    if levels < 1 or (levels == 1 and not harmonics):
        raise ValidationError("levels", "cannot sample a nonempty complex", levels)
    while True:
        ranks = [int(rng.integers(0, 4)) for _ in range(levels - 1)]
        extra = [int(rng.integers(0, 3)) if harmonics else 0 for _ in range(levels)]
        layouts = []
        for k in range(levels):
            boundaries = ranks[k - 1] if k > 0 else 0
            sources = ranks[k] if k < levels - 1 else 0
            layouts.append(LevelLayout(boundaries, extra[k], sources))
        total = sum(layout.dim for layout in layouts)
        if 0 < total <= max_dim and all(layout.dim > 0 for layout in layouts):
            return tuple(layouts)


def unimodular_pair(rng: np.random.Generator, n: int, steps: Optional[int] = None) -> tuple:
    """Random integer matrix with determinant ±1 and its integer inverse.

    Built from elementary row additions I + a e_i e_jᵀ with a = ±1.
    """
    u = np.eye(n)
    inverse = np.eye(n)
    if n < 2:  # noqa: PLR2004
        return u, inverse
    for _ in range(steps if steps is not None else n):
        i, j = rng.choice(n, size=2, replace=False)
        a = float(rng.choice([-1.0, 1.0]))
        u[i, :] += a * u[j, :]
        inverse[:, j] -= a * inverse[:, i]
    return u, inverse


def random_gram(rng: np.random.Generator, n: int, condition: float = 100.0) -> np.ndarray:
    """Random SPD matrix O diag(λ) Oᵀ with λ in [1, condition]."""
    if n == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    values = rng.uniform(1.0, condition, size=n)
    gram = (q * values) @ q.T
    return 0.5 * (gram + gram.T)


def sample_form(
    rng: np.random.Generator,
    levels: int = 3,
    max_dim: int = 24,
    harmonics: bool = True,
    layouts: Optional[tuple[LevelLayout, ...]] = None,
) -> StandardForm:
    """Random standard form with unimodular conjugations."""
    layouts = layouts or sample_layouts(rng, levels, max_dim, harmonics)
    scales = tuple(
        rng.choice([-1.0, 1.0], size=layout.sources)
        * rng.integers(1, StandardForm.MAX_SCALE + 1, size=layout.sources)
        for layout in layouts
    )
    pairs = [unimodular_pair(rng, layout.dim) for layout in layouts]
    return StandardForm(
        layouts=layouts,
        scales=scales,
        unimodular=tuple(p[0] for p in pairs),
        inverses=tuple(p[1] for p in pairs),
    )


def random_complex(
    rng: np.random.Generator,
    levels: int = 3,
    max_dim: int = 40,
    harmonics: bool = True,
    condition: float = 100.0,
) -> ComplexRep:
    """Random valid complex with integer differentials and Grams of condition <= ``condition``.

    Args:
    ----
        rng: Random generator
        levels: Number of levels
        max_dim: Upper bound on the total dimension
        harmonics: Whether nonzero Betti numbers are allowed
        condition: Upper bound on each Gram's condition number

    Returns:
    -------
        The sampled complex

    """
    form = sample_form(rng, levels, max_dim, harmonics)
    return form.complex([random_gram(rng, layout.dim, condition) for layout in form.layouts])
