"""Unit-simplex geometry: point validation, distances, and uniform sampling.

The feasible set is the unit simplex

    {p in R^m : p_i >= 0, sum_i p_i = 1},  m >= 2.

Points are validated, never silently repaired: a vector whose coordinates
are negative or whose sum drifts from 1 beyond ``SUM_TOL`` is rejected with
a specific error. Candidate moves inside the optimizer preserve the
coordinate sum exactly in real arithmetic, so floating-point drift stays far
below the tolerance and a violation indicates a genuine bug upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    FeasibilityError,
    NegativeCoordinate,
    SumOutOfTolerance,
    TooFewCoordinates,
)

# Absolute tolerance on |sum(p) - 1|. Deliberately tight: the optimizer's
# moves preserve the sum exactly in real arithmetic, so observed drift is
# rounding noise only.
SUM_TOL = 1e-9


@dataclass(frozen=True)
class FeasibilityTolerance:
    """Absolute tolerance on the coordinate-sum constraint."""

    sum_tol: float = SUM_TOL

    def __post_init__(self):
        if not self.sum_tol > 0:
            raise ValueError("sum_tol must be positive")


DEFAULT_TOLERANCE = FeasibilityTolerance()


def _as_coords(p) -> np.ndarray:
    """Return the float64 coordinate array behind a point-like object."""
    coords = getattr(p, "coords", p)
    return np.ascontiguousarray(coords, dtype=np.float64)


def _validate(arr: np.ndarray, tol: FeasibilityTolerance) -> None:
    if arr.ndim != 1 or arr.size < 2:
        raise TooFewCoordinates(f"need a 1-d vector with >= 2 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FeasibilityError("coordinates must be finite")
    neg = np.flatnonzero(arr < 0.0)
    if neg.size:
        i = int(neg[0])
        raise NegativeCoordinate(i, float(arr[i]))
    total = float(arr.sum())
    if abs(total - 1.0) > tol.sum_tol:
        raise SumOutOfTolerance(total, tol.sum_tol)


class SimplexPoint:
    """Immutable, validated point on the unit simplex.

    Coordinates are stored verbatim (no renormalization); construction fails
    if the vector is infeasible. Instances are safe to share across threads.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords, tol: FeasibilityTolerance = DEFAULT_TOLERANCE):
        arr = np.array(coords, dtype=np.float64, copy=True, order="C")
        _validate(arr, tol)
        arr.setflags(write=False)
        object.__setattr__(self, "_coords", arr)

    @property
    def coords(self) -> np.ndarray:
        """Read-only coordinate array."""
        return self._coords

    @property
    def dim(self) -> int:
        return self._coords.shape[0]

    def __len__(self) -> int:
        return self._coords.shape[0]

    def __getitem__(self, i):
        return self._coords[i]

    def __iter__(self):
        return iter(self._coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplexPoint):
            return NotImplemented
        return np.array_equal(self._coords, other._coords)

    def __hash__(self) -> int:
        return hash(self._coords.tobytes())

    def __repr__(self) -> str:
        inner = ", ".join(repr(float(c)) for c in self._coords)
        return f"SimplexPoint(({inner}))"


def make_point(raw, tol: FeasibilityTolerance = DEFAULT_TOLERANCE) -> SimplexPoint:
    """Validate ``raw`` and wrap it as a SimplexPoint.

    Raises TooFewCoordinates, NegativeCoordinate, or SumOutOfTolerance when
    the vector is not feasible. Coordinates are stored exactly as given.
    """
    return SimplexPoint(raw, tol)


def is_feasible(raw, tol: FeasibilityTolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff ``make_point(raw, tol)`` would succeed."""
    try:
        _validate(_as_coords(raw), tol)
    except FeasibilityError:
        return False
    return True


def squared_distance(a, b) -> float:
    """Squared Euclidean distance between two points of equal dimension."""
    ca, cb = _as_coords(a), _as_coords(b)
    if ca.shape != cb.shape:
        raise DimensionMismatch(f"dimensions differ: {ca.shape[0]} vs {cb.shape[0]}")
    delta = ca - cb
    return float(np.dot(delta, delta))


def random_simplex_point(dim: int, rng: np.random.Generator) -> SimplexPoint:
    """Draw a uniformly distributed point on the (dim-1)-simplex.

    Uses the exponential trick: g_i ~ Exp(1), p_i = g_i / sum(g), which is
    Dirichlet(1, ..., 1), i.e. the flat distribution on the simplex.
    Deterministic for a given generator state.
    """
    if dim < 2:
        raise TooFewCoordinates("dim must be >= 2")
    g = rng.standard_exponential(dim)
    return SimplexPoint(g / g.sum())


def uniform_point(dim: int) -> SimplexPoint:
    """The barycenter (1/m, ..., 1/m)."""
    if dim < 2:
        raise TooFewCoordinates("dim must be >= 2")
    return SimplexPoint(np.full(dim, 1.0 / dim))
