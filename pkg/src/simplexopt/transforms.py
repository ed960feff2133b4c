"""Reductions of related constrained problems to the unit-simplex form.

Three bridges are provided:

* an inequality constraint sum(p) <= 1 becomes an equality on the
  (m+1)-coordinate simplex through a slack coordinate the objective ignores;
* a single linear constraint sum(a_i x_i) = K with positive coefficients
  becomes the simplex through the change of variables y_i = a_i x_i / K;
* a hypercube domain [l, u]^d embeds into the (d+1)-coordinate simplex via
  the affine map y_i = (x_i - l) / (d (u - l)) plus a slack coordinate.

All combinators accept either a bare callable or an :class:`Objective` and
return the same kind. Callables are expected to reduce the last axis, so
vectorized batch evaluation passes through every wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .gcdvss import Objective


def _unwrap(objective):
    """Return (callable, rewrap) where rewrap restores the input kind."""
    if isinstance(objective, Objective):
        vectorized = objective.vectorized
        name = objective.name
        return objective.fn, lambda fn, suffix: Objective(fn, name=f"{name}{suffix}", vectorized=vectorized)
    return objective, lambda fn, suffix: fn


@dataclass(frozen=True)
class LinearConstraint:
    """A single constraint sum(coefficients * x) = rhs, all entries positive."""

    coefficients: tuple[float, ...]
    rhs: float

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs or any(a <= 0 for a in coeffs):
            raise ValueError("all coefficients must be positive")
        if not self.rhs > 0:
            raise ValueError("rhs must be positive")

    @property
    def dim(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class HypercubeDomain:
    """The box [lower, upper]^dim."""

    lower: float
    upper: float
    dim: int

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ValueError("need upper > lower")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


class HypercubeEmbedding(NamedTuple):
    forward: Callable  # x -> y, elementwise
    inverse: Callable  # y -> x, elementwise
    wrap: Callable     # objective on the cube -> objective on the simplex


def with_slack(objective):
    """Lift an objective over {p >= 0, sum(p) <= 1} to the simplex one
    dimension up; the added last coordinate never affects the value."""
    fn, rewrap = _unwrap(objective)

    def slacked(y):
        y = np.asarray(y, dtype=np.float64)
        return fn(y[..., :-1])

    return rewrap(slacked, "+slack")


def linear_to_simplex(constraint: LinearConstraint):
    """Mutually inverse maps between {x >= 0, sum(a x) = K} and the simplex:
    forward(x) = a*x/K and inverse(y) = K*y/a."""
    a = np.asarray(constraint.coefficients)
    rhs = constraint.rhs

    def forward(x):
        return np.asarray(x, dtype=np.float64) * a / rhs

    def inverse(y):
        return rhs * np.asarray(y, dtype=np.float64) / a

    return forward, inverse


def wrap_linear_objective(objective, constraint: LinearConstraint):
    """Objective on the simplex equivalent to ``objective`` on the
    linearly constrained x-space: h(y) = f(K*y/a)."""
    fn, rewrap = _unwrap(objective)
    _, inverse = linear_to_simplex(constraint)

    def on_simplex(y):
        return fn(inverse(y))

    return rewrap(on_simplex, "+linear")


def hypercube_embed(domain: HypercubeDomain) -> HypercubeEmbedding:
    """Embedding of [l, u]^d into the (d+1)-coordinate simplex.

    ``forward`` maps [l, u] onto [0, 1/d] coordinate-wise; ``inverse`` is its
    (affine, total) inverse, applied as-is even where a simplex coordinate
    exceeds 1/d, which extends the wrapped objective to the whole simplex.
    ``wrap(f)`` evaluates f at the inverse image of the first d coordinates
    and ignores the slack coordinate.
    """
    lower, scale, d = domain.lower, domain.dim * (domain.upper - domain.lower), domain.dim

    def forward(x):
        return (np.asarray(x, dtype=np.float64) - lower) / scale

    def inverse(y):
        return lower + scale * np.asarray(y, dtype=np.float64)

    def wrap(objective):
        fn, rewrap = _unwrap(objective)

        def on_simplex(y):
            y = np.asarray(y, dtype=np.float64)
            return fn(inverse(y[..., :d]))

        return rewrap(on_simplex, "+cube")

    return HypercubeEmbedding(forward, inverse, wrap)


def negate(objective):
    """Pointwise negation; bridges maximization problems to the minimizing
    optimizer (argmin of the result is argmax of the input)."""
    fn, rewrap = _unwrap(objective)

    def negated(x):
        return -fn(x)

    return rewrap(negated, "+negated")
