"""Benchmark objectives with known optima, in minimization form.

Seven families: two fixed-dimension multimodal surfaces on the simplex
(gaussian_max, easom), one linearly-constrained trigonometric surface
(sin_nonconvex), one scalable vertex-seeking polynomial (power4), and the
classic Ackley / Griewank / Rastrigin functions carried from their hypercube
domains onto the simplex by the embedding in :mod:`simplexopt.transforms`.
Maximization families are stored negated so a single minimizing optimizer
contract covers everything.

All functions reduce the last axis and accept both single points (m,) and
batches (n, m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import UnknownBenchmark, UnsupportedDimension
from .gcdvss import Objective
from .simplex import SimplexPoint
from .transforms import (
    HypercubeDomain,
    LinearConstraint,
    hypercube_embed,
    negate,
    with_slack,
    wrap_linear_objective,
)

SUCCESS_THRESHOLD = 1e-2  # |achieved - optimum| below this counts as success

_GAUSS_NORM = 2.0 * np.pi * 0.1  # normalizing constant of N(mu, 0.1*I) in 2-d
_MU_A = np.array([0.25, 0.75])
_MU_B = np.array([0.8, 0.2])


def gaussian_max(p):
    """Negated max of two scaled bivariate normal densities (dim 2).

    Weights 8 and 5, means (0.25, 0.75) and (0.8, 0.2), covariance 0.1*I.
    Global minimum -8/(2*pi*0.1) at the first mean; the second mean is a
    local trap.
    """
    p = np.asarray(p, dtype=np.float64)
    d_a = ((p - _MU_A) ** 2).sum(axis=-1)
    d_b = ((p - _MU_B) ** 2).sum(axis=-1)
    return -np.maximum(8.0 * np.exp(-5.0 * d_a), 5.0 * np.exp(-5.0 * d_b)) / _GAUSS_NORM


def modified_easom(p):
    """Negated cosine-product bump on the 3-simplex.

    cos(6*pi*p_i) products under a Gaussian envelope centered at the
    barycenter; global minimum -1 at (1/3, 1/3, 1/3).
    """
    p = np.asarray(p, dtype=np.float64)
    cosines = np.cos(6.0 * np.pi * p).prod(axis=-1)
    envelope = np.exp(-((3.0 * np.pi * p - np.pi) ** 2).sum(axis=-1))
    return -(cosines * envelope)


def _sin_xy(x):
    # maximize sin(7*pi*x/4) + sin(7*pi*y/4) - 2*(x - y)^2  s.t. 3x + 2y <= 6
    x = np.asarray(x, dtype=np.float64)
    u, v = x[..., 0], x[..., 1]
    return np.sin(7.0 * np.pi * u / 4.0) + np.sin(7.0 * np.pi * v / 4.0) - 2.0 * (u - v) ** 2


_SIN_CONSTRAINT = LinearConstraint((3.0, 2.0), 6.0)

# Two-stage reduction: scale 3x + 2y <= 6 onto sum(y) <= 1, then add a slack
# coordinate; minimization form of the wrapped surface on the 3-simplex.
sin_nonconvex = negate(with_slack(wrap_linear_objective(_sin_xy, _SIN_CONSTRAINT)))
sin_nonconvex.__name__ = "sin_nonconvex"
sin_nonconvex.__doc__ = (
    "Negated sin(7*pi*x/4) + sin(7*pi*y/4) - 2*(x-y)^2 carried onto the "
    "3-simplex (scaled linear constraint plus slack). Global minimum -2 at "
    "the image of (x, y) = (2/7, 2/7)."
)


def power4(p):
    """Negated sum of i * p_i^4 with 1-based weights (any dimension).

    Every vertex is a local minimum; the global minimum -m sits at the last
    vertex (0, ..., 0, 1).
    """
    p = np.asarray(p, dtype=np.float64)
    weights = np.arange(1, p.shape[-1] + 1, dtype=np.float64)
    return -(weights * p**4).sum(axis=-1)


def ackley_cube(x):
    """Ackley function in its standard averaged form; minimum 0 at 0."""
    x = np.asarray(x, dtype=np.float64)
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.mean(x**2, axis=-1)))
        - np.exp(np.mean(np.cos(2.0 * np.pi * x), axis=-1))
        + np.e
        + 20.0
    )


def ackley_cube_unaveraged(x):
    """Ackley variant with 0.5 * sum(...) inside the exponentials.

    Kept for reference: it coincides with :func:`ackley_cube` only at d=2,
    and its minimum at the origin is e - e^(d/2) rather than 0, so the
    registry uses the averaged form.
    """
    x = np.asarray(x, dtype=np.float64)
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(0.5 * (x**2).sum(axis=-1)))
        - np.exp(0.5 * np.cos(2.0 * np.pi * x).sum(axis=-1))
        + np.e
        + 20.0
    )


def griewank_cube(x):
    """Griewank function; minimum 0 at 0."""
    x = np.asarray(x, dtype=np.float64)
    roots = np.sqrt(np.arange(1, x.shape[-1] + 1, dtype=np.float64))
    return (x**2).sum(axis=-1) / 4000.0 - np.cos(x / roots).prod(axis=-1) + 1.0


def rastrigin_cube(x):
    """Rastrigin function; minimum 0 at 0."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    return 10.0 * d + (x**2 - 10.0 * np.cos(2.0 * np.pi * x)).sum(axis=-1)


_CUBE_DOMAINS = {
    "ackley": (ackley_cube, -5.0, 5.0),
    "griewank": (griewank_cube, -500.0, 500.0),
    "rastrigin": (rastrigin_cube, -5.0, 5.0),
}


def _embedded(name: str, d: int):
    fn, lower, upper = _CUBE_DOMAINS[name]
    return hypercube_embed(HypercubeDomain(lower, upper, d)).wrap(fn)


def ackley_simplex(y):
    """Ackley on the simplex: d = len(y) - 1 cube coordinates plus slack."""
    y = np.asarray(y, dtype=np.float64)
    return _embedded("ackley", y.shape[-1] - 1)(y)


def griewank_simplex(y):
    """Griewank on the simplex: d = len(y) - 1 cube coordinates plus slack."""
    y = np.asarray(y, dtype=np.float64)
    return _embedded("griewank", y.shape[-1] - 1)(y)


def rastrigin_simplex(y):
    """Rastrigin on the simplex: d = len(y) - 1 cube coordinates plus slack."""
    y = np.asarray(y, dtype=np.float64)
    return _embedded("rastrigin", y.shape[-1] - 1)(y)


@dataclass(frozen=True)
class BenchmarkSpec:
    """A registered benchmark: minimization objective plus optimum metadata."""

    name: str
    dim: int            # family dimension parameter (n for power4, d for cube families)
    dim_simplex: int    # number of simplex coordinates the objective expects
    fn: Callable
    known_optimum_value: float
    known_optimizer: Optional[SimplexPoint]
    success_threshold: float = SUCCESS_THRESHOLD

    def fresh_objective(self) -> Objective:
        """A new counting Objective around the benchmark function."""
        return Objective(self.fn, name=f"{self.name}[{self.dim}]")

    @property
    def objective(self) -> Objective:
        return self.fresh_objective()


def _cube_optimizer(d: int) -> SimplexPoint:
    coords = np.append(np.full(d, 1.0 / (2 * d)), 0.5)
    return SimplexPoint(coords)


BENCHMARK_NAMES = ("gaussian_max", "easom", "sin_nonconvex", "power4", "ackley", "griewank", "rastrigin")

_FIXED_DIMS = {"gaussian_max": 2, "easom": 3, "sin_nonconvex": 3}


def registry_lookup(name: str, dim: Optional[int] = None) -> BenchmarkSpec:
    """Resolve a benchmark by name and dimension.

    Fixed-dimension families (gaussian_max: 2, easom: 3, sin_nonconvex: 3)
    accept ``dim=None`` or their own dimension. power4 takes the number of
    simplex coordinates n >= 2; ackley/griewank/rastrigin take the cube
    dimension d >= 1 and run on d+1 simplex coordinates.
    """
    if name not in BENCHMARK_NAMES:
        raise UnknownBenchmark(name, BENCHMARK_NAMES)

    if name in _FIXED_DIMS:
        fixed = _FIXED_DIMS[name]
        if dim is not None and dim != fixed:
            raise UnsupportedDimension(name, dim, f"fixed-dimension family (dim {fixed})")
        dim = fixed

    if name == "gaussian_max":
        return BenchmarkSpec(
            name, 2, 2, gaussian_max, -8.0 / _GAUSS_NORM, SimplexPoint((0.25, 0.75))
        )
    if name == "easom":
        third = 1.0 / 3.0
        return BenchmarkSpec(name, 3, 3, modified_easom, -1.0, SimplexPoint((third, third, third)))
    if name == "sin_nonconvex":
        y1, y2 = (2.0 / 7.0) * 3.0 / 6.0, (2.0 / 7.0) * 2.0 / 6.0
        optimizer = SimplexPoint((y1, y2, 1.0 - y1 - y2))
        return BenchmarkSpec(name, 3, 3, sin_nonconvex, -2.0, optimizer)
    if name == "power4":
        if dim is None or dim < 2:
            raise UnsupportedDimension(name, dim, "needs a simplex dimension n >= 2")
        vertex = np.zeros(dim)
        vertex[-1] = 1.0
        return BenchmarkSpec(name, dim, dim, power4, -float(dim), SimplexPoint(vertex))

    # cube-embedded families
    if dim is None or dim < 1:
        raise UnsupportedDimension(name, dim, "needs a cube dimension d >= 1")
    fn = _embedded(name, dim)
    fn.__name__ = f"{name}_simplex"
    return BenchmarkSpec(name, dim, dim + 1, fn, 0.0, _cube_optimizer(dim))
