"""Exception types shared across the package."""


class SimplexOptError(Exception):
    """Base class for all errors raised by simplexopt."""


class FeasibilityError(SimplexOptError):
    """A vector is not a valid point on the unit simplex."""


class TooFewCoordinates(FeasibilityError):
    """Simplex points need at least two coordinates."""


class NegativeCoordinate(FeasibilityError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"coordinate {index} is negative ({value!r})")


class SumOutOfTolerance(FeasibilityError):
    def __init__(self, actual_sum: float, tol: float):
        self.actual_sum = actual_sum
        self.tol = tol
        super().__init__(f"coordinate sum {actual_sum!r} deviates from 1 by more than {tol!r}")


class DimensionMismatch(SimplexOptError):
    """Two points do not share the same dimension."""


class NonFiniteObjective(SimplexOptError):
    """An objective evaluation returned NaN or infinity.

    ``index`` is the position of the offending proposal within the batch,
    or None when the incumbent evaluation itself was non-finite.
    """

    def __init__(self, index=None, message=None):
        self.index = index
        super().__init__(message or f"objective returned a non-finite value (proposal index {index})")


class AllCoordinatesInsignificant(SimplexOptError):
    """Sparsity cleanup found no coordinate above the sparsity threshold.

    Unreachable for thresholds below 1/m on feasible points; raised to
    surface a misconfigured threshold instead of dividing by zero.
    """


class UnknownBenchmark(SimplexOptError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"unknown benchmark {name!r}; known: {', '.join(sorted(known))}")


class UnsupportedDimension(SimplexOptError):
    def __init__(self, name: str, dim, reason: str):
        self.name = name
        self.dim = dim
        super().__init__(f"benchmark {name!r} does not support dim={dim}: {reason}")
