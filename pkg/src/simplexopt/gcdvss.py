"""Greedy coordinate descent with varying step size (GCDVSS) on the simplex.

The optimizer is organized as an outer driver over *runs*. Each run iterates
from a start point: per iteration it proposes 2m candidate moves (each
coordinate, both directions, with per-move step backoff until feasible),
greedily accepts the best strictly-improving candidate, zeroes coordinates
below the sparsity threshold (redistributing their mass), and decays the
global step size by ``rho`` whenever consecutive iterates stagnate. A run
ends when the global step falls to the threshold ``phi`` (or the iteration
cap is hit). The first run decays steps by ``rho1``; every later run
restarts from the previous solution with the gentler rate ``rho2`` and full
initial step, which lets the driver hop out of local minima. The driver
stops when two consecutive runs return the exact same solution.

All candidate evaluations within an iteration are independent: they may be
computed concurrently or in one vectorized batch, and the greedy selection
is a deterministic reduction over the gathered values, so the iterate
sequence does not depend on evaluation scheduling.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from ._moves_py import BOUNDARY_SLACK
from .errors import AllCoordinatesInsignificant, NonFiniteObjective
from .moves import propose_moves
from .simplex import SUM_TOL, SimplexPoint, _as_coords, squared_distance

PLUS = "plus"
MINUS = "minus"

STEP_THRESHOLD = "step_threshold"
ITERATION_CAP = "iteration_cap"

_PRESET_OVERRIDES = {
    "default": {},
    "pl1": {"phi": 1e-5, "sparsity": 1e-5},
    "pl2": {"phi": 1e-7, "sparsity": 1e-7},
}


@dataclass(frozen=True)
class TuningParams:
    """Tuning parameters and loop limits of the optimizer.

    ``s_initial`` is the initial global step size, ``rho1``/``rho2`` the
    step decay rates of the first and of all later runs, ``phi`` the step
    size threshold that ends a run, and ``sparsity`` the threshold below
    which coordinates count as insignificant (the CLI exposes it as
    ``--lambda``). ``tol_fun`` is the squared-distance stagnation threshold
    that triggers step decay.
    """

    s_initial: float = 1.0
    rho1: float = 2.0
    rho2: float = 1.05
    phi: float = 1e-3
    sparsity: float = 1e-3
    max_iter: int = 50_000
    max_runs: int = 1_000
    tol_fun: float = 1e-15

    def __post_init__(self):
        if not (self.s_initial > self.phi > 0):
            raise ValueError("need s_initial > phi > 0")
        if not (self.rho1 > 1 and self.rho2 > 1):
            raise ValueError("step decay rates must exceed 1")
        if self.sparsity < 0:
            raise ValueError("sparsity threshold must be >= 0")
        if not self.tol_fun > 0:
            raise ValueError("tol_fun must be positive")
        if self.max_iter < 1 or self.max_runs < 1:
            raise ValueError("max_iter and max_runs must be >= 1")

    @classmethod
    def preset(cls, name: str, **overrides) -> "TuningParams":
        """Named presets: 'default', and the tightened 'pl1' / 'pl2'
        precision levels (phi = sparsity = 1e-5 and 1e-7)."""
        try:
            base = _PRESET_OVERRIDES[name]
        except KeyError:
            raise ValueError(f"unknown preset {name!r}; expected one of {sorted(_PRESET_OVERRIDES)}") from None
        return replace(cls(**base), **overrides) if overrides else cls(**base)


class Objective:
    """Counting wrapper around a pure objective function.

    ``fn`` maps coordinate arrays to values. With ``vectorized=True``
    (default) it must accept arrays of shape (..., m) and reduce the last
    axis, which lets the optimizer evaluate a whole batch of candidates in
    one call; otherwise it is called once per 1-d row. The evaluation
    counter increases by one per evaluated point and is safe to read and
    update from concurrent evaluations.
    """

    def __init__(self, fn: Callable, *, name: Optional[str] = None, vectorized: bool = True):
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "objective")
        self.vectorized = vectorized
        self._lock = threading.Lock()
        self._count = 0

    @property
    def evaluations(self) -> int:
        return self._count

    def reset_count(self) -> None:
        with self._lock:
            self._count = 0

    def fresh(self) -> "Objective":
        """A new wrapper around the same function with a zeroed counter."""
        return Objective(self.fn, name=self.name, vectorized=self.vectorized)

    def evaluate_block(self, block) -> np.ndarray:
        """Evaluate a (n, m) batch of points; counts n evaluations."""
        block = np.ascontiguousarray(block, dtype=np.float64)
        if block.ndim != 2:
            raise ValueError(f"expected a (n, m) batch, got shape {block.shape}")
        if self.vectorized:
            out = np.asarray(self.fn(block), dtype=np.float64)
            if out.shape != (block.shape[0],):
                raise TypeError(
                    f"vectorized objective returned shape {out.shape}, expected ({block.shape[0]},)"
                )
        else:
            out = np.array([float(self.fn(row)) for row in block])
        with self._lock:
            self._count += block.shape[0]
        return out

    def __call__(self, point) -> float:
        row = _as_coords(point)
        return float(self.evaluate_block(row[None, :])[0])

    def __repr__(self) -> str:
        return f"Objective({self.name!r}, evaluations={self._count})"


@dataclass(frozen=True)
class MoveProposal:
    """One candidate move: coordinate, direction, backed-off step, vector.

    Skipped proposals (no feasible step above phi, or empty redistribution
    set) carry no candidate; their recorded value is the incumbent's.
    """

    coordinate: int
    direction: str
    local_step: float
    candidate: Optional[np.ndarray]
    skipped: bool


@dataclass(frozen=True)
class IterationRecord:
    point: np.ndarray
    value: float
    step: float


@dataclass(frozen=True)
class RunReport:
    """Bookkeeping of a single run."""

    final_point: SimplexPoint
    final_value: float
    iterations: int
    evaluations: int
    termination: str  # STEP_THRESHOLD or ITERATION_CAP
    trace: Optional[list[IterationRecord]] = None
    max_evals_per_iteration: int = 0


@dataclass(frozen=True)
class OptimizeResult:
    """Aggregate over all runs of one optimize() call."""

    solution: SimplexPoint
    value: float
    runs: list[RunReport]
    total_evaluations: int
    converged: bool  # two consecutive runs agreed before max_runs


def significant_set(p, exclude: int, sparsity: float) -> set[int]:
    """Indices (0-based) of coordinates above the sparsity threshold,
    excluding ``exclude``. Its size is the redistribution count K."""
    coords = _as_coords(p)
    if not 0 <= exclude < coords.shape[0]:
        raise IndexError(f"exclude={exclude} out of range for dimension {coords.shape[0]}")
    idx = np.flatnonzero(coords > sparsity)
    return {int(i) for i in idx if i != exclude}


def build_candidate(p, i: int, direction: str, step: float, sig) -> np.ndarray:
    """Apply one move to ``p`` and return the raw candidate vector.

    Plus: coordinate i gains ``step`` and every index in ``sig`` loses
    step/|sig|; minus is the mirror image. The coordinate sum is preserved
    exactly in real arithmetic. The result may be infeasible (negative
    coordinates); feasibility is the caller's backoff test.
    """
    coords = _as_coords(p)
    idx = np.fromiter(sig, dtype=np.intp)
    if idx.size == 0:
        raise ValueError("redistribution set must be nonempty")
    if i in sig:
        raise ValueError("moved coordinate may not be in the redistribution set")
    share = step / idx.size
    q = coords.copy()
    if direction == PLUS:
        q[idx] = coords[idx] - share
        q[i] = coords[i] + step
    elif direction == MINUS:
        q[idx] = coords[idx] + share
        q[i] = coords[i] - step
    else:
        raise ValueError(f"direction must be {PLUS!r} or {MINUS!r}, got {direction!r}")
    return q


def _loop_feasible(q: np.ndarray) -> bool:
    # In-loop feasibility: coordinates may undershoot zero by at most
    # BOUNDARY_SLACK (rounding residue of a boundary move; the exact-
    # arithmetic candidate has a true zero there). Accepted candidates
    # are clamped, so the slack never leaks into an iterate.
    return float(q.min()) >= -BOUNDARY_SLACK and abs(float(q.sum()) - 1.0) <= SUM_TOL


def backoff_feasible_move(
    p, i: int, direction: str, s_start: float, rho: float, phi: float, sparsity: float
) -> MoveProposal:
    """Build the move for (i, direction), backing the step off until feasible.

    Starting at ``s_start`` the local step is divided by ``rho`` until the
    candidate lies on the simplex; once the step falls to ``phi`` or below
    (or the redistribution set is empty) the move is skipped. Coordinates a
    boundary move leaves within rounding error below zero are clamped to
    exact zeros, so the returned candidate is strictly feasible.

    This is the literal one-move-at-a-time construction; the batched kernel
    in :mod:`simplexopt.moves` produces bitwise-identical proposals.
    """
    coords = _as_coords(p)
    sig = significant_set(coords, i, sparsity)
    if not sig:
        return MoveProposal(i, direction, 0.0, None, True)
    s = float(s_start)
    while s > phi:
        q = build_candidate(coords, i, direction, s, sig)
        if _loop_feasible(q):
            np.maximum(q, 0.0, out=q)
            return MoveProposal(i, direction, s, q, False)
        s = s / rho
    return MoveProposal(i, direction, 0.0, None, True)


def evaluate_proposals(
    objective: Objective, proposals: Sequence[MoveProposal], incumbent: float, threads: int = 1
) -> np.ndarray:
    """Objective values for a batch of proposals.

    Skipped proposals report the incumbent value and cost no evaluation;
    the counter grows by exactly the number of non-skipped proposals.
    Results are gathered in proposal order, so they are identical whether
    evaluated sequentially or with a thread pool.
    """
    values = np.full(len(proposals), float(incumbent))
    live = [(k, pr) for k, pr in enumerate(proposals) if not pr.skipped]
    if not live:
        return values
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(objective, (pr.candidate for _, pr in live)))
    else:
        out = [objective(pr.candidate) for _, pr in live]
    for (k, _), v in zip(live, out):
        if not np.isfinite(v):
            raise NonFiniteObjective(k)
        values[k] = v
    return values


def _select_row(values_plus: np.ndarray, values_minus: np.ndarray, incumbent: float) -> Optional[int]:
    """Greedy selection: row index in [0, 2m) of the accepted move, or None.

    Argmins break ties to the lowest index; when the best plus and best
    minus values tie, the minus candidate wins.
    """
    k1 = int(np.argmin(values_plus))
    k2 = int(np.argmin(values_minus))
    if min(values_plus[k1], values_minus[k2]) >= incumbent:
        return None
    if values_plus[k1] < values_minus[k2]:
        return k1
    return values_plus.shape[0] + k2


def select_best(values_plus, values_minus, proposals_plus, proposals_minus, incumbent: float):
    """The candidate of the best strictly-improving proposal, or None."""
    vp = np.asarray(values_plus, dtype=np.float64)
    vm = np.asarray(values_minus, dtype=np.float64)
    if vp.shape != vm.shape:
        raise ValueError("plus and minus value sequences must have equal length")
    row = _select_row(vp, vm, incumbent)
    if row is None:
        return None
    m = vp.shape[0]
    proposal = proposals_plus[row] if row < m else proposals_minus[row - m]
    return SimplexPoint(proposal.candidate)


def _sparsify_array(q: np.ndarray, sparsity: float) -> np.ndarray:
    keep = q > sparsity
    k = int(np.count_nonzero(keep))
    if k == q.shape[0]:
        return q
    if k == 0:
        raise AllCoordinatesInsignificant(
            f"all {q.shape[0]} coordinates are <= {sparsity!r}; threshold is misconfigured"
        )
    garbage = float(q[~keep].sum())
    return np.where(keep, q + garbage / k, 0.0)


def sparsify(p_temp, sparsity: float) -> SimplexPoint:
    """Zero out coordinates at or below the sparsity threshold.

    Their summed mass is split equally among the remaining coordinates, so
    the coordinate sum is preserved. A point with every coordinate above
    the threshold is returned unchanged.
    """
    out = _sparsify_array(_as_coords(p_temp), sparsity)
    return SimplexPoint(out)


def _check_finite_batch(out: np.ndarray, live: np.ndarray) -> None:
    bad = ~np.isfinite(out)
    if bad.any():
        raise NonFiniteObjective(int(live[int(np.argmax(bad))]))


def _run_loop(objective: Objective, start: np.ndarray, params: TuningParams, rho: float, trace: bool) -> RunReport:
    p = start
    s = params.s_initial
    m = p.shape[0]
    phi, sparsity, tol_fun = params.phi, params.sparsity, params.tol_fun

    evals_before = objective.evaluations
    records: Optional[list[IterationRecord]] = [] if trace else None
    max_iter_evals = 0
    iterations = 0
    last_eval_point = p
    last_eval_value = np.nan

    while True:
        if iterations + 1 > params.max_iter:
            # Cap exit returns the newest iterate whose value is known (the
            # incumbent of the last executed iteration).
            termination = ITERATION_CAP
            p_hat, y_hat = last_eval_point, last_eval_value
            break
        iterations += 1

        y = objective(p)
        if not np.isfinite(y):
            raise NonFiniteObjective(None, f"objective returned {y!r} at the incumbent")
        last_eval_point, last_eval_value = p, y
        if records is not None:
            records.append(IterationRecord(point=p.copy(), value=y, step=s))

        candidates, _steps, skipped = propose_moves(p, s, rho, phi, sparsity)
        live = np.flatnonzero(~skipped)
        values = np.full(2 * m, y)
        if live.size:
            out = objective.evaluate_block(candidates[live])
            _check_finite_batch(out, live)
            values[live] = out
        iter_evals = 1 + int(live.size)
        if iter_evals > max_iter_evals:
            max_iter_evals = iter_evals

        row = _select_row(values[:m], values[m:], y)
        if row is not None:
            q = candidates[row]
            p_new = _sparsify_array(q, sparsity)
            if p_new is q:
                new_value, value_known = float(values[row]), True
            else:
                value_known = bool(np.array_equal(p_new, q))
                new_value = float(values[row]) if value_known else np.nan
        else:
            p_new = p
            new_value, value_known = y, True

        if squared_distance(p_new, p) < tol_fun:
            s = s / rho
            if s <= phi:
                termination = STEP_THRESHOLD
                p_hat = p_new
                # Sparsification after acceptance can leave the value of the
                # final iterate unevaluated; only reachable with tol_fun set
                # above phi**2, never with the presets.
                y_hat = new_value if value_known else objective(p_new)
                break
        p = p_new

    return RunReport(
        final_point=SimplexPoint(p_hat),
        final_value=float(y_hat),
        iterations=iterations,
        evaluations=objective.evaluations - evals_before,
        termination=termination,
        trace=records,
        max_evals_per_iteration=max_iter_evals,
    )


def run_stage1(objective: Objective, start, params: TuningParams, rho: float, trace: bool = False) -> RunReport:
    """Execute one run from ``start`` with step decay rate ``rho``.

    Per iteration: evaluate the incumbent, propose 2m backed-off moves,
    evaluate the feasible ones, greedily accept the best strict improvement,
    sparsify, and decay the global step when the iterate stagnated. The run
    ends when the global step falls to ``phi`` or the iteration cap is hit.
    """
    if not rho > 1:
        raise ValueError("rho must exceed 1")
    point = start if isinstance(start, SimplexPoint) else SimplexPoint(start)
    return _run_loop(objective, point.coords, params, rho, trace)


def optimize(objective: Objective, start, params: Optional[TuningParams] = None, *, trace: bool = False) -> OptimizeResult:
    """Full optimizer: chained runs with restart-from-solution.

    The first run decays steps by ``rho1``; later runs restart from the
    previous solution with rate ``rho2`` and the full initial step. The
    driver stops as soon as two consecutive runs return bitwise-equal
    solutions (converged) or after ``max_runs`` runs.
    """
    if params is None:
        params = TuningParams()
    point = start if isinstance(start, SimplexPoint) else SimplexPoint(start)

    evals_before = objective.evaluations
    runs: list[RunReport] = []
    current = point.coords
    previous: Optional[np.ndarray] = None
    converged = False
    for run_index in range(1, params.max_runs + 1):
        rho = params.rho1 if run_index == 1 else params.rho2
        report = _run_loop(objective, current, params, rho, trace)
        runs.append(report)
        solution = report.final_point.coords
        if previous is not None and np.array_equal(solution, previous):
            converged = True
            break
        previous = solution
        current = solution

    last = runs[-1]
    return OptimizeResult(
        solution=last.final_point,
        value=last.final_value,
        runs=runs,
        total_evaluations=objective.evaluations - evals_before,
        converged=converged,
    )
