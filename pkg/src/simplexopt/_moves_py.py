"""Numpy implementation of the per-iteration move-proposal kernel.

For a feasible point p and the current global step s, every coordinate i is
tried in both directions:

* plus:  coordinate i gains the local step, every other coordinate above
  the sparsity threshold loses step/K (K = number of such coordinates);
* minus: coordinate i loses the local step, the same K coordinates gain
  step/K.

The local step starts at the global step and is divided by ``rho`` until
the candidate is feasible or the step falls to ``phi`` or below, in which
case the move is skipped. A move is also skipped when K = 0.

Feasibility of a candidate reduces to scalar bounds (the coordinate sum is
preserved by construction, so only non-negativity can fail):

* plus:  min of the redistribution coordinates minus step/K >= -BOUNDARY_SLACK;
* minus: p_i minus step >= -BOUNDARY_SLACK.

``BOUNDARY_SLACK`` tolerates coordinates that land within rounding error
below zero: the iterate's coordinate sum drifts from 1 by a few ulp over a
run, and without the slack a full-step move between vertices (coordinate
exactly 0 in real arithmetic) would be rejected for a -1e-16 coordinate.
Accepted candidates have such residues clamped to exact zeros, so every
returned vector is strictly feasible.

The compiled kernel in ``_moves_cy`` implements the identical floating-point
operation sequence; outputs of the two backends are bitwise equal.
"""

from __future__ import annotations

import numpy as np

# Far below any useful phi/sparsity threshold, far above accumulated rounding.
BOUNDARY_SLACK = 1e-12


def propose_moves(p, step, rho, phi, sparsity):
    """Build all 2m candidate moves from ``p`` with per-move step backoff.

    Returns ``(candidates, steps, skipped)`` where ``candidates`` has shape
    (2m, m) with plus moves in rows 0..m-1 and minus moves in rows m..2m-1,
    ``steps`` holds the accepted local step per move (0 when skipped), and
    ``skipped`` flags moves with no feasible step above ``phi``. Rows of
    skipped moves are left as zeros.
    """
    p = np.ascontiguousarray(p, dtype=np.float64)
    m = p.shape[0]
    candidates = np.zeros((2 * m, m))
    steps = np.zeros(2 * m)
    skipped = np.ones(2 * m, dtype=bool)

    sig = p > sparsity
    n_sig = int(np.count_nonzero(sig))

    # Shared backoff ladder: iterated division, identical to the scalar loop.
    ladder = []
    s = float(step)
    while s > phi:
        ladder.append(s)
        s = s / rho
    if not ladder or n_sig == 0:
        return candidates, steps, skipped
    ladder = np.asarray(ladder)

    k_per_i = n_sig - sig.astype(np.intp)
    movable = k_per_i >= 1
    k_safe = np.maximum(k_per_i, 1)

    # Smallest and second-smallest significant coordinate; the bound for a
    # plus move on i is the min over the redistribution set, which excludes i.
    vals = np.where(sig, p, np.inf)
    i1 = int(np.argmin(vals))
    rest = vals.copy()
    rest[i1] = np.inf
    bound_plus = np.full(m, vals[i1])
    bound_plus[i1] = rest.min()

    share_mat = ladder[None, :] / k_safe[:, None]  # fl(s_t / K_i)

    idx = np.arange(m)
    eye = idx[:, None] == idx[None, :]
    off_sig = sig[None, :] & ~eye

    # Plus direction: first ladder level whose lowest redistribution
    # coordinate stays above -BOUNDARY_SLACK.
    ok = bound_plus[:, None] - share_mat >= -BOUNDARY_SLACK
    found_plus = ok.any(axis=1) & movable
    t_plus = ok.argmax(axis=1)
    s_plus = ladder[t_plus]
    share_plus = share_mat[idx, t_plus]
    rows = np.where(off_sig, p[None, :] - share_plus[:, None], p[None, :])
    rows[idx, idx] = p + s_plus
    np.maximum(rows, 0.0, out=rows)
    candidates[:m][found_plus] = rows[found_plus]
    steps[:m][found_plus] = s_plus[found_plus]
    skipped[:m] = ~found_plus

    # Minus direction: first ladder level with p_i - step >= -BOUNDARY_SLACK.
    ok = p[:, None] - ladder[None, :] >= -BOUNDARY_SLACK
    found_minus = ok.any(axis=1) & movable
    t_minus = ok.argmax(axis=1)
    s_minus = ladder[t_minus]
    share_minus = share_mat[idx, t_minus]
    rows = np.where(off_sig, p[None, :] + share_minus[:, None], p[None, :])
    rows[idx, idx] = p - s_minus
    np.maximum(rows, 0.0, out=rows)
    candidates[m:][found_minus] = rows[found_minus]
    steps[m:][found_minus] = s_minus[found_minus]
    skipped[m:] = ~found_minus

    return candidates, steps, skipped
