"""Derivative-free one-dimensional search kernels.

Bracket expansion, golden-section search and predicate bisection. All kernels
are deterministic and tolerate objectives that return ``+-inf`` on part of
their domain (the infinite region is assumed to sit at one end of the
interval, which is the shape every caller in this package produces).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NumericFailure

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: consecutive strict increases along a doubling ray before the objective is
#: declared unbounded
UNBOUNDED_RUN = 40

#: bracket expansion never goes past start * 2**DOUBLING_CAP
DOUBLING_CAP = 64


@dataclass(frozen=True)
class SearchResult:
    x: float
    value: float
    iterations: int
    unbounded: bool = False


def golden_max(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    max_iter: int = 300,
) -> SearchResult:
    """Maximize a unimodal ``fn`` over ``[lo, hi]``.

    Both endpoints are evaluated, so a supremum attained at the boundary is
    returned exactly rather than approached from inside. ``fn`` may return
    ``-inf`` off its effective domain provided the infinite region is an
    interval touching the right endpoint.
    """
    if not hi >= lo:
        raise NumericFailure(f"empty bracket [{lo}, {hi}]")
    best_x, best_v = lo, fn(lo)
    v_hi = fn(hi)
    if v_hi > best_v:
        best_x, best_v = hi, v_hi
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    iters = 0
    while iters < max_iter and (b - a) > rel_tol * max(1.0, abs(a), abs(b)):
        iters += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
        if fc > best_v:
            best_x, best_v = c, fc
        if fd > best_v:
            best_x, best_v = d, fd
    return SearchResult(best_x, best_v, iters)


def golden_min(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    max_iter: int = 300,
) -> SearchResult:
    res = golden_max(lambda x: -fn(x), lo, hi, rel_tol=rel_tol, max_iter=max_iter)
    return SearchResult(res.x, -res.value, res.iterations, res.unbounded)


def expand_max_bracket(
    fn: Callable[[float], float],
    start: float = 1.0,
) -> tuple[float, bool, int]:
    """Expand a doubling ray until ``fn`` stops increasing.

    Returns ``(hi, unbounded, evals)``: a maximizer of ``fn`` on ``[0, inf)``
    lies in ``[0, hi]`` unless ``unbounded`` is set, which happens after
    ``UNBOUNDED_RUN`` consecutive strict increases (the cap is
    ``start * 2**DOUBLING_CAP``).
    """
    t = start
    v_prev = fn(t)
    run = 0
    evals = 1
    for _ in range(DOUBLING_CAP):
        t *= 2.0
        v = fn(t)
        evals += 1
        if v > v_prev:
            run += 1
            if run >= UNBOUNDED_RUN:
                return t, True, evals
        else:
            return t, False, evals
        v_prev = v
    return t, False, evals


def bisect_predicate(
    pred: Callable[[float], bool],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    abs_floor: float = 1e-14,
    max_iter: int = 20000,
) -> tuple[float, float, int]:
    """Shrink ``[lo, hi]`` around the switch point of a monotone predicate.

    Requires ``pred(hi)`` true and ``pred(lo)`` false; maintains that
    invariant and stops when the bracket width drops below
    ``max(abs_floor, rel_tol * hi)``. Returns ``(lo, hi, iterations)``.
    """
    iters = 0
    while (hi - lo) > max(abs_floor, rel_tol * abs(hi)) and iters < max_iter:
        iters += 1
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float exhaustion
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi, iters


def bracket_min(
    fn: Callable[[float], float],
    x0: float,
    factor: float = 2.0,
    max_steps: int = 400,
) -> tuple[float, float, int]:
    """Bracket a minimizer of a convex ``fn`` on ``(0, inf)``.

    ``fn`` may be ``+inf`` near 0 (the only infinite region our callers
    produce). Returns ``(lo, hi, evals)`` with a minimizer inside.
    """
    x = x0
    v = fn(x)
    evals = 1
    steps = 0
    while not v < math.inf and steps < max_steps:
        x *= factor
        v = fn(x)
        evals += 1
        steps += 1
    if not v < math.inf:
        raise NumericFailure("objective is +inf along the whole search ray")
    # walk right while decreasing
    xr, vr = x, v
    while steps < max_steps:
        nxt = xr * factor
        vn = fn(nxt)
        evals += 1
        steps += 1
        if vn < vr:
            xr, vr = nxt, vn
        else:
            break
    # walk left while decreasing
    xl, vl = x, v
    if vr < vl:
        xl, vl = xr, vr
    while steps < max_steps:
        nxt = xl / factor
        vn = fn(nxt)
        evals += 1
        steps += 1
        if vn < vl:
            xl, vl = nxt, vn
        else:
            break
    lo = xl / factor
    hi = max(xr * factor, xl * factor)
    return lo, hi, evals
