"""One-dimensional search primitives shared across the package.

The bracket policy (start at 0 with unit width, double each step, hard
cap) is shared by the acceptance reconstruction and the loss-based
constructions so that "unbounded" means the same thing everywhere.
"""

from __future__ import annotations

import math
from typing import Callable, Tuple

from .errors import UnboundedError

BRACKET_CAP = 1e12
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def smallest_true(
    feasible: Callable[[float], bool],
    *,
    tol: float = 1e-10,
    cap: float = BRACKET_CAP,
    no_true_msg: str = "no feasible point within the bracket cap",
    all_true_msg: str = "feasible for arbitrarily negative points",
) -> float:
    """Smallest ``s`` with ``feasible(s)`` true, for monotone feasibility.

    Feasibility must be false below some threshold and true above it.
    Brackets expand by doubling from 0; bisection then narrows the
    threshold to within ``tol`` and the feasible endpoint is returned.
    """
    if feasible(0.0):
        hi = 0.0
        lo, step = -1.0, 1.0
        while feasible(lo):
            hi = lo
            step *= 2.0
            lo -= step
            if -lo > cap:
                raise UnboundedError(all_true_msg, side="below")
    else:
        lo = 0.0
        hi, step = 1.0, 1.0
        while not feasible(hi):
            lo = hi
            step *= 2.0
            hi += step
            if hi > cap:
                raise UnboundedError(no_true_msg, side="above")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _golden_section(
    g: Callable[[float], float], a: float, c: float, tol: float
) -> Tuple[float, float]:
    """Minimum of a unimodal ``g`` on [a, c]; returns (value, argmin)."""
    best_v, best_x = math.inf, 0.5 * (a + c)
    x1 = c - _INV_GOLDEN * (c - a)
    x2 = a + _INV_GOLDEN * (c - a)
    g1, g2 = g(x1), g(x2)
    while c - a > tol:
        if g1 <= g2:
            c, x2, g2 = x2, x1, g1
            x1 = c - _INV_GOLDEN * (c - a)
            g1 = g(x1)
        else:
            a, x1, g1 = x1, x2, g2
            x2 = a + _INV_GOLDEN * (c - a)
            g2 = g(x2)
        for v, x in ((g1, x1), (g2, x2)):
            if v < best_v:
                best_v, best_x = v, x
    mid = 0.5 * (a + c)
    v_mid = g(mid)
    if v_mid < best_v:
        best_v, best_x = v_mid, mid
    return best_v, best_x


def minimize_convex(
    g: Callable[[float], float],
    *,
    tol: float = 1e-10,
    cap: float = BRACKET_CAP,
    unbounded_msg: str = "objective still decreasing at the bracket cap",
) -> Tuple[float, float]:
    """Minimum of a convex (unimodal) scalar function; returns (value, argmin).

    The minimum is bracketed by marching downhill with doubling steps and
    then narrowed by golden-section search.  Running past ``cap`` while
    still descending raises :class:`UnboundedError`.
    """
    a, b, c = -1.0, 0.0, 1.0
    ga, gb, gc = g(a), g(b), g(c)
    step = 2.0
    while gb > ga or gb > gc:
        if ga <= gc:
            c, gc = b, gb
            b, gb = a, ga
            a = a - step
            if a < -cap:
                raise UnboundedError(unbounded_msg, side="below")
            ga = g(a)
        else:
            a, ga = b, gb
            b, gb = c, gc
            c = c + step
            if c > cap:
                raise UnboundedError(unbounded_msg, side="above")
            gc = g(c)
        step *= 2.0
    value, argmin = _golden_section(g, a, c, tol)
    for v, x in ((ga, a), (gb, b), (gc, c)):
        if v < value:
            value, argmin = v, x
    return value, argmin


def minimize_on_grid(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    n_points: int = 401,
    *,
    tol: float = 1e-10,
) -> Tuple[float, float]:
    """Global scan of [lo, hi] followed by local refinement around the best cell.

    Intended for objectives that are not known to be convex; correctness
    of the global minimum is only up to the grid resolution.
    """
    if not (hi > lo) or n_points < 3:
        raise ValueError("grid needs lo < hi and at least 3 points")
    step = (hi - lo) / (n_points - 1)
    best_v, best_k = math.inf, 0
    for k in range(n_points):
        v = g(lo + k * step)
        if v < best_v:
            best_v, best_k = v, k
    a = lo + max(best_k - 1, 0) * step
    c = lo + min(best_k + 1, n_points - 1) * step
    value, argmin = _golden_section(g, a, c, tol)
    if best_v < value:
        value, argmin = best_v, lo + best_k * step
    return value, argmin
