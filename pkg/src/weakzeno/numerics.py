"""Small self-contained numerical kernels.

These routines back the numerical cross-checks of the closed-form results
elsewhere in the package: globally adaptive Gauss-Kronrod quadrature,
safeguarded bracketed root finding, a fixed-step RK4 integrator for complex
state vectors and ordinary least-squares line fitting.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from weakzeno.errors import OdeError, QuadratureError, RootFindingError

_EPS = np.finfo(float).eps

# 15-point Kronrod extension of the 7-point Gauss rule; abscissae in
# decreasing order, the last one is the centre of the interval.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss weights for the nodes _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class ToleranceSpec:
    """Convergence targets shared by the quadrature and root finder.

    Attributes:
        abs_tol: absolute tolerance.
        rel_tol: tolerance relative to the magnitude of the result.
        max_subdivisions: interval budget for quadrature, iteration budget
            for root finding.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 1000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_TOL = ToleranceSpec()


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


def _kronrod15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float, float]:
    """Return (Kronrod estimate, error estimate, integral of |f|) on [a, b]."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(centre)
    res_k = _WGK[7] * fc
    res_g = _WG[3] * fc
    res_abs = abs(res_k)
    for j in range(7):
        dx = half * _XGK[j]
        f1 = f(centre - dx)
        f2 = f(centre + dx)
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    res_k *= half
    res_g *= half
    res_abs *= abs(half)
    if not (math.isfinite(res_k) and math.isfinite(res_g)):
        raise QuadratureError(f"integrand not finite on [{a}, {b}]", res_k, math.inf)
    return res_k, abs(res_k - res_g), res_abs


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: ToleranceSpec = DEFAULT_TOL,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with globally adaptive G7-K15 quadrature.

    The interval with the largest error estimate is bisected until the
    summed error estimate drops below ``max(abs_tol, rel_tol * |I|)``.
    Infinite ranges are not transformed; truncate them before calling.

    Raises:
        ValueError: if ``a > b`` or a bound is not finite.
        QuadratureError: if ``tol.max_subdivisions`` intervals are used up.
            The exception carries the best estimate and its error bound.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration bounds must be finite; truncate the range")
    if a > b:
        raise ValueError(f"lower bound {a} exceeds upper bound {b}")
    if a == b:
        return 0.0

    value, err, res_abs = _kronrod15(f, a, b)
    # max-heap on the error estimate
    heap = [(-err, a, b, value, res_abs)]
    total, total_err, total_abs = value, err, res_abs
    n_intervals = 1

    def target() -> float:
        return max(tol.abs_tol, tol.rel_tol * abs(total), 50 * _EPS * total_abs)

    while total_err > target():
        if n_intervals >= tol.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {n_intervals} subintervals "
                f"(estimate {total!r}, error {total_err:.3g})",
                total,
                total_err,
            )
        neg_err, lo, hi, v, r_abs = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval can no longer be split in floating point
            raise QuadratureError(
                f"subinterval [{lo}, {hi}] exhausted float resolution", total, total_err
            )
        v1, e1, a1 = _kronrod15(f, lo, mid)
        v2, e2, a2 = _kronrod15(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        total_abs += a1 + a2 - r_abs
        heapq.heappush(heap, (-e1, lo, mid, v1, a1))
        heapq.heappush(heap, (-e2, mid, hi, v2, a2))
        n_intervals += 1
        if n_intervals % 64 == 0:
            # resum to keep incremental round-off out of the stopping test
            total = math.fsum(item[3] for item in heap)
            total_err = math.fsum(-item[0] for item in heap)
    return math.fsum(item[3] for item in heap)


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: ToleranceSpec = DEFAULT_TOL,
) -> float:
    """Bracketed root of ``f`` by Illinois false position with bisection fallback.

    Stops once ``|f(x)| <= abs_tol`` or the bracket is narrower than
    ``rel_tol * |x|``.

    Raises:
        ValueError: if ``f(lo)`` and ``f(hi)`` have the same strict sign.
        RootFindingError: if the iteration budget is exhausted.
    """
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise ValueError(f"invalid bracket: f({lo})={f_lo:g} and f({hi})={f_hi:g} share a sign")

    side = 0
    x = lo
    for _ in range(tol.max_subdivisions):
        width = hi - lo
        x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        # keep the secant step well inside the bracket, otherwise bisect
        if not (lo + 0.01 * width < x < hi - 0.01 * width):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if abs(fx) <= tol.abs_tol:
            return x
        if fx * f_lo < 0:
            hi, f_hi = x, fx
            if side == -1:
                f_lo *= 0.5
            side = -1
        else:
            lo, f_lo = x, fx
            if side == 1:
                f_hi *= 0.5
            side = 1
        if hi - lo <= max(tol.rel_tol * abs(x), 4 * _EPS * abs(x), 1e-300):
            return 0.5 * (lo + hi)
        if hi - lo > 0.5 * width:
            # slow shrinkage: force a bisection step
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if abs(fm) <= tol.abs_tol:
                return mid
            if fm * f_lo < 0:
                hi, f_hi = mid, fm
            else:
                lo, f_lo = mid, fm
            side = 0
    raise RootFindingError(f"no convergence in {tol.max_subdivisions} iterations near {x!r}")


def solve_ode_complex(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t0: float,
    t1: float,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step classical RK4 for complex vector ODEs ``dy/dt = rhs(t, y)``.

    The step is shrunk to ``(t1 - t0) / ceil((t1 - t0) / dt)`` so that the
    last sample lands exactly on ``t1``.

    Returns:
        ``(times, states)`` with ``states[k]`` the solution at ``times[k]``;
        every step is sampled, the first row is ``y0``.

    Raises:
        ValueError: if ``dt <= 0`` or ``t1 < t0``.
        OdeError: if the state stops being finite; carries the step index.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    y = np.atleast_1d(np.asarray(y0, dtype=complex)).copy()
    span = t1 - t0
    n_steps = int(math.ceil(span / dt * (1 - 1e-12))) if span > 0 else 0
    h = span / n_steps if n_steps else 0.0

    times = t0 + h * np.arange(n_steps + 1)
    if n_steps:
        times[-1] = t1
    states = np.empty((n_steps + 1, y.size), dtype=complex)
    states[0] = y
    for k in range(n_steps):
        t = times[k]
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise OdeError(f"non-finite state at step {k + 1} (t={times[k + 1]!r})", k + 1)
        states[k + 1] = y
    return times, states


def fit_line(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Ordinary least-squares line through ``(xs, ys)``.

    ``r_squared`` is 1 when the residuals vanish, including for constant data.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d sequences of equal length")
    if x.size < 2:
        raise ValueError("need at least two points")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0 or sxx <= (x.size * _EPS * max(abs(xm), 1.0)) ** 2:
        raise ValueError("degenerate fit: all x values are equal")
    slope = float(dx @ (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    if ss_tot == 0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope=slope, intercept=float(intercept), r_squared=r2)
