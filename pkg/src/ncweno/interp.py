"""Pointwise WENO interpolation of zone-centered values to zone boundaries.

Each zone hybridizes one large centered stencil of ``order`` points with
three 3-point stencils (left, centered, right) in the adaptive-order way:
smoothness indicators pick nonlinear weights, and the large-stencil
polynomial is recovered exactly when the data is smooth.  At third order
only the three small stencils take part.

All stencil coefficients are derived here from Vandermonde systems in exact
rational arithmetic on the unit-spaced reference grid (zone centers at
integer offsets, boundaries at +-1/2), so polynomial reproduction holds to
round-off by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (3, 5, 7, 9)


@dataclass(frozen=True)
class WenoParams:
    """Tunables of the nonlinear hybridization.

    ``gamma_hi`` is the linear weight of the large stencil; the remainder is
    split over the (left, center, right) 3-point stencils as
    ``(1-gamma_hi) * gamma_lo``.  ``epsilon`` regularizes the smoothness
    indicators and ``power`` sharpens the weights.
    """

    gamma_hi: float = 0.85
    gamma_lo: tuple[float, float, float] = (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0)
    epsilon: float = 1.0e-12
    power: int = 4


# ---------------------------------------------------------------------------
# exact coefficient generation
# ---------------------------------------------------------------------------

def _monomial_map(offsets) -> list[list[Fraction]]:
    """Rows M[t] such that the interpolant through (offsets, u) is
    p(xi) = sum_t (M[t] . u) xi^t.  Exact inverse Vandermonde."""
    n = len(offsets)
    a = [[Fraction(o) ** t for t in range(n)] for o in offsets]
    # Gauss-Jordan inverse in Fractions
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [v / d for v in a[col]]
        inv[col] = [v / d for v in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    # rows of inv give coefficients of each monomial power: a_t = sum_j inv[t][j]... but
    # inv here is V^{-1} with V[j][t]=o_j^t laid out row-major as a[j][t]; transpose view:
    return [[inv[t][j] for j in range(n)] for t in range(n)]


def _value_row(mono, xi: Fraction) -> list[Fraction]:
    n = len(mono)
    return [sum(mono[t][j] * xi ** t for t in range(n)) for j in range(n)]


def _deriv_row(mono, xi: Fraction, m: int) -> list[Fraction]:
    n = len(mono)
    out = []
    for j in range(n):
        s = Fraction(0)
        for t in range(m, n):
            fac = Fraction(1)
            for q in range(t, t - m, -1):
                fac *= q
            s += mono[t][j] * fac * xi ** (t - m)
        out.append(s)
    return out


def _beta_form(mono) -> list[list[Fraction]]:
    """Quadratic form Q with beta = u^T Q u: sum over derivative orders
    m>=1 of the integral over [-1/2, 1/2] of (p^(m))^2 (unit spacing)."""
    n = len(mono)
    q = [[Fraction(0)] * n for _ in range(n)]
    for m in range(1, n):
        # p^(m)(xi) = sum_t>=m mono[t] * t!/(t-m)! * xi^(t-m)
        rows = []
        for t in range(m, n):
            fac = Fraction(1)
            for r in range(t, t - m, -1):
                fac *= r
            rows.append((t - m, [mono[t][j] * fac for j in range(n)]))
        for pa, ca in rows:
            for pb, cb in rows:
                p = pa + pb
                if p % 2 == 1:
                    continue
                integ = Fraction(1, 2 ** p) / (p + 1)
                for i in range(n):
                    if ca[i] == 0:
                        continue
                    for j in range(n):
                        q[i][j] += ca[i] * cb[j] * integ
    return q


def _f64(rows) -> np.ndarray:
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class StencilOps:
    """Float tables for one stencil inside a window: value rows at the two
    zone boundaries, slope row at the zone center, and the beta form."""

    sl: slice            # location of the stencil inside the window
    val_right: np.ndarray
    val_left: np.ndarray
    slope: np.ndarray
    beta: np.ndarray
    degree: int


@dataclass(frozen=True)
class InterpTables:
    order: int
    radius: int          # window half-width (window = 2*radius+1 zones)
    high: StencilOps | None
    lows: tuple[StencilOps, StencilOps, StencilOps]


def _make_ops(offsets, window_lo: int) -> StencilOps:
    mono = _monomial_map(offsets)
    half = Fraction(1, 2)
    return StencilOps(
        sl=slice(offsets[0] - window_lo, offsets[-1] - window_lo + 1),
        val_right=_f64(_value_row(mono, half)),
        val_left=_f64(_value_row(mono, -half)),
        slope=_f64(_deriv_row(mono, Fraction(0), 1)),
        beta=_f64(_beta_form(mono)),
        degree=len(offsets) - 1,
    )


@lru_cache(maxsize=None)
def interp_tables(order: int) -> InterpTables:
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order {order}; expected one of {SUPPORTED_ORDERS}")
    rad = max((order - 1) // 2, 2)
    lo = -rad
    lows = tuple(_make_ops(list(range(s, s + 3)), lo) for s in (-2, -1, 0))
    high = None
    if order > 3:
        r = (order - 1) // 2
        high = _make_ops(list(range(-r, r + 1)), lo)
    return InterpTables(order=order, radius=rad, high=high, lows=lows)


# ---------------------------------------------------------------------------
# vectorized kernels
# ---------------------------------------------------------------------------

def _betas(windows: np.ndarray, ops: StencilOps) -> np.ndarray:
    # centered on one stencil point: indicators only see derivatives, and
    # constant data then gives exact zeros
    v = windows[..., ops.sl]
    v = v - v[..., :1]
    return ((v @ ops.beta) * v).sum(axis=-1)


def _apply(windows: np.ndarray, ops: StencilOps, row: np.ndarray) -> np.ndarray:
    return windows[..., ops.sl] @ row


def ao_weights(windows: np.ndarray, tables: InterpTables, params: WenoParams):
    """Nonlinear weights (w_hi, w_lo[3]) per window; w_hi is None at order 3."""
    b_lo = [_betas(windows, ops) for ops in tables.lows]
    eps, p = params.epsilon, params.power
    if tables.high is None:
        tau = np.abs(b_lo[0] - b_lo[2])
        alphas = [g * (1.0 + (tau / (b + eps)) ** p)
                  for g, b in zip(params.gamma_lo, b_lo)]
        total = alphas[0] + alphas[1] + alphas[2]
        return None, [a / total for a in alphas]
    b_hi = _betas(windows, tables.high)
    tau = (np.abs(b_hi - b_lo[0]) + np.abs(b_hi - b_lo[1]) + np.abs(b_hi - b_lo[2])) / 3.0
    g_hi = params.gamma_hi
    g_lo = [(1.0 - g_hi) * g for g in params.gamma_lo]
    a_hi = g_hi * (1.0 + (tau / (b_hi + eps)) ** p)
    a_lo = [g * (1.0 + (tau / (b + eps)) ** p) for g, b in zip(g_lo, b_lo)]
    total = a_hi + a_lo[0] + a_lo[1] + a_lo[2]
    w_hi = a_hi / total
    return w_hi, [a / total for a in a_lo]


def _combine(windows, tables: InterpTables, params: WenoParams, w_hi, w_lo, attr: str):
    """Adaptive-order combination of one linear functional of the interpolant."""
    f_lo = [_apply(windows, ops, getattr(ops, attr)) for ops in tables.lows]
    if tables.high is None:
        return w_lo[0] * f_lo[0] + w_lo[1] * f_lo[1] + w_lo[2] * f_lo[2]
    f_hi = _apply(windows, tables.high, getattr(tables.high, attr))
    g_hi = params.gamma_hi
    g_lo = [(1.0 - g_hi) * g for g in params.gamma_lo]
    core = f_hi - (g_lo[0] * f_lo[0] + g_lo[1] * f_lo[1] + g_lo[2] * f_lo[2])
    out = (w_hi / g_hi) * core
    for w, f in zip(w_lo, f_lo):
        out = out + w * f
    return out


def interpolate_windows(windows: np.ndarray, order: int, params: WenoParams | None = None,
                        want_slope: bool = False):
    """WENO interpolation on stacked stencil windows.

    ``windows[..., :]`` holds the 2*radius+1 point values around each zone
    (any leading batch axes).  Returns (value at right boundary, value at
    left boundary[, slope at center in window units]).
    """
    params = params or WenoParams()
    tables = interp_tables(order)
    if windows.shape[-1] != 2 * tables.radius + 1:
        raise ValueError("window width does not match order")
    w_hi, w_lo = ao_weights(windows, tables, params)
    right = _combine(windows, tables, params, w_hi, w_lo, "val_right")
    left = _combine(windows, tables, params, w_hi, w_lo, "val_left")
    if not want_slope:
        return right, left
    # the slope row annihilates constants; centering the window makes that
    # exact in floating point as well
    centered = windows - windows[..., tables.radius][..., None]
    slope = _combine(centered, tables, params, w_hi, w_lo, "slope")
    return right, left, slope


def strip_windows(u: np.ndarray, radius: int) -> np.ndarray:
    """Sliding windows over the last axis: shape (..., n-2r, 2r+1)."""
    return np.lib.stride_tricks.sliding_window_view(u, 2 * radius + 1, axis=-1)


def interpolate_strip(u: np.ndarray, order: int, params: WenoParams | None = None,
                      want_slope: bool = False):
    """Interpolate a (nvar, n) strip component-wise.

    Output arrays cover zones radius .. n-1-radius; entry j of the first
    array is the value at the right boundary of zone j+radius, entry j of
    the second the value at its left boundary.
    """
    if not np.all(np.isfinite(u)):
        raise FloatingPointError("non-finite input to WENO interpolation")
    rad = interp_tables(order).radius
    return interpolate_windows(strip_windows(u, rad), order, params, want_slope)


def interpolate_characteristic(u: np.ndarray, left_eig: np.ndarray, right_eig: np.ndarray,
                               order: int, params: WenoParams | None = None,
                               want_slope: bool = False):
    """Characteristic-space variant of :func:`interpolate_strip`.

    ``left_eig``/``right_eig`` hold per-zone eigenvector matrices for the
    valid zones (shape (nz, nvar, nvar) with nz = n - 2*radius); each zone's
    whole stencil window is projected with that zone's left matrix, the
    scalar machinery runs per characteristic field, and the results are
    projected back.  Returns arrays shaped (nvar, nz).
    """
    rad = interp_tables(order).radius
    win = strip_windows(u, rad)                      # (nvar, nz, w)
    cw = np.einsum("zab,bzw->zaw", left_eig, win)    # characteristic windows
    out = interpolate_windows(cw, order, params, want_slope)  # tuples of (nz, nvar)
    mapped = [np.einsum("zab,zb->az", right_eig, o) for o in out]
    return tuple(mapped)


def linear_interp_oracle(u: np.ndarray, order: int, want_slope: bool = False):
    """Exact unique polynomial fit through the ``order``-point centered
    stencil, evaluated at the zone boundaries (testing oracle; the third
    order case uses the centered 3-point stencil).

    Output layout matches :func:`interpolate_strip`.
    """
    tables = interp_tables(order)
    rad = tables.radius
    ops = tables.high if tables.high is not None else tables.lows[1]
    win = strip_windows(u, rad)
    right = _apply(win, ops, ops.val_right)
    left = _apply(win, ops, ops.val_left)
    if want_slope:
        return right, left, _apply(win, ops, ops.slope)
    return right, left
