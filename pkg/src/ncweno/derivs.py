"""Even derivatives of zone-centered data interpolated to zone boundaries.

The update equation needs d2/dx2, d4/dx4, ... of the flux and of the state
at every zone boundary.  Each boundary hybridizes one large centered stencil
of ``order + 1`` points with two biased 3-point stencils touching the
boundary.  The small stencils supply only the second derivative; the higher
ones come from the large stencil and are switched off by the nonlinear
weights when the data is rough.  A pure central (unlimited) variant of the
same stencils is provided for the negative-result comparisons.

Weights may be computed per component (the basic contract) or shared across
all components of a system (:func:`shared_face_weights`): sharing turns the
ladder into one linear operator per boundary, which is what keeps two-phase
mixture states with uniform pressure and velocity exactly uniform.

Derivatives are returned in window units (unit zone spacing); the update
multiplies them by the ladder coefficients only, since those carry dx^{2m}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .interp import (SUPPORTED_ORDERS, WenoParams, _beta_form, _deriv_row, _f64,
                     _monomial_map)


@dataclass(frozen=True)
class FaceStencilOps:
    sl: slice
    d_rows: tuple[np.ndarray, ...]   # rows for d2, d4, ... at the boundary
    beta: np.ndarray


@dataclass(frozen=True)
class FaceDerivTables:
    order: int
    nderiv: int          # how many even derivatives (d2 .. d_{2*nderiv})
    width: int           # window width = order + 1 zones
    high: FaceStencilOps
    lows: tuple[FaceStencilOps, FaceStencilOps]


def _face_ops(offsets, window_lo: int, nderiv: int) -> FaceStencilOps:
    """Stencil tables in boundary-centered coordinates.

    ``offsets`` are zone indices relative to the left zone of the boundary;
    the zone at offset 0 has center xi = -1/2, offset 1 has xi = +1/2.
    """
    xi = [Fraction(2 * o - 1, 2) for o in offsets]
    mono = _monomial_map(xi)
    deg = len(offsets) - 1
    rows = []
    for k in range(1, nderiv + 1):
        m = 2 * k
        if m <= deg:
            rows.append(_f64(_deriv_row(mono, Fraction(0), m)))
        else:
            rows.append(np.zeros(len(offsets)))
    return FaceStencilOps(
        sl=slice(offsets[0] - window_lo, offsets[-1] - window_lo + 1),
        d_rows=tuple(rows),
        beta=_f64(_beta_form(mono)),
    )


@lru_cache(maxsize=None)
def face_deriv_tables(order: int) -> FaceDerivTables:
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order {order}")
    nderiv = (order - 1) // 2
    half = (order + 1) // 2
    lo = 1 - half  # window covers zones 1-half .. half relative to the left zone
    lows = (_face_ops([-1, 0, 1], lo, nderiv), _face_ops([0, 1, 2], lo, nderiv))
    high = _face_ops(list(range(lo, half + 1)), lo, nderiv)
    return FaceDerivTables(order=order, nderiv=nderiv, width=order + 1,
                           high=high, lows=lows)


def face_windows(u: np.ndarray, order: int) -> np.ndarray:
    """Windows of ``order + 1`` zones around each boundary of a strip.

    Window f covers zones f .. f+order; it belongs to the boundary between
    zones f + (order-1)/2 and f + (order+1)/2.
    """
    return np.lib.stride_tricks.sliding_window_view(u, order + 1, axis=-1)


def _betas(windows, ops: FaceStencilOps):
    # centering on one stencil point costs nothing analytically (indicators
    # only see derivatives) and makes constant data give exact zeros
    v = windows[..., ops.sl]
    v = v - v[..., :1]
    return ((v @ ops.beta) * v).sum(axis=-1)


def _apply_row(windows, ops: FaceStencilOps, row):
    v = windows[..., ops.sl]
    return (v - v[..., :1]) @ row


def _face_weights(b_hi, b_lo, order, params):
    """Nonlinear weights from smoothness indicators (any batch shape).

    At third order only the two biased stencils take part; w_hi is None."""
    eps, p = params.epsilon, params.power
    if order == 3:
        tau = np.abs(b_lo[0] - b_lo[1])
        a = [0.5 * (1.0 + (tau / (b + eps)) ** p) for b in b_lo]
        tot = a[0] + a[1]
        return None, [ai / tot for ai in a]
    tau = (np.abs(b_hi - b_lo[0]) + np.abs(b_hi - b_lo[1])) / 2.0
    g_hi = params.gamma_hi
    g_lo = (1.0 - g_hi) / 2.0
    a_hi = g_hi * (1.0 + (tau / (b_hi + eps)) ** p)
    a_lo = [g_lo * (1.0 + (tau / (b + eps)) ** p) for b in b_lo]
    tot = a_hi + a_lo[0] + a_lo[1]
    return a_hi / tot, [a / tot for a in a_lo]


def face_weights(windows: np.ndarray, order: int,
                 params: WenoParams | None = None):
    """Per-component nonlinear weights for every boundary window."""
    params = params or WenoParams()
    tables = face_deriv_tables(order)
    b_lo = [_betas(windows, ops) for ops in tables.lows]
    b_hi = _betas(windows, tables.high) if order > 3 else None
    return _face_weights(b_hi, b_lo, order, params)


def shared_face_weights(windows: np.ndarray, order: int,
                        params: WenoParams | None = None):
    """One weight set per boundary shared by every component.

    Each component's indicators are measured against its own smoothest
    stencil (a scale-free roughness ratio), and the boundary uses the worst
    ratio over the components.  A jump in any variable therefore suppresses
    the whole ladder there, a stencil that is clean in every component keeps
    a near-zero indicator, and smooth data still collapses to the linear
    weights.
    """
    params = params or WenoParams()
    tables = face_deriv_tables(order)
    b_lo = [_betas(windows, ops) for ops in tables.lows]
    if order == 3:
        floor = np.minimum(b_lo[0], b_lo[1]) + params.epsilon
        ratios = [(b / floor).max(axis=0) for b in b_lo]
        return _face_weights(None, ratios, order, params)
    b_hi = _betas(windows, tables.high)
    floor = np.minimum(np.minimum(b_lo[0], b_lo[1]), b_hi) + params.epsilon
    rh = (b_hi / floor).max(axis=0)
    rl = [(b / floor).max(axis=0) for b in b_lo]
    return _face_weights(rh, rl, order, params)


def apply_face_derivs(windows: np.ndarray, order: int, weights,
                      params: WenoParams | None = None) -> list[np.ndarray]:
    """Adaptive-order derivative ladder with externally supplied weights.

    ``weights`` broadcast against the window batch axes, so both the
    per-component and the shared (per-boundary) sets work here.
    """
    params = params or WenoParams()
    tables = face_deriv_tables(order)
    w_hi, w_lo = weights
    if order == 3:
        d2 = (w_lo[0] * _apply_row(windows, tables.lows[0], tables.lows[0].d_rows[0])
              + w_lo[1] * _apply_row(windows, tables.lows[1], tables.lows[1].d_rows[0]))
        return [d2]
    g_hi = params.gamma_hi
    g_lo = (1.0 - g_hi) / 2.0
    out = []
    for k in range(tables.nderiv):
        f_hi = _apply_row(windows, tables.high, tables.high.d_rows[k])
        f_lo = [_apply_row(windows, ops, ops.d_rows[k]) for ops in tables.lows]
        core = f_hi - g_lo * (f_lo[0] + f_lo[1])
        out.append((w_hi / g_hi) * core + w_lo[0] * f_lo[0] + w_lo[1] * f_lo[1])
    return out


def interp_face_derivs(u: np.ndarray, order: int, params: WenoParams | None = None,
                       windows: np.ndarray | None = None) -> list[np.ndarray]:
    """Nonlinearly limited even derivatives at zone boundaries.

    ``u`` is a (nvar, n) strip of zone-centered data (flux or state).
    Returns [d2, d4, ...] in window units, each shaped like the window batch
    (nvar, n - order).  Boundary f of the output sits between zones
    f + (order-1)/2 and f + (order+1)/2 of the strip.
    """
    params = params or WenoParams()
    if windows is None:
        if not np.all(np.isfinite(u)):
            raise FloatingPointError("non-finite input to derivative interpolation")
        windows = face_windows(u, order)
    return apply_face_derivs(windows, order,
                             face_weights(windows, order, params), params)


def central_face_derivs(u: np.ndarray, order: int,
                        windows: np.ndarray | None = None) -> list[np.ndarray]:
    """Unlimited central-difference even derivatives at zone boundaries.

    Same large stencil as :func:`interp_face_derivs` but with no nonlinear
    weighting; used only for the central-difference comparison variant.
    """
    tables = face_deriv_tables(order)
    if windows is None:
        windows = face_windows(u, order)
    return [_apply_row(windows, tables.high, tables.high.d_rows[k])
            for k in range(tables.nderiv)]
