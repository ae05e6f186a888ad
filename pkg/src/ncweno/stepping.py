"""Time integration: CFL step control, SSP-RK3 and IMEX-SSP3(4,3,3).

The explicit stepper is the classic three-stage strong-stability-preserving
convex combination.  The IMEX scheme treats the hyperbolic terms with a
four-stage explicit tableau (whose trajectory is identical to SSP-RK3 when
the source vanishes) and the pointwise relaxation sources with a
singly-diagonally-implicit companion tableau; each implicit stage is a call
to the system's pointwise relaxation solve, and stage source values are
recovered algebraically so stiff terms are never evaluated explicitly.
"""

from __future__ import annotations

import numpy as np

from .mesh import FieldSet

STEPPERS = ("ssp3", "imex433")

# implicit tableau constants of the SSP3(4,3,3) IMEX pair
_ALPHA = 0.24169426078821
_BETA = 0.06042356519705
_ETA = 0.12915286960590


def compute_dt(field: FieldSet, system, cfl: float, axis_speeds=None) -> float:
    """CFL time step from the current interior field.

    1D: dt = cfl * dx / max|lambda|; 2D: dt = cfl / (sx/dx + sy/dy).
    Raises on a static field (zero signal speed everywhere).
    """
    mesh = field.mesh
    u = field.interior
    if mesh.ndim == 1:
        s = float(np.max(system.max_signal_speed(u, 0)))
        if s <= 0.0:
            raise ValueError("zero signal speed: supply an explicit dt")
        return cfl * mesh.dx / s
    flat = u.reshape(u.shape[0], -1)
    sx = float(np.max(system.max_signal_speed(flat, 0)))
    sy = float(np.max(system.max_signal_speed(flat, 1)))
    denom = sx / mesh.dx + sy / mesh.dy
    if denom <= 0.0:
        raise ValueError("zero signal speed: supply an explicit dt")
    return cfl / denom


def ssp_rk3_step(field: FieldSet, t: float, dt: float, rate_fn) -> FieldSet:
    """Classic three-stage SSP convex-combination update; rate_fn(field, t) -> FieldSet."""
    u0 = field.interior.copy()
    k1 = rate_fn(field, t)
    field.interior = u0 + dt * k1.interior
    k2 = rate_fn(field, t + dt)
    field.interior = 0.75 * u0 + 0.25 * (field.interior + dt * k2.interior)
    k3 = rate_fn(field, t + 0.5 * dt)
    field.interior = (u0 + 2.0 * (field.interior + dt * k3.interior)) / 3.0
    return field


def imex_ssp3_433_step(field: FieldSet, t: float, dt: float, rate_fn, system) -> FieldSet:
    """One IMEX-SSP3(4,3,3) step with pointwise implicit relaxation.

    rate_fn must exclude the stiff source; system.relaxation_solve(u, dt_eff)
    solves u = u_in + dt_eff * S(u) per zone.
    """
    a = _ALPHA
    mesh = field.mesh
    u0 = field.interior.copy()

    def relax(u_in, dt_eff):
        shape = u_in.shape
        flat = u_in.reshape(shape[0], -1)
        out = system.relaxation_solve(flat, dt_eff)
        return out.reshape(shape)

    def explicit_rate(u_at, t_at):
        field.interior = u_at
        return rate_fn(field, t_at).interior

    # stage 1: no explicit part, implicit weight alpha
    u1 = relax(u0, a * dt)
    s1 = (u1 - u0) / (a * dt)
    # stage 2: implicit row (-alpha, alpha)
    arg2 = u0 - dt * a * s1
    u2 = relax(arg2, a * dt)
    s2 = (u2 - arg2) / (a * dt)
    k2 = explicit_rate(u2, t)
    # stage 3: explicit row (0, 1, 0); implicit row (0, 1-alpha, alpha)
    arg3 = u0 + dt * k2 + dt * (1.0 - a) * s2
    u3 = relax(arg3, a * dt)
    s3 = (u3 - arg3) / (a * dt)
    k3 = explicit_rate(u3, t + dt)
    # stage 4: explicit row (0, 1/4, 1/4, 0);
    # implicit row (beta, eta, 1/2 - beta - eta - alpha, alpha)
    arg4 = u0 + dt * (0.25 * k2 + 0.25 * k3) + dt * (
        _BETA * s1 + _ETA * s2 + (0.5 - _BETA - _ETA - a) * s3)
    u4 = relax(arg4, a * dt)
    s4 = (u4 - arg4) / (a * dt)
    k4 = explicit_rate(u4, t + 0.5 * dt)
    # combination weights (0, 1/6, 1/6, 2/3) for both parts
    field.interior = u0 + dt * ((k2 + s2) / 6.0 + (k3 + s3) / 6.0
                                + 2.0 * (k4 + s4) / 3.0)
    return field


def advance(field: FieldSet, t: float, dt: float, rate_fn, system,
            stepper: str = "ssp3") -> FieldSet:
    if stepper == "ssp3":
        return ssp_rk3_step(field, t, dt, rate_fn)
    if stepper == "imex433":
        return imex_ssp3_433_step(field, t, dt, rate_fn, system)
    raise ValueError(f"unknown stepper {stepper!r}; expected one of {STEPPERS}")
