"""Semi-discrete rate assembly: interpolation, Riemann solve, derivative
ladders and the fluctuation-form update, dimension by dimension.

The main (three-interpolation) formulation per zone i reads

  dU_i/dt = -(1/dx) [ D-_{i+1/2} + D+_{i-1/2} ]
            -(1/dx) [ F(U^-_{i+1/2}) - F(U^+_{i-1/2}) ]
            -(1/dx) C(U_i) (U^-_{i+1/2} - U^+_{i-1/2})
            -(1/dx) C(U_i) [ lad(U)_{i+1/2} - lad(U)_{i-1/2} ]
            -(1/dx) [ lad(F)_{i+1/2} - lad(F)_{i-1/2} ]

with the boundary ladder lad(X) = sum_m c_{2m} dx^{2m} d^{2m}X/dx^{2m}
truncated by the order, c = (-1/24, 7/5760, -31/967680, 127/154828800).
Zones flagged by the flattener drop both ladder groups.  The flux-form
variant (conservative systems only) reconstructs F* = D- + F(U^-) at each
boundary; the two-interpolation variant replaces the state ladder by the
zone-centered gradient of the interpolant; the central variant swaps the
limited derivative interpolation for raw central differences.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import derivs, interp
from .mesh import FieldSet, extract_strip, fill_ghosts, scatter_strip_update
from .riemann import RIEMANN_SOLVERS, solve_riemann
from .systems.base import AdmissibilityError, HyperbolicityError

FORMULATIONS = ("eq2", "eq13", "eq15", "central")

# boundary-ladder coefficients of dx^2, dx^4, dx^6, dx^8
LADDER = (-1.0 / 24.0, 7.0 / 5760.0, -31.0 / 967680.0, 127.0 / 154828800.0)
# zone-center Taylor ladder of the odd derivatives (two-interpolation path)
CENTER_LADDER = (1.0 / 24.0, 1.0 / 1920.0, 1.0 / 322560.0, 1.0 / 92897280.0)

FLATTEN_THRESHOLD = 1.0e-12


@dataclass(frozen=True)
class SchemeConfig:
    """Spatial scheme selection."""

    order: int = 5
    formulation: str = "eq15"
    riemann: str = "llf"
    char_interp: bool = True       # characteristic-space zone interpolation
    char_derivs: bool = False      # characteristic projection of the ladders
    ladder_weights: str = "auto"   # "auto" (system default), "shared", "component"
    flattener: bool = False
    weno: interp.WenoParams = field(default_factory=interp.WenoParams)

    def __post_init__(self):
        if self.order not in interp.SUPPORTED_ORDERS:
            raise ValueError(f"order must be one of {interp.SUPPORTED_ORDERS}")
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"formulation must be one of {FORMULATIONS}")
        if self.riemann not in RIEMANN_SOLVERS:
            raise ValueError(f"riemann must be one of {RIEMANN_SOLVERS}")
        if self.ladder_weights not in ("auto", "shared", "component"):
            raise ValueError("ladder_weights must be 'auto', 'shared' or 'component'")

    def validate_for(self, system):
        if self.formulation == "eq2" and system.has_noncons:
            raise ValueError(
                "the flux-form (eq2) update requires a system without "
                "non-conservative products")


def boundary_ladder(face_derivs: list[np.ndarray], order: int) -> np.ndarray:
    """Combine window-unit even derivatives into the boundary correction.

    The derivatives arrive already scaled by dx^{2m} (window units), so the
    ladder is a plain weighted sum, truncated at the configured order.
    """
    terms = (order - 1) // 2
    out = LADDER[0] * face_derivs[0]
    for m in range(1, terms):
        out = out + LADDER[m] * face_derivs[m]
    return out


def _interp_states(strip, system, cfg, axis, nz):
    """Interface states from zone interpolation.

    Returns (u_minus, u_plus, slope) where u_minus[:, f] approaches boundary
    f from the left and u_plus[:, f] from the right; boundary f sits between
    strip zones rad+f and rad+f+1.  ``slope`` is the zone-centered gradient
    of the interpolant (two-interpolation path) for the valid zones.

    Interpolated states that leave the admissible set (possible right at
    strong jumps, where back-projection from characteristic space can
    overshoot) fall back to their zone-center value; evolved states are
    never altered.
    """
    want_slope = cfg.formulation == "eq13"
    out = None
    if cfg.char_interp:
        try:
            lam, r_eig, l_eig = system.eigensystem(strip[:, nz[0]:nz[1]], axis)
            out = interp.interpolate_characteristic(strip, l_eig, r_eig,
                                                    cfg.order, cfg.weno,
                                                    want_slope)
        except HyperbolicityError:
            # transient loss of hyperbolicity: drop to component space for
            # this strip (the fluctuation solvers only need speed bounds)
            out = None
    if out is None:
        out = interp.interpolate_strip(strip, cfg.order, cfg.weno, want_slope)
    right, left = out[0], out[1]
    slope = out[2] if want_slope else None
    centers = strip[:, nz[0]:nz[1]]
    bad = ~(system.admissible_mask(right) & system.admissible_mask(left))
    if np.any(bad):
        right = np.where(bad, centers, right)
        left = np.where(bad, centers, left)
        if slope is not None:
            slope = np.where(bad, 0.0, slope)
    u_minus = right[:, :-1]
    u_plus = left[:, 1:]
    return u_minus, u_plus, slope


def _face_derivatives(data, order, cfg, u_star, system, axis, limited):
    """Even derivatives of zone data at boundaries, optionally limited and
    optionally projected into the characteristic space of the resolved
    state."""
    fn = derivs.interp_face_derivs if limited else derivs.central_face_derivs
    kwargs = {"params": cfg.weno} if limited else {}
    if not (limited and cfg.char_derivs):
        return fn(data, order, **kwargs)
    ok = system.admissible_mask(u_star)
    if not ok.all():
        if not ok.any():
            return fn(data, order, **kwargs)
        u_star = np.where(ok, u_star, u_star[:, np.argmax(ok)][:, None])
    lam, r_eig, l_eig = system.eigensystem(u_star, axis)
    if not ok.all():
        eye = np.eye(u_star.shape[0])
        r_eig[~ok] = eye
        l_eig[~ok] = eye
    win = derivs.face_windows(data, order)            # (nvar, nf, w)
    cw = np.einsum("fab,bfw->faw", l_eig, win)
    ders = fn(None, order, windows=cw, **kwargs)
    return [np.einsum("fab,fb->af", r_eig, d) for d in ders]


def sweep_strip(strip: np.ndarray, system, cfg: SchemeConfig, axis: int,
                dx: float, nghost: int) -> np.ndarray:
    """Rate contribution of one strip; returns (nvar, n_interior)."""
    n = strip.shape[1]
    n_int = n - 2 * nghost
    order = cfg.order
    rad = interp.interp_tables(order).radius
    if nghost < max(rad + 1, (order + 1) // 2):
        raise ValueError(f"order {order} needs at least "
                         f"{max(rad + 1, (order + 1) // 2)} ghost layers, "
                         f"mesh has {nghost}")

    # states at boundaries (boundary f = 0 .. n_int lies between interior
    # zones f-1 and f, i.e. strip zones nghost+f-1 and nghost+f)
    zlo = nghost - 1 - rad
    zhi = nghost + n_int + 1 + rad
    sub = strip[:, zlo:zhi]
    if not system.admissible_mask(sub).all():
        system.check_admissible(sub, context=f"axis {axis} before sweep")
    u_minus, u_plus, slope = _interp_states(
        sub, system, cfg, axis, (rad, sub.shape[1] - rad))

    res = solve_riemann(cfg.riemann, system, u_minus, u_plus, axis)
    f_minus = system.flux(u_minus, axis)
    f_plus = system.flux(u_plus, axis)

    # boundary ladders of flux and state data
    half = (order + 1) // 2
    flo = nghost - 1 - half + 1
    fhi = nghost + n_int + half
    fsub = strip[:, flo:fhi]
    flux_data = system.flux(fsub, axis)
    limited = cfg.formulation != "central"
    need_state_ladder = cfg.formulation in ("eq15", "central") and system.has_noncons
    shared = cfg.ladder_weights == "shared" or (
        cfg.ladder_weights == "auto" and system.shared_ladder_default)
    if limited and shared and not cfg.char_derivs:
        # one weight set per boundary, from the state data, applied to both
        # ladders: keeps the ladder a single linear operator per boundary
        state_win = derivs.face_windows(fsub, order)
        weights = derivs.shared_face_weights(state_win, order, cfg.weno)
        lad_f = boundary_ladder(
            derivs.apply_face_derivs(derivs.face_windows(flux_data, order),
                                     order, weights, cfg.weno), order)
        if need_state_ladder:
            lad_u = boundary_ladder(
                derivs.apply_face_derivs(state_win, order, weights, cfg.weno),
                order)
    else:
        lad_f = boundary_ladder(
            _face_derivatives(flux_data, order, cfg, res.u_star, system, axis,
                              limited), order)
        if need_state_ladder:
            lad_u = boundary_ladder(
                _face_derivatives(fsub, order, cfg, res.u_star, system, axis,
                                  limited), order)

    interior = strip[:, nghost:nghost + n_int]
    inv_dx = 1.0 / dx
    rate = -(res.d_minus[:, 1:] + res.d_plus[:, :-1]) * inv_dx
    rate -= (f_minus[:, 1:] - f_plus[:, :-1]) * inv_dx

    if cfg.flattener:
        eta = system.flattener(strip[:, nghost - 1:nghost + n_int + 1])[1:-1]
        keep = eta <= FLATTEN_THRESHOLD
    else:
        keep = None

    lad_f_diff = (lad_f[:, 1:] - lad_f[:, :-1]) * inv_dx
    if keep is not None:
        lad_f_diff = lad_f_diff * keep
    rate -= lad_f_diff

    if system.has_noncons:
        if cfg.formulation == "eq13":
            rate -= system.noncons_product(interior, slope[:, 1:-1], axis) * inv_dx
        else:
            jump = (u_minus[:, 1:] - u_plus[:, :-1])
            if need_state_ladder:
                lad_u_diff = lad_u[:, 1:] - lad_u[:, :-1]
                if keep is not None:
                    lad_u_diff = lad_u_diff * keep
                jump = jump + lad_u_diff
            rate -= system.noncons_product(interior, jump, axis) * inv_dx
    return rate


def compute_rate(field: FieldSet, system, cfg: SchemeConfig, bcs: dict,
                 threads: int = 1, forcing=None, t: float = 0.0) -> FieldSet:
    """Full semi-discrete rate: ghost fill, per-axis strip sweeps, sources.

    ``forcing(x[, y], t) -> (nvar, ...)`` adds a manufactured-solution
    source; the system's own (non-stiff-treated) source is not included
    here, the steppers decide how to couple it.
    """
    mesh = field.mesh
    fill_ghosts(field, bcs)
    rate = field.zeros_like()
    if mesh.ndim == 1:
        strip = extract_strip(field, 0, 0)
        contrib = sweep_strip(strip, system, cfg, 0, mesh.dx, mesh.nghost)
        scatter_strip_update(rate, contrib, 0, 0)
    else:
        def run_axis(axis, j):
            strip = extract_strip(field, axis, j)
            contrib = sweep_strip(strip, system, cfg, axis,
                                  mesh.spacing(axis), mesh.nghost)
            scatter_strip_update(rate, contrib, axis, j)

        for axis in (0, 1):
            count = mesh.ny if axis == 0 else mesh.nx
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    list(pool.map(lambda j, a=axis: run_axis(a, j), range(count)))
            else:
                for j in range(count):
                    run_axis(axis, j)
    if forcing is not None:
        if mesh.ndim == 1:
            rate.interior += forcing(mesh.xcenters(), t)
        else:
            x = mesh.xcenters()[None, None, :]
            y = mesh.ycenters()[None, :, None]
            rate.interior += forcing(x, y, t)
    out = rate.interior
    if not np.all(np.isfinite(out)):
        raise AdmissibilityError("non-finite rate produced (blow-up)")
    return rate
