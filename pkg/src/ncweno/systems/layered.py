"""Two-layer shallow water and two-phase debris flow.

Both systems evolve seven variables: (h, h*u, h*v) for each of two layers
plus the bottom topography b, which carries no flux and never changes.  The
momentum equations couple the layers through non-conservative products in
the other layer's height and in b.

The quasilinear matrix restricted to (h_a, m_a, h_b, m_b) along the sweep
axis is a coupled pair of shallow-water cores; its four eigenvalues solve

    ((lam - u_a)^2 - G_a) ((lam - u_b)^2 - G_b) = K_a K_b

and are found with a batched dense eigenvalue call, after which all right
and left eigenvectors follow in closed form.  The transverse-velocity shear
waves and the topography wave are linearly degenerate with fully analytic
eigenvectors, which is what the anti-diffusive Riemann solver needs to hold
stationary discontinuities exactly.
"""

from __future__ import annotations

import numpy as np

from .base import HyperbolicityError, HyperbolicSystem

IH_A, IH_B, IB = 0, 3, 6


class LayeredTwoPhase(HyperbolicSystem):
    """Shared machinery; subclasses define the pressure coupling."""

    layer_names = ("a", "b")

    def __init__(self, ndim: int = 1, gravity: float = 9.8, density_ratio: float = 0.5):
        super().__init__(ndim)
        self.gravity = gravity
        self.density_ratio = density_ratio

    @property
    def nvar(self):
        return 7

    @property
    def conservative_components(self):
        return (IH_A, IH_B, IB)

    @property
    def var_names(self):
        na, nb = self.layer_names
        return (f"h_{na}", f"hu_{na}", f"hv_{na}",
                f"h_{nb}", f"hu_{nb}", f"hv_{nb}", "b")

    @property
    def prim_names(self):
        na, nb = self.layer_names
        return (f"h_{na}", f"u_{na}", f"v_{na}",
                f"h_{nb}", f"u_{nb}", f"v_{nb}", "b")

    # subclasses supply these ------------------------------------------------
    def _pressure(self, h_own, h_other, layer):
        """Depth-integrated pressure term in the own-momentum flux."""
        raise NotImplementedError

    def _pressure_dh(self, h_own, h_other, layer):
        """(dP/dh_own, dP/dh_other)."""
        raise NotImplementedError

    def _noncons_h_coeff(self, h_own, layer):
        """Coefficient of grad(h_other) in the own-momentum equation."""
        raise NotImplementedError

    # -- maps -----------------------------------------------------------------
    def primitive(self, u):
        out = u.copy()
        for base in (IH_A, IH_B):
            out[base + 1] = u[base + 1] / u[base]
            out[base + 2] = u[base + 2] / u[base]
        return out

    def conserved(self, prim):
        out = prim.copy()
        for base in (IH_A, IH_B):
            out[base + 1] = prim[base] * prim[base + 1]
            out[base + 2] = prim[base] * prim[base + 2]
        return out

    def admissible_mask(self, u):
        ok = np.all(np.isfinite(u), axis=0)
        with np.errstate(invalid="ignore"):
            return ok & (u[IH_A] > 0.0) & (u[IH_B] > 0.0)

    # -- physics -----------------------------------------------------------------
    def _vel(self, u, base, comp):
        return u[base + 1 + comp] / u[base]

    def flux(self, u, axis: int = 0):
        f = np.zeros_like(u)
        for layer, base in enumerate((IH_A, IH_B)):
            other = IH_B if base == IH_A else IH_A
            un = self._vel(u, base, axis)
            f[base] = u[base + 1 + axis]
            f[base + 1] = u[base + 1] * un
            f[base + 2] = u[base + 2] * un
            f[base + 1 + axis] += self._pressure(u[base], u[other], layer)
        return f

    def noncons_matrix(self, u, axis: int = 0):
        n = u.shape[1]
        g = self.gravity
        c = np.zeros((n, 7, 7))
        for layer, base in enumerate((IH_A, IH_B)):
            other = IH_B if base == IH_A else IH_A
            im = base + 1 + axis
            c[:, im, other] = self._noncons_h_coeff(u[base], layer)
            c[:, im, IB] = g * u[base]
        return c

    def noncons_product(self, u, du, axis: int = 0):
        g = self.gravity
        out = np.zeros_like(du)
        for layer, base in enumerate((IH_A, IH_B)):
            other = IH_B if base == IH_A else IH_A
            out[base + 1 + axis] = (self._noncons_h_coeff(u[base], layer) * du[other]
                                    + g * u[base] * du[IB])
        return out

    def flux_jacobian(self, u, axis: int = 0):
        n = u.shape[1]
        a = np.zeros((n, 7, 7))
        for layer, base in enumerate((IH_A, IH_B)):
            other = IH_B if base == IH_A else IH_A
            un = self._vel(u, base, axis)
            ut = self._vel(u, base, 1 - axis)
            im, it = base + 1 + axis, base + 2 - axis
            dp_own, dp_other = self._pressure_dh(u[base], u[other], layer)
            a[:, base, im] = 1.0
            a[:, im, base] = dp_own - un * un
            a[:, im, im] = 2.0 * un
            a[:, im, other] = dp_other
            a[:, it, base] = -un * ut
            a[:, it, im] = ut
            a[:, it, it] = un
        return a

    # -- wave structure ------------------------------------------------------------
    def _core_coeffs(self, u, axis):
        """u_a, u_b, G_a, G_b, K_a, K_b of the coupled height-momentum core."""
        ua = self._vel(u, IH_A, axis)
        ub = self._vel(u, IH_B, axis)
        ga = self._pressure_dh(u[IH_A], u[IH_B], 0)
        gb = self._pressure_dh(u[IH_B], u[IH_A], 1)
        ka = ga[1] + self._noncons_h_coeff(u[IH_A], 0)
        kb = gb[1] + self._noncons_h_coeff(u[IH_B], 1)
        return ua, ub, ga[0], gb[0], ka, kb

    def signal_speed_range(self, u, axis: int = 0):
        """Safe outer bounds on the full wave fan (covers the stationary
        topography wave and both shear waves as well)."""
        ua, ub, ga, gb, ka, kb = self._core_coeffs(u, axis)
        m = np.sqrt(np.maximum(ga, gb) + np.sqrt(np.maximum(ka * kb, 0.0)))
        lo = np.minimum(np.minimum(ua, ub) - m, 0.0)
        hi = np.maximum(np.maximum(ua, ub) + m, 0.0)
        return lo, hi

    def _core_eigvals(self, u, axis):
        """Four coupled gravity-wave speeds per zone, ascending."""
        n = u.shape[1]
        ua, ub, ga, gb, ka, kb = self._core_coeffs(u, axis)
        core = np.zeros((n, 4, 4))
        core[:, 0, 1] = 1.0
        core[:, 1, 0] = ga - ua * ua
        core[:, 1, 1] = 2.0 * ua
        core[:, 1, 2] = ka
        core[:, 2, 3] = 1.0
        core[:, 3, 0] = kb
        core[:, 3, 2] = gb - ub * ub
        core[:, 3, 3] = 2.0 * ub
        lam = np.linalg.eigvals(core)
        scale = np.abs(lam).max(axis=-1) + 1e-300
        bad = np.abs(lam.imag).max(axis=-1) > 1e-8 * scale
        if np.any(bad):
            raise HyperbolicityError(
                f"{self.name}: complex coupled wave speeds (hyperbolicity lost) "
                f"at zones {np.nonzero(bad)[0][:8].tolist()}")
        return np.sort(lam.real, axis=-1)

    def _topography_wave(self, u, axis):
        """Stationary eigenvector with a topography jump: solve the 2x2
        height response, slave the transverse momenta.  Returns (r, ok)."""
        n = u.shape[1]
        g = self.gravity
        ua, ub, ga, gb, ka, kb = self._core_coeffs(u, axis)
        a11 = ga - ua * ua
        a22 = gb - ub * ub
        det = a11 * a22 - ka * kb
        scale = np.abs(a11) + np.abs(a22) + np.abs(ka) + np.abs(kb) + 1e-300
        ok = np.abs(det) > 1e-10 * scale
        det = np.where(ok, det, 1.0)
        rhs_a = -g * u[IH_A]
        rhs_b = -g * u[IH_B]
        dh_a = (rhs_a * a22 - ka * rhs_b) / det
        dh_b = (a11 * rhs_b - rhs_a * kb) / det
        r = np.zeros((7, n))
        r[IH_A] = dh_a
        r[IH_B] = dh_b
        r[IH_A + 2 - axis] = self._vel(u, IH_A, 1 - axis) * dh_a
        r[IH_B + 2 - axis] = self._vel(u, IH_B, 1 - axis) * dh_b
        r[IB] = 1.0
        return r, ok

    def ld_fields(self, u_star, axis: int = 0):
        """Two shear waves and the topography wave, all analytic."""
        n = u_star.shape[1]
        fields = []
        for base in (IH_A, IH_B):
            un = self._vel(u_star, base, axis)
            vt = self._vel(u_star, base, 1 - axis)
            r = np.zeros((7, n))
            r[base + 2 - axis] = 1.0
            l = np.zeros((7, n))
            l[base] = -vt
            l[base + 2 - axis] = 1.0
            fields.append((un, r, l))
        r, ok = self._topography_wave(u_star, axis)
        r = np.where(ok, r, 0.0)
        l = np.zeros((7, n))
        l[IB] = np.where(ok, 1.0, 0.0)
        r[IB] = np.where(ok, 1.0, 0.0)
        fields.append((np.zeros(n), r, l))
        return fields

    def eigensystem(self, u, axis: int = 0):
        """Closed-form eigenvectors on top of the numeric core eigenvalues."""
        n = u.shape[1]
        ua, ub, ga, gb, ka, kb = self._core_coeffs(u, axis)
        va = self._vel(u, IH_A, 1 - axis)
        vb = self._vel(u, IH_B, 1 - axis)
        core = self._core_eigvals(u, axis)     # (n, 4)
        lam = np.empty((7, n))
        r = np.zeros((n, 7, 7))
        l = np.zeros((n, 7, 7))
        iqa, iqb = IH_A + 2 - axis, IH_B + 2 - axis
        ima, imb = IH_A + 1 + axis, IH_B + 1 + axis
        degenerate = np.zeros(n, dtype=bool)
        speed = np.abs(core).max(axis=-1) + np.abs(ua) + np.abs(ub) + 1e-300
        for w in range(4):
            lw = core[:, w]
            y = ((lw - ua) ** 2 - ga) / ka
            lam[w] = lw
            r[:, IH_A, w] = 1.0
            r[:, ima, w] = lw
            r[:, iqa, w] = va
            r[:, IH_B, w] = y
            r[:, imb, w] = lw * y
            r[:, iqb, w] = vb * y
            # left row: (lam-2u_a, 1, ., lam-2u_b scaled, z, .) then b closure
            z = ((lw - ua) ** 2 - ga) / kb
            l[:, w, IH_A] = lw - 2.0 * ua
            l[:, w, ima] = 1.0
            l[:, w, IH_B] = (lw - 2.0 * ub) * z
            l[:, w, imb] = z
            with np.errstate(divide="ignore", invalid="ignore"):
                l[:, w, IB] = (l[:, w, IH_A] * 0.0
                               + (self.gravity * u[IH_A] * 1.0
                                  + self.gravity * u[IH_B] * z)) / lw
            degenerate |= np.abs(lw) < 1e-10 * speed
            degenerate |= np.minimum(np.abs(lw - ua), np.abs(lw - ub)) < 1e-10 * speed
        # shear waves and topography wave
        shear = [(ua, IH_A, iqa, va), (ub, IH_B, iqb, vb)]
        for w, (lw, base, iq, vt) in enumerate(shear, start=4):
            lam[w] = lw
            r[:, iq, w] = 1.0
            l[:, w, base] = -vt
            l[:, w, iq] = 1.0
        rtop, ok = self._topography_wave(u, axis)
        degenerate |= ~ok
        lam[6] = 0.0
        r[:, :, 6] = rtop.T
        l[:, 6, IB] = 1.0
        # normalize lefts so L R = I
        dots = np.einsum("nkv,nvk->nk", l, r)
        bad_norm = np.abs(dots) < 1e-12
        degenerate |= bad_norm.any(axis=-1)
        dots = np.where(bad_norm, 1.0, dots)
        l = l / dots[:, :, None]
        idx = np.argsort(lam.T, axis=-1, kind="stable")
        lam = np.take_along_axis(lam.T, idx, axis=-1).T
        r = np.take_along_axis(r, idx[:, None, :], axis=-1)
        l = np.take_along_axis(l, idx[:, :, None], axis=1)
        if np.any(degenerate):
            eye = np.eye(7)
            r[degenerate] = eye
            l[degenerate] = eye
        return lam, r, l


class TwoLayerShallowWater(LayeredTwoPhase):
    """Two stacked immiscible layers; layer a rides on layer b and
    density_ratio = rho_a / rho_b < 1 for stable stratification."""

    name = "two_layer_sw"
    has_noncons = True
    layer_names = ("1", "2")

    def _pressure(self, h_own, h_other, layer):
        return 0.5 * self.gravity * h_own ** 2

    def _pressure_dh(self, h_own, h_other, layer):
        return self.gravity * h_own, np.zeros_like(h_own)

    def _noncons_h_coeff(self, h_own, layer):
        g = self.gravity
        return g * h_own if layer == 0 else self.density_ratio * g * h_own


class DebrisFlow(LayeredTwoPhase):
    """Solid granular phase plus interstitial fluid over fixed topography;
    density_ratio = rho_fluid / rho_solid."""

    name = "debris_flow"
    has_noncons = True
    layer_names = ("s", "f")

    def _pressure(self, h_own, h_other, layer):
        g, rho = self.gravity, self.density_ratio
        if layer == 0:
            return 0.5 * g * rho * h_own ** 2 + 0.5 * g * (1.0 - rho) * h_own * (h_other + h_own)
        return 0.5 * g * h_own ** 2

    def _pressure_dh(self, h_own, h_other, layer):
        g, rho = self.gravity, self.density_ratio
        if layer == 0:
            return (g * rho * h_own + 0.5 * g * (1.0 - rho) * (h_other + 2.0 * h_own),
                    0.5 * g * (1.0 - rho) * h_own)
        return g * h_own, np.zeros_like(h_own)

    def _noncons_h_coeff(self, h_own, layer):
        g, rho = self.gravity, self.density_ratio
        return g * rho * h_own if layer == 0 else g * h_own
