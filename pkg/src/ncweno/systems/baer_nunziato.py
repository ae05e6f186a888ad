"""Two-phase compressible flow with stiffened-gas closures.

Seven variables in 1D, nine in 2D: a (partial density, momentum, total
energy) block per phase followed by the volume fraction of phase 1.  The
interface closure is P_I = p2, V_I = v1.  Non-conservative products appear
only through gradients of the volume fraction; the interface-pressure term
in the energy equations is rewritten with the volume-fraction transport
equation so that every non-conservative product is a spatial one.

Optional stiff relaxation sources (velocity drag ~ lam_drag, pressure
relaxation ~ mu_press) make the system usable with the IMEX stepper: the
pointwise implicit stage solve is exact for the velocity/energy exchange
and a Newton iteration in the volume fraction for the pressure part.

The eigensystem is analytic up to two batched 3x3 (4x4 in 2D) linear solves
for the coupling column of the volume-fraction wave; resonant zones
(phase-1 velocity hitting a phase-2 characteristic) are reported so callers
can drop to component-wise interpolation there.
"""

from __future__ import annotations

import numpy as np

from .base import AdmissibilityError, HyperbolicSystem

PHI_FLOOR = 1.0e-8


def stiffened_energy(p, rho, gamma, pi):
    """Specific internal energy of a stiffened gas."""
    return (p + gamma * pi) / ((gamma - 1.0) * rho)


def stiffened_sound_speed(p, rho, gamma, pi):
    return np.sqrt(gamma * (p + pi) / rho)


def volume_fraction_flattener(phi: np.ndarray, kappa: float = 0.1,
                              eps: float = 1.0e-12) -> np.ndarray:
    """Shock flattener from the volume-fraction field of a strip.

    Over each 3-zone neighborhood, form the sum and difference of the
    extremal values, measure the jump against both the local magnitude and
    its distance from unity, and ramp the result into [0, 1].  End zones
    reuse their neighbor's value.
    """
    n = phi.shape[-1]
    eta = np.zeros(n)
    if n < 3:
        return eta
    win = np.lib.stride_tricks.sliding_window_view(phi, 3, axis=-1)
    hi = win.max(axis=-1)
    lo = win.min(axis=-1)
    d_plus = hi + lo
    d_minus = hi - lo
    a = np.maximum(d_minus / (0.5 * d_plus + eps),
                   d_minus / (np.abs(1.0 - 0.5 * d_plus) + eps))
    eta[1:-1] = np.minimum(1.0, np.maximum(0.0, 0.5 * (a - kappa)))
    eta[0] = eta[1]
    eta[-1] = eta[-2]
    return eta


class BaerNunziato(HyperbolicSystem):
    name = "baer_nunziato"
    has_noncons = True
    has_relaxation = True
    # shared ladder weights keep uniform-pressure/velocity mixtures exactly
    # uniform (the ladder becomes one linear operator per boundary)
    shared_ladder_default = True

    def __init__(self, ndim: int = 1, gamma1: float = 1.4, pi1: float = 0.0,
                 gamma2: float = 1.4, pi2: float = 0.0,
                 lam_drag: float = 0.0, mu_press: float = 0.0,
                 flattener_kappa: float = 0.1):
        super().__init__(ndim)
        self.gamma = (gamma1, gamma2)
        self.pi = (pi1, pi2)
        self.lam_drag = lam_drag
        self.mu_press = mu_press
        self.flattener_kappa = flattener_kappa
        self.nb = ndim + 2               # variables per phase block
        self.iphi = 2 * self.nb

    @property
    def is_stiff(self):
        return self.lam_drag > 0.0 or self.mu_press > 0.0

    @property
    def nvar(self):
        return 2 * self.nb + 1

    @property
    def conservative_components(self):
        return (self._blk(0), self._blk(1))

    @property
    def var_names(self):
        mom = ("mom_x",) if self.ndim == 1 else ("mom_x", "mom_y")
        out = []
        for j in (1, 2):
            out += [f"ad{j}"] + [f"a{m}{j}" for m in mom] + [f"aE{j}"]
        return tuple(out) + ("phi1",)

    @property
    def prim_names(self):
        vel = ("u",) if self.ndim == 1 else ("u", "v")
        out = []
        for j in (1, 2):
            out += [f"rho{j}"] + [f"{v}{j}" for v in vel] + [f"p{j}"]
        return tuple(out) + ("phi1",)

    # -- per-phase helpers ----------------------------------------------------
    def _blk(self, j):
        """Start index of the phase-j block (j in (0, 1))."""
        return j * self.nb

    def phase_fraction(self, u, j):
        return u[self.iphi] if j == 0 else 1.0 - u[self.iphi]

    def _kinetic(self, u, j):
        b = self._blk(j)
        ke = 0.5 * u[b + 1] ** 2 / u[b]
        if self.ndim == 2:
            ke = ke + 0.5 * u[b + 2] ** 2 / u[b]
        return ke

    def phase_pressure_times_phi(self, u, j):
        """phi_j * p_j straight from conserved variables."""
        g, pi = self.gamma[j], self.pi[j]
        b = self._blk(j)
        e_int = u[b + self.nb - 1] - self._kinetic(u, j)
        return (g - 1.0) * e_int - g * pi * self.phase_fraction(u, j)

    def phase_pressure(self, u, j):
        return self.phase_pressure_times_phi(u, j) / self.phase_fraction(u, j)

    def phase_velocity(self, u, j, comp):
        b = self._blk(j)
        return u[b + 1 + comp] / u[b]

    def phase_sound_speed(self, u, j):
        rho = u[self._blk(j)] / self.phase_fraction(u, j)
        return stiffened_sound_speed(self.phase_pressure(u, j), rho,
                                     self.gamma[j], self.pi[j])

    # -- maps -------------------------------------------------------------------
    def primitive(self, u):
        out = np.empty_like(u)
        for j in (0, 1):
            b = self._blk(j)
            phi = self.phase_fraction(u, j)
            out[b] = u[b] / phi
            for c in range(self.ndim):
                out[b + 1 + c] = u[b + 1 + c] / u[b]
            out[b + self.nb - 1] = self.phase_pressure(u, j)
        out[self.iphi] = u[self.iphi]
        return out

    def conserved(self, prim):
        u = np.empty_like(prim)
        u[self.iphi] = prim[self.iphi]
        for j in (0, 1):
            b = self._blk(j)
            phi = prim[self.iphi] if j == 0 else 1.0 - prim[self.iphi]
            rho, p = prim[b], prim[b + self.nb - 1]
            g, pi = self.gamma[j], self.pi[j]
            u[b] = phi * rho
            q2 = 0.0 * rho
            for c in range(self.ndim):
                u[b + 1 + c] = phi * rho * prim[b + 1 + c]
                q2 = q2 + prim[b + 1 + c] ** 2
            u[b + self.nb - 1] = phi * ((p + g * pi) / (g - 1.0) + 0.5 * rho * q2)
        return u

    # -- physics ------------------------------------------------------------------
    def flux(self, u, axis: int = 0):
        f = np.zeros_like(u)
        for j in (0, 1):
            b = self._blk(j)
            un = self.phase_velocity(u, j, axis)
            pphi = self.phase_pressure_times_phi(u, j)
            f[b] = u[b + 1 + axis]
            for c in range(self.ndim):
                f[b + 1 + c] = u[b + 1 + c] * un
            f[b + 1 + axis] += pphi
            f[b + self.nb - 1] = un * (u[b + self.nb - 1] + pphi)
        return f

    def noncons_matrix(self, u, axis: int = 0):
        n = u.shape[1]
        c = np.zeros((n, self.nvar, self.nvar))
        p_i = self.phase_pressure(u, 1)          # interface pressure = p2
        v_i = self.phase_velocity(u, 0, axis)    # interface velocity = v1
        for j, sgn in ((0, -1.0), (1, 1.0)):
            b = self._blk(j)
            c[:, b + 1 + axis, self.iphi] = sgn * p_i
            c[:, b + self.nb - 1, self.iphi] = sgn * p_i * v_i
        c[:, self.iphi, self.iphi] = v_i
        return c

    def noncons_product(self, u, du, axis: int = 0):
        p_i = self.phase_pressure(u, 1)
        v_i = self.phase_velocity(u, 0, axis)
        dphi = du[self.iphi]
        out = np.zeros_like(du)
        for j, sgn in ((0, -1.0), (1, 1.0)):
            b = self._blk(j)
            out[b + 1 + axis] = sgn * p_i * dphi
            out[b + self.nb - 1] = sgn * p_i * v_i * dphi
        out[self.iphi] = v_i * dphi
        return out

    def _phase_jacobian(self, u, j, axis):
        """d(phase flux block)/d(phase block variables): standard gas
        Jacobian with the effective contribution of phi*p."""
        g = self.gamma[j]
        b = self._blk(j)
        n = u.shape[1]
        nb = self.nb
        a = np.zeros((n, nb, nb))
        un = self.phase_velocity(u, j, axis)
        h = (u[b + nb - 1] + self.phase_pressure_times_phi(u, j)) / u[b]
        im, ie = 1 + axis, nb - 1
        if self.ndim == 1:
            q2 = un * un
            a[:, 0, 1] = 1.0
            a[:, 1, 0] = 0.5 * (g - 3.0) * q2
            a[:, 1, 1] = (3.0 - g) * un
            a[:, 1, 2] = g - 1.0
            a[:, 2, 0] = un * (0.5 * (g - 1.0) * q2 - h)
            a[:, 2, 1] = h - (g - 1.0) * q2
            a[:, 2, 2] = g * un
            return a
        it = 2 - axis
        ut = u[b + it] / u[b]
        q2 = un * un + ut * ut
        a[:, 0, im] = 1.0
        a[:, im, 0] = 0.5 * (g - 1.0) * q2 - un * un
        a[:, im, im] = (3.0 - g) * un
        a[:, im, it] = -(g - 1.0) * ut
        a[:, im, ie] = g - 1.0
        a[:, it, 0] = -un * ut
        a[:, it, im] = ut
        a[:, it, it] = un
        a[:, ie, 0] = un * (0.5 * (g - 1.0) * q2 - h)
        a[:, ie, im] = h - (g - 1.0) * un * un
        a[:, ie, it] = -(g - 1.0) * un * ut
        a[:, ie, ie] = g * un
        return a

    def flux_jacobian(self, u, axis: int = 0):
        n = u.shape[1]
        a = np.zeros((n, self.nvar, self.nvar))
        for j in (0, 1):
            b = self._blk(j)
            a[:, b:b + self.nb, b:b + self.nb] = self._phase_jacobian(u, j, axis)
            # explicit phi1 dependence of phi_j*p_j: -gamma_j*pi_j*(dphi_j/dphi1)
            gp = self.gamma[j] * self.pi[j] * (-1.0 if j == 0 else 1.0)
            un = self.phase_velocity(u, j, axis)
            a[:, b + 1 + axis, self.iphi] = gp
            a[:, b + self.nb - 1, self.iphi] = gp * un
        return a

    # -- waves -----------------------------------------------------------------
    def signal_speed_range(self, u, axis: int = 0):
        lo = None
        hi = None
        for j in (0, 1):
            un = self.phase_velocity(u, j, axis)
            cj = self.phase_sound_speed(u, j)
            lo = un - cj if lo is None else np.minimum(lo, un - cj)
            hi = un + cj if hi is None else np.maximum(hi, un + cj)
        return lo, hi

    def _phase_eigvecs(self, u, j, axis):
        """Right/left eigenvectors of the phase block (gas dynamics form)."""
        g = self.gamma[j]
        b = self._blk(j)
        n = u.shape[1]
        nb = self.nb
        un = self.phase_velocity(u, j, axis)
        c = self.phase_sound_speed(u, j)
        h = (u[b + nb - 1] + self.phase_pressure_times_phi(u, j)) / u[b]
        gm1 = g - 1.0
        b1 = gm1 / (c * c)
        one = np.ones(n)
        if self.ndim == 1:
            q2h = 0.5 * un * un
            rights = [np.stack([one, un - c, h - un * c]),
                      np.stack([one, un, q2h]),
                      np.stack([one, un + c, h + un * c])]
            b2 = b1 * q2h
            lefts = [np.stack([0.5 * (b2 + un / c), -0.5 * (b1 * un + 1.0 / c), 0.5 * b1]),
                     np.stack([1.0 - b2, b1 * un, -b1 * one]),
                     np.stack([0.5 * (b2 - un / c), -0.5 * (b1 * un - 1.0 / c), 0.5 * b1])]
            lams = [un - c, un, un + c]
            return lams, rights, lefts
        im, it = 1 + axis, 2 - axis
        ut = u[b + it] / u[b]
        q2h = 0.5 * (un * un + ut * ut)
        b2 = b1 * q2h
        zero = np.zeros(n)

        def vec(c0, cm, ct, ce):
            out = np.empty((nb, n))
            out[0], out[im], out[it], out[nb - 1] = c0, cm, ct, ce
            return out

        rights = [vec(one, un - c, ut, h - un * c),
                  vec(one, un, ut, q2h),
                  vec(zero, zero, one, ut),
                  vec(one, un + c, ut, h + un * c)]
        lefts = [vec(0.5 * (b2 + un / c), -0.5 * (b1 * un + 1.0 / c), -0.5 * b1 * ut, 0.5 * b1),
                 vec(1.0 - b2, b1 * un, b1 * ut, -b1 * one),
                 vec(-ut, zero, one, zero),
                 vec(0.5 * (b2 - un / c), -0.5 * (b1 * un - 1.0 / c), -0.5 * b1 * ut, 0.5 * b1)]
        lams = [un - c, un, un, un + c]
        return lams, rights, lefts

    def _phi_column(self, u, j, axis):
        """Coupling column of the quasilinear matrix for the phase block."""
        n = u.shape[1]
        k = np.zeros((n, self.nb))
        sgn = -1.0 if j == 0 else 1.0
        gp = self.gamma[j] * self.pi[j] * sgn
        p_i = self.phase_pressure(u, 1)
        un = self.phase_velocity(u, j, axis)
        v_in = self.phase_velocity(u, 0, axis)
        k[:, 1 + axis] = gp + sgn * p_i
        k[:, self.nb - 1] = gp * un + sgn * p_i * v_in
        return k

    def _compaction_parts(self, u, axis):
        """Solve (E_j - V_I) x_j = -k_j for the volume-fraction eigenvector.

        Phase 1 is always singular there (its contact rides at V_I), so it
        is solved with contact/shear-pinned normal equations; phase 2 gets a
        direct solve away from resonance and the pinned solve otherwise.
        Returns (x1, x2, degenerate_mask).
        """
        n = u.shape[1]
        nb = self.nb
        v_i = self.phase_velocity(u, 0, axis)
        xs = []
        degenerate = np.zeros(n, dtype=bool)
        for j in (0, 1):
            ej = self._phase_jacobian(u, j, axis)
            m = ej - v_i[:, None, None] * np.eye(nb)
            k = self._phi_column(u, j, axis)
            _, rights, _ = self._phase_eigvecs(u, j, axis)
            pins = [rights[1]] if self.ndim == 1 else [rights[1], rights[2]]
            if j == 0:
                x = self._pinned_solve(m, k, pins)
            else:
                det = np.linalg.det(m)
                scale = (np.abs(self.phase_velocity(u, 1, axis)) + np.abs(v_i)
                         + self.phase_sound_speed(u, 1)) ** nb + 1e-300
                sing = np.abs(det) < 1e-10 * scale
                if np.any(sing):
                    x = self._pinned_solve(m, k, pins)
                    if np.any(~sing):
                        xd = np.linalg.solve(m[~sing], -k[~sing, :, None])[..., 0]
                        x[~sing] = xd
                else:
                    x = np.linalg.solve(m, -k[:, :, None])[..., 0]
            resid = np.einsum("nij,nj->ni", m, x) + k
            rscale = (np.abs(k).sum(axis=1)
                      + np.abs(m).sum(axis=(1, 2)) * np.abs(x).sum(axis=1) + 1e-300)
            degenerate |= np.abs(resid).sum(axis=1) > 1e-6 * rscale
            xs.append(x)
        return xs[0], xs[1], degenerate

    @staticmethod
    def _pinned_solve(m, k, pins):
        """Least-squares solve of m x = -k with null directions pinned out."""
        a = np.einsum("nji,njk->nik", m, m)
        for r in pins:
            a = a + r.T[:, :, None] * r.T[:, None, :]
        rhs = -np.einsum("nji,nj->ni", m, k)
        return np.linalg.solve(a, rhs[:, :, None])[..., 0]

    def eigensystem(self, u, axis: int = 0):
        """Analytic eigensystem; degenerate (resonant) zones get identity
        projectors so characteristic interpolation falls back to components."""
        n = u.shape[1]
        nv = self.nvar
        nb = self.nb
        v_i = self.phase_velocity(u, 0, axis)
        x1, x2, degenerate = self._compaction_parts(u, axis)
        lam = np.empty((nv, n))
        r = np.zeros((n, nv, nv))
        l = np.zeros((n, nv, nv))
        col = 0
        for j in (0, 1):
            b = self._blk(j)
            lams, rights, lefts = self._phase_eigvecs(u, j, axis)
            xj = x1 if j == 0 else x2
            for w, (lw, rw, lv) in enumerate(zip(lams, rights, lefts)):
                lam[col] = lw
                r[:, b:b + nb, col] = rw.T
                l[:, col, b:b + nb] = lv.T
                # phi component of the left vector: orthogonality against the
                # volume-fraction wave (for acoustic waves this equals
                # l.k/(lam - V_I), but the direct form covers contacts too)
                l[:, col, self.iphi] = -np.einsum("vn,nv->n", lv, xj)
                col += 1
        # volume-fraction wave
        lam[col] = v_i
        r[:, 0:nb, col] = x1
        r[:, nb:2 * nb, col] = x2
        r[:, self.iphi, col] = 1.0
        l[:, col, self.iphi] = 1.0
        col += 1
        # sort ascending with a stable key
        idx = np.argsort(lam.T, axis=-1, kind="stable")
        lam = np.take_along_axis(lam.T, idx, axis=-1).T
        r = np.take_along_axis(r, idx[:, None, :], axis=-1)
        l = np.take_along_axis(l, idx[:, :, None], axis=1)
        if np.any(degenerate):
            eye = np.eye(nv)
            r[degenerate] = eye
            l[degenerate] = eye
        return lam, r, l

    def ld_fields(self, u_star, axis: int = 0):
        """Phase contacts (and 2D shears) plus the volume-fraction wave."""
        n = u_star.shape[1]
        nv = self.nvar
        v_i = self.phase_velocity(u_star, 0, axis)
        x1, x2, _ = self._compaction_parts(u_star, axis)
        fields = []
        for j in (0, 1):
            b = self._blk(j)
            lams, rights, lefts = self._phase_eigvecs(u_star, j, axis)
            xj = x1 if j == 0 else x2
            picks = [1] if self.ndim == 1 else [1, 2]
            for w in picks:
                rr = np.zeros((nv, n))
                ll = np.zeros((nv, n))
                rr[b:b + self.nb] = rights[w]
                ll[b:b + self.nb] = lefts[w]
                ll[self.iphi] = -np.einsum("vn,nv->n", lefts[w], xj)
                fields.append((lams[w], rr, ll))
        rr = np.zeros((nv, n))
        rr[0:self.nb] = x1.T
        rr[self.nb:2 * self.nb] = x2.T
        rr[self.iphi] = 1.0
        ll = np.zeros((nv, n))
        ll[self.iphi] = 1.0
        fields.append((v_i, rr, ll))
        return fields

    # -- admissibility -----------------------------------------------------------
    def admissible_mask(self, u):
        ok = np.all(np.isfinite(u), axis=0)
        phi = u[self.iphi]
        with np.errstate(invalid="ignore"):
            ok = ok & (phi >= PHI_FLOOR) & (phi <= 1.0 - PHI_FLOOR)
            for j in (0, 1):
                ok = ok & (u[self._blk(j)] > 0.0)
                ok = ok & (self.phase_pressure(u, j) + self.pi[j] > 0.0)
        return ok

    # -- flattener ------------------------------------------------------------------
    def flattener(self, u_strip):
        return volume_fraction_flattener(u_strip[self.iphi],
                                         kappa=self.flattener_kappa)

    # -- stiff relaxation --------------------------------------------------------
    def source(self, u):
        if not self.is_stiff:
            return None
        s = np.zeros_like(u)
        lam, mu = self.lam_drag, self.mu_press
        b1, b2 = self._blk(0), self._blk(1)
        vi = [self.phase_velocity(u, 0, c) for c in range(self.ndim)]
        dv = [vi[c] - self.phase_velocity(u, 1, c) for c in range(self.ndim)]
        work = sum(vi[c] * dv[c] for c in range(self.ndim))
        for c in range(self.ndim):
            s[b1 + 1 + c] = -lam * dv[c]
            s[b2 + 1 + c] = lam * dv[c]
        s[b1 + self.nb - 1] = -lam * work
        s[b2 + self.nb - 1] = lam * work
        s[self.iphi] = mu * (self.phase_pressure(u, 0) - self.phase_pressure(u, 1))
        return s

    def relaxation_solve(self, u, dt):
        """Pointwise solve of U = u + dt*S(U).

        Velocity drag is linear (solved exactly, conserving total momentum),
        the energy exchange follows from the solved velocities, and the
        volume fraction satisfies a scalar Newton iteration for the pressure
        relaxation term.
        """
        out = u.copy()
        lam, mu = self.lam_drag, self.mu_press
        b1, b2 = self._blk(0), self._blk(1)
        d1, d2 = u[b1], u[b2]
        if lam > 0.0:
            fac = 1.0 + dt * lam * (1.0 / d1 + 1.0 / d2)
            work = np.zeros(u.shape[1])
            for c in range(self.ndim):
                w_star = u[b1 + 1 + c] / d1 - u[b2 + 1 + c] / d2
                w = w_star / fac
                out[b1 + 1 + c] = u[b1 + 1 + c] - dt * lam * w
                out[b2 + 1 + c] = u[b2 + 1 + c] + dt * lam * w
                work += (out[b1 + 1 + c] / d1) * w
            out[b1 + self.nb - 1] = u[b1 + self.nb - 1] - dt * lam * work
            out[b2 + self.nb - 1] = u[b2 + self.nb - 1] + dt * lam * work
        if mu > 0.0:
            out[self.iphi] = self._pressure_relax_phi(out, u[self.iphi], dt)
        return out

    def _pressure_relax_phi(self, u, phi_star, dt):
        g1, g2 = self.gamma
        pi1, pi2 = self.pi
        a1 = (g1 - 1.0) * (u[self._blk(0) + self.nb - 1] - self._kinetic(u, 0))
        a2 = (g2 - 1.0) * (u[self._blk(1) + self.nb - 1] - self._kinetic(u, 1))
        mu = self.mu_press
        lo, hi = PHI_FLOOR, 1.0 - PHI_FLOOR
        phi = np.clip(phi_star, lo, hi)
        done = np.zeros(phi.shape, dtype=bool)
        for _ in range(50):
            p1 = a1 / phi - g1 * pi1
            p2 = a2 / (1.0 - phi) - g2 * pi2
            g = phi - phi_star - dt * mu * (p1 - p2)
            dg = 1.0 + dt * mu * (a1 / phi ** 2 + a2 / (1.0 - phi) ** 2)
            step = g / dg
            done = np.abs(step) <= 1.0e-12 * np.maximum(phi, 1e-3)
            if np.all(done):
                break
            phi = np.clip(phi - step, lo, hi)
        if not np.all(done):
            bad = np.nonzero(~done)[0]
            raise AdmissibilityError(
                f"pressure relaxation Newton failed at zones {bad[:8].tolist()}",
                where=bad)
        return phi
