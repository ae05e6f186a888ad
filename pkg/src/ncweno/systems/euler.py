"""Compressible Euler equations (ideal gas), 1D and 2D.

Purely conservative (C = 0); used for the speed benchmark, for the
flux-form/fluctuation-form equivalence checks and as the plainest
characteristic-projection testbed.  Variables: (rho, rho*u[, rho*v], E).
"""

from __future__ import annotations

import numpy as np

from .base import HyperbolicSystem


class Euler(HyperbolicSystem):
    name = "euler"

    def __init__(self, ndim: int = 1, gamma: float = 1.4):
        super().__init__(ndim)
        self.gamma = gamma

    @property
    def nvar(self) -> int:
        return 3 if self.ndim == 1 else 4

    @property
    def var_names(self):
        if self.ndim == 1:
            return ("rho", "mom_x", "energy")
        return ("rho", "mom_x", "mom_y", "energy")

    @property
    def prim_names(self):
        if self.ndim == 1:
            return ("rho", "vel_x", "pressure")
        return ("rho", "vel_x", "vel_y", "pressure")

    # -- maps ---------------------------------------------------------------
    def _split(self, u, axis):
        rho = u[0]
        un = u[1 + axis] / rho
        if self.ndim == 2:
            ut = u[2 - axis] / rho
            ke = 0.5 * rho * (un * un + ut * ut)
        else:
            ke = 0.5 * rho * un * un
        p = (self.gamma - 1.0) * (u[-1] - ke)
        return rho, un, p

    def pressure(self, u):
        rho = u[0]
        ke = 0.5 * (u[1] ** 2) / rho
        if self.ndim == 2:
            ke = ke + 0.5 * (u[2] ** 2) / rho
        return (self.gamma - 1.0) * (u[-1] - ke)

    def sound_speed(self, u):
        return np.sqrt(self.gamma * self.pressure(u) / u[0])

    def primitive(self, u):
        rho = u[0]
        out = np.empty_like(u)
        out[0] = rho
        for k in range(1, self.nvar - 1):
            out[k] = u[k] / rho
        out[-1] = self.pressure(u)
        return out

    def conserved(self, prim):
        rho = prim[0]
        u = np.empty_like(prim)
        u[0] = rho
        ke = 0.0 * rho
        for k in range(1, self.nvar - 1):
            u[k] = rho * prim[k]
            ke = ke + 0.5 * rho * prim[k] ** 2
        u[-1] = prim[-1] / (self.gamma - 1.0) + ke
        return u

    # -- physics --------------------------------------------------------------
    def flux(self, u, axis: int = 0):
        rho, un, p = self._split(u, axis)
        f = np.empty_like(u)
        f[0] = u[1 + axis]
        f[1 + axis] = u[1 + axis] * un + p
        if self.ndim == 2:
            f[2 - axis] = u[2 - axis] * un
        f[-1] = un * (u[-1] + p)
        return f

    def flux_jacobian(self, u, axis: int = 0):
        g = self.gamma
        n = u.shape[1]
        a = np.zeros((n, self.nvar, self.nvar))
        rho = u[0]
        un = u[1 + axis] / rho
        h = (u[-1] + self.pressure(u)) / rho
        im, ie = 1 + axis, self.nvar - 1
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
        ut = u[it] / rho
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

    # -- waves ----------------------------------------------------------------
    def signal_speed_range(self, u, axis: int = 0):
        un = u[1 + axis] / u[0]
        c = self.sound_speed(u)
        return un - c, un + c

    def eigensystem(self, u, axis: int = 0):
        """Analytic eigensystem sorted ascending (u-c ... u+c)."""
        g = self.gamma
        n = u.shape[1]
        nv = self.nvar
        rho = u[0]
        un = u[1 + axis] / rho
        c = self.sound_speed(u)
        h = (u[-1] + self.pressure(u)) / rho
        r = np.zeros((n, nv, nv))
        l = np.zeros((n, nv, nv))
        gm1 = g - 1.0
        if self.ndim == 1:
            q2h = 0.5 * un * un
            lam = np.stack([un - c, un, un + c])
            cols = [(np.ones(n), un - c, h - un * c),
                    (np.ones(n), un, q2h),
                    (np.ones(n), un + c, h + un * c)]
            for j, col in enumerate(cols):
                for i, comp in enumerate(col):
                    r[:, i, j] = comp
            b1 = gm1 / (c * c)
            b2 = b1 * q2h
            l[:, 0, 0] = 0.5 * (b2 + un / c)
            l[:, 0, 1] = -0.5 * (b1 * un + 1.0 / c)
            l[:, 0, 2] = 0.5 * b1
            l[:, 1, 0] = 1.0 - b2
            l[:, 1, 1] = b1 * un
            l[:, 1, 2] = -b1
            l[:, 2, 0] = 0.5 * (b2 - un / c)
            l[:, 2, 1] = -0.5 * (b1 * un - 1.0 / c)
            l[:, 2, 2] = 0.5 * b1
            return lam, r, l
        im, it = 1 + axis, 2 - axis
        ut = u[it] / rho
        q2h = 0.5 * (un * un + ut * ut)
        lam = np.stack([un - c, un, un, un + c])
        one = np.ones(n)
        zero = np.zeros(n)

        def put(j, comps):
            r[:, 0, j], r[:, im, j], r[:, it, j], r[:, 3, j] = comps

        put(0, (one, un - c, ut, h - un * c))
        put(1, (one, un, ut, q2h))
        put(2, (zero, zero, one, ut))
        put(3, (one, un + c, ut, h + un * c))
        b1 = gm1 / (c * c)
        b2 = b1 * q2h
        l[:, 0, 0] = 0.5 * (b2 + un / c)
        l[:, 0, im] = -0.5 * (b1 * un + 1.0 / c)
        l[:, 0, it] = -0.5 * b1 * ut
        l[:, 0, 3] = 0.5 * b1
        l[:, 1, 0] = 1.0 - b2
        l[:, 1, im] = b1 * un
        l[:, 1, it] = b1 * ut
        l[:, 1, 3] = -b1
        l[:, 2, 0] = -ut
        l[:, 2, it] = 1.0
        l[:, 3, 0] = 0.5 * (b2 - un / c)
        l[:, 3, im] = -0.5 * (b1 * un - 1.0 / c)
        l[:, 3, it] = -0.5 * b1 * ut
        l[:, 3, 3] = 0.5 * b1
        return lam, r, l

    def ld_fields(self, u_star, axis: int = 0):
        """Contact (entropy) wave and, in 2D, the shear wave."""
        n = u_star.shape[1]
        rho = u_star[0]
        un = u_star[1 + axis] / rho
        c = self.sound_speed(u_star)
        gm1 = self.gamma - 1.0
        b1 = gm1 / (c * c)
        fields = []
        if self.ndim == 1:
            q2h = 0.5 * un * un
            r = np.stack([np.ones(n), un, q2h])
            l = np.stack([1.0 - b1 * q2h, b1 * un, -b1 * np.ones(n)])
            fields.append((un, r, l))
            return fields
        im, it = 1 + axis, 2 - axis
        ut = u_star[it] / rho
        q2h = 0.5 * (un * un + ut * ut)
        r = np.zeros((4, n))
        r[0], r[im], r[it], r[3] = 1.0, un, ut, q2h
        l = np.zeros((4, n))
        l[0], l[im], l[it], l[3] = 1.0 - b1 * q2h, b1 * un, b1 * ut, -b1
        fields.append((un, r, l))
        rs = np.zeros((4, n))
        rs[it], rs[3] = 1.0, ut
        ls = np.zeros((4, n))
        ls[0], ls[it] = -ut, 1.0
        fields.append((un, rs, ls))
        return fields

    def admissible_mask(self, u):
        fin = np.all(np.isfinite(u), axis=0)
        with np.errstate(invalid="ignore"):
            return fin & (u[0] > 0.0) & (self.pressure(u) > 0.0)
