"""Manufactured smooth solutions with exact source injection.

A chosen analytic primitive field is pushed through the conserved-variable
map with a tiny forward-mode dual number carrying exact x- and t-
derivatives, so the forcing

    S(x, t) = dU/dt + A(U) dU/dx

is evaluated in closed form (the quasilinear matrix A is analytic in every
system).  Solving the forced system with periodic boundaries then has the
chosen field as its exact solution, which is what the convergence harness
measures errors against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class Dual:
    """Value with exact d/dx and d/dt companions."""

    __slots__ = ("val", "dx", "dt")

    def __init__(self, val, dx=0.0, dt=0.0):
        self.val = val
        self.dx = dx
        self.dt = dt

    @staticmethod
    def lift(other):
        return other if isinstance(other, Dual) else Dual(other)

    def __add__(self, other):
        o = Dual.lift(other)
        return Dual(self.val + o.val, self.dx + o.dx, self.dt + o.dt)

    __radd__ = __add__

    def __sub__(self, other):
        o = Dual.lift(other)
        return Dual(self.val - o.val, self.dx - o.dx, self.dt - o.dt)

    def __rsub__(self, other):
        o = Dual.lift(other)
        return Dual(o.val - self.val, o.dx - self.dx, o.dt - self.dt)

    def __mul__(self, other):
        o = Dual.lift(other)
        return Dual(self.val * o.val,
                    self.dx * o.val + self.val * o.dx,
                    self.dt * o.val + self.val * o.dt)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual.lift(other)
        inv = 1.0 / o.val
        val = self.val * inv
        return Dual(val, (self.dx - val * o.dx) * inv, (self.dt - val * o.dt) * inv)

    def __rtruediv__(self, other):
        return Dual.lift(other).__truediv__(self)

    def __pow__(self, n):
        if n != int(n) or n < 1:
            raise ValueError("dual powers are integer only")
        out = self
        for _ in range(int(n) - 1):
            out = out * self
        return out

    def __neg__(self):
        return Dual(-self.val, -self.dx, -self.dt)


def wave(mean, amp, kx, speed, x, t):
    """mean + amp * sin(2 pi kx (x - speed t)) as a Dual field."""
    phase = TWO_PI * kx * (x - speed * t)
    s = np.sin(phase)
    c = np.cos(phase)
    return Dual(mean + amp * s,
                amp * c * TWO_PI * kx,
                -amp * c * TWO_PI * kx * speed)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Analytic primitive field and the machinery to force a system with it."""

    system: object
    prim_fields: object     # prim_fields(x, t) -> list[Dual], primitive order

    def conserved_dual(self, x, t):
        prim = self.prim_fields(x, t)
        vals = np.stack([p.val * np.ones_like(x) for p in prim])
        dxs = np.stack([p.dx * np.ones_like(x) for p in prim])
        dts = np.stack([p.dt * np.ones_like(x) for p in prim])
        # push primitives through the conserved map component by component
        # using duals again, via the system's conserved() on stacked duals
        duals = [Dual(vals[k], dxs[k], dts[k]) for k in range(len(prim))]
        u_d = self.system.conserved(np.array(duals, dtype=object))
        u = np.stack([d.val for d in u_d])
        dudx = np.stack([d.dx for d in u_d])
        dudt = np.stack([d.dt for d in u_d])
        return u, dudx, dudt

    def exact(self, x, t):
        u, _, _ = self.conserved_dual(x, t)
        return u

    def forcing(self, x, t):
        u, dudx, dudt = self.conserved_dual(x, t)
        a = self.system.quasilinear_matrix(u, 0)
        return dudt + np.einsum("nij,jn->in", a, dudx)


def euler_mms(system):
    def prim(x, t):
        return [wave(1.0, 0.2, 1.0, 1.0, x, t),
                wave(1.0, 0.1, 1.0, 0.5, x, t),
                wave(1.0, 0.2, 1.0, 1.0, x, t)]
    return ManufacturedSolution(system, prim)


def baer_nunziato_mms(system):
    def prim(x, t):
        return [wave(1.5, 0.2, 1.0, 0.6, x, t),   # rho1
                wave(0.4, 0.1, 1.0, 0.3, x, t),   # u1
                wave(2.0, 0.2, 1.0, 0.5, x, t),   # p1
                wave(1.0, 0.2, 1.0, 0.4, x, t),   # rho2
                wave(0.6, 0.1, 1.0, 0.7, x, t),   # u2
                wave(1.5, 0.2, 1.0, 0.6, x, t),   # p2
                wave(0.5, 0.2, 1.0, 0.5, x, t)]   # phi1
    return ManufacturedSolution(system, prim)


def layered_mms(system):
    def prim(x, t):
        return [wave(1.2, 0.15, 1.0, 0.4, x, t),  # h_a
                wave(0.15, 0.05, 1.0, 0.6, x, t),  # u_a
                wave(0.1, 0.05, 1.0, 0.5, x, t),   # v_a
                wave(1.5, 0.15, 1.0, 0.5, x, t),   # h_b
                wave(0.1, 0.05, 1.0, 0.4, x, t),   # u_b
                wave(0.05, 0.05, 1.0, 0.6, x, t),  # v_b
                wave(0.05, 0.02, 1.0, 0.0, x, 0.0)]  # b, frozen in time
    return ManufacturedSolution(system, prim)


def make_mms(system) -> ManufacturedSolution:
    from .systems.baer_nunziato import BaerNunziato
    from .systems.euler import Euler
    from .systems.layered import LayeredTwoPhase
    if isinstance(system, Euler):
        return euler_mms(system)
    if isinstance(system, BaerNunziato):
        return baer_nunziato_mms(system)
    if isinstance(system, LayeredTwoPhase):
        return layered_mms(system)
    raise ValueError(f"no manufactured solution for system {system.name}")
