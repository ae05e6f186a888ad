"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from ncweno.systems.baer_nunziato import BaerNunziato
from ncweno.systems.base import HyperbolicSystem
from ncweno.systems.euler import Euler
from ncweno.systems.layered import DebrisFlow, TwoLayerShallowWater


class ScalarAdvection(HyperbolicSystem):
    """u_t + a u_x = 0; the smallest possible plug-in system."""

    name = "advection"

    def __init__(self, speed=1.0):
        super().__init__(1)
        self.speed = speed

    @property
    def nvar(self):
        return 1

    @property
    def var_names(self):
        return ("u",)

    prim_names = var_names

    def flux(self, u, axis=0):
        return self.speed * u

    def flux_jacobian(self, u, axis=0):
        return np.full((u.shape[1], 1, 1), self.speed)

    def signal_speed_range(self, u, axis=0):
        s = np.full(u.shape[1], self.speed)
        return np.minimum(s, s), np.maximum(s, s)

    def eigensystem(self, u, axis=0):
        n = u.shape[1]
        eye = np.ones((n, 1, 1))
        return np.full((1, n), self.speed), eye, eye.copy()

    def primitive(self, u):
        return u

    def conserved(self, prim):
        return prim


def random_euler_states(rng, n, ndim=1):
    sys = Euler(ndim=ndim)
    prim = np.empty((sys.nvar, n))
    prim[0] = 0.5 + rng.random(n)
    for k in range(1, sys.nvar - 1):
        prim[k] = rng.normal(size=n)
    prim[-1] = 0.5 + rng.random(n)
    return sys, sys.conserved(prim)


def random_bn_states(rng, n, ndim=1, stiffened=True):
    sys = BaerNunziato(ndim=ndim, gamma1=3.0 if stiffened else 1.4,
                       pi1=100.0 if stiffened else 0.0, gamma2=1.4, pi2=0.0)
    prim = np.empty((sys.nvar, n))
    prim[sys.iphi] = 0.15 + 0.7 * rng.random(n)
    for j, (rho0, p0, u_spread) in enumerate(((800.0, 400.0, 0.4), (1.5, 2.0, 1.0))):
        b = sys._blk(j)
        prim[b] = rho0 * (0.8 + 0.4 * rng.random(n))
        for c in range(ndim):
            prim[b + 1 + c] = 0.3 + u_spread * rng.normal(size=n)
        prim[b + sys.nb - 1] = p0 * (0.8 + 0.4 * rng.random(n))
    return sys, sys.conserved(prim)


def random_layered_states(rng, n, cls=TwoLayerShallowWater, ratio=0.8):
    sys = cls(ndim=2, gravity=9.8, density_ratio=ratio)
    prim = np.empty((7, n))
    prim[0] = 0.5 + rng.random(n)
    prim[3] = 0.5 + rng.random(n)
    for k in (1, 2, 4, 5):
        prim[k] = 0.15 * rng.normal(size=n)
    prim[6] = 0.3 * rng.random(n)
    return sys, sys.conserved(prim)


def fd_flux_jacobian(sys, u, axis):
    nv = u.shape[0]
    out = np.zeros((u.shape[1], nv, nv))
    for j in range(nv):
        h = 1e-7 * np.maximum(1.0, np.abs(u[j]))
        du = np.zeros_like(u)
        du[j] = h
        out[:, :, j] = ((sys.flux(u + du, axis) - sys.flux(u - du, axis)) / (2 * h)).T
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(2024)

