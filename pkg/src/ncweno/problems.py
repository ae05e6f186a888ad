"""Problem registry: initial conditions, constants and run defaults.

Every Riemann-problem table row ships as data (primitive states in the
tables' own variable order) so tests can audit the transcription, and each
problem carries the order / Riemann solver / flattener assignment its
reference figures used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .mesh import PERIODIC, TRANSMISSIVE
from .mms import make_mms
from .systems.baer_nunziato import BaerNunziato
from .systems.euler import Euler
from .systems.layered import DebrisFlow, TwoLayerShallowWater

# ---------------------------------------------------------------------------
# primitive-state tables (columns as printed in the original problem sets)
# ---------------------------------------------------------------------------

# columns: rho1, u1, p1, rho2, u2, p2, phi1; per problem: gammas/pis, t_end
BN_RIEMANN_TABLE = {
    1: dict(gamma=(1.4, 1.4), pi=(0.0, 0.0),
            left=(1.0, 0.0, 1.0, 0.5, 0.0, 1.0, 0.4),
            right=(2.0, 0.0, 2.0, 1.5, 0.0, 2.0, 0.8),
            t_end=0.1, order=5, riemann="hll", flattener=False),
    2: dict(gamma=(3.0, 1.4), pi=(100.0, 0.0),
            left=(800.0, 0.0, 500.0, 1.5, 0.0, 2.0, 0.4),
            right=(1000.0, 0.0, 600.0, 1.0, 0.0, 1.0, 0.3),
            t_end=0.1, order=7, riemann="hll", flattener=False),
    3: dict(gamma=(1.4, 1.4), pi=(0.0, 0.0),
            left=(1.0, 0.9, 2.5, 1.0, 0.0, 1.0, 0.9),
            right=(1.0, 0.0, 1.0, 1.2, 1.0, 2.0, 0.2),
            t_end=0.1, order=9, riemann="hll", flattener=False),
    4: dict(gamma=(3.0, 1.35), pi=(3400.0, 0.0),
            left=(1900.0, 0.0, 10.0, 2.0, 0.0, 3.0, 0.2),
            right=(1950.0, 0.0, 1000.0, 1.0, 0.0, 1.0, 0.9),
            t_end=0.15, order=5, riemann="llf", flattener=False),
    5: dict(gamma=(1.4, 1.4), pi=(0.0, 0.0),
            left=(1.0, 0.0, 1.0, 0.2, 0.0, 0.3, 0.8),
            right=(1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.3),
            t_end=0.2, order=7, riemann="llf", flattener=True),
    6: dict(gamma=(1.4, 1.4), pi=(0.0, 0.0),
            left=(0.2068, 1.4166, 0.0416, 0.5806, 1.5833, 1.375, 0.1),
            right=(2.2263, 0.9366, 6.0, 0.4890, -0.70138, 0.986, 0.2),
            t_end=0.1, order=9, riemann="llf", flattener=False),
}
BN_RP_DOMAIN = (-0.5, 0.5)

# columns: h1, u1, v1, h2, u2, v2, b; rho = 0.8, g = 9.8, domain [-5, 5]
TLSW_RIEMANN_TABLE = {
    1: dict(left=(0.5, 0.0, 0.5, 0.8, 0.0, -0.2, 0.2),
            right=(0.5, 0.0, -0.5, 0.2, 0.0, 0.2, 0.8),
            t_end=1.0, order=5, riemann="hlli"),
    2: dict(left=(0.4, 0.0, 0.0, 0.6, 0.0, 0.0, 0.0),
            right=(0.6, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0),
            t_end=1.25, order=7, riemann="hlli"),
    3: dict(left=(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0),
            right=(0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5),
            t_end=1.0, order=9, riemann="hlli"),
}
TLSW_CONSTANTS = dict(gravity=9.8, density_ratio=0.8)

# columns: h_s, u_s, v_s, h_f, u_f, v_f, b; rho = 0.5, g = 9.8, domain [-5, 5]
DEBRIS_RIEMANN_TABLE = {
    1: dict(left=(1.5, 0.0, 0.2, 0.5, 0.0, -0.5, 0.0),
            right=(1.125, 0.0, -0.2, 0.375, 0.0, 0.5, 0.5),
            t_end=1.0, order=5, riemann="hlli"),
    2: dict(left=(2.1, 0.0, 0.0, 0.9, 0.0, 0.0, 0.0),
            right=(0.8, 0.0, 0.0, 1.2, 0.0, 0.0, 0.0),
            t_end=0.5, order=7, riemann="hlli"),
    3: dict(left=(2.1, -1.4, 0.0, 0.9, 0.3, 0.0, 0.0),
            right=(0.8, -0.9, 0.0, 1.2, 0.1, 0.0, 0.0),
            t_end=0.5, order=9, riemann="hlli"),
}
LAYERED_RP_DOMAIN = (-5.0, 5.0)

# uniform-pressure/velocity two-phase advection
ABGRALL = dict(gamma=(3.0, 1.4), pi=(100.0, 0.0),
               left=(800.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.99),
               right=(1000.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.01),
               t_end=0.25, order=5, riemann="llf", flattener=True)

# stiff relaxation problems
BN_STIFF_1D = dict(gamma=(1.4, 1.67), pi=(0.0, 0.0),
                   left=(1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.99),
                   right=(0.125, 0.0, 0.1, 0.125, 0.0, 0.1, 0.01),
                   t_end=0.2, lam_drag=1.0e3, mu_press=1.0e2,
                   order=5, riemann="hll")

# quadrants: (x>0,y>0), (x<0,y>0), (x<0,y<0), (x>0,y<0); columns
# rho1, u1, v1, p1, rho2, u2, v2, p2, phi1
BN_STIFF_2D = dict(gamma=(1.4, 1.67), pi=(0.0, 0.0),
                   quadrants=((2.0, 0.0, 0.0, 2.0, 1.5, 0.0, 0.0, 2.0, 0.8),
                              (1.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 1.0, 0.4),
                              (2.0, 0.0, 0.0, 2.0, 1.5, 0.0, 0.0, 2.0, 0.8),
                              (1.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 1.0, 0.4)),
                   t_end=0.15, lam_drag=1.0e5, mu_press=1.0e2,
                   order=7, riemann="hll")

SOD = dict(left=(1.0, 0.0, 1.0), right=(0.125, 0.0, 0.1), t_end=0.2)


@dataclass
class ProblemSetup:
    name: str
    system: object
    ndim: int
    domain: tuple                  # (x0, x1) or (x0, x1, y0, y1)
    t_end: float
    initial: Callable              # (x[, y]) -> conserved array
    bcs: dict
    defaults: dict = field(default_factory=dict)   # order/riemann/flattener/...
    forcing: Callable | None = None
    exact: Callable | None = None  # exact(x[, y], t) for error measurement


def _riemann_initial(system, left, right, xc=0.0):
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)

    def init(x):
        prim = np.where(x[None, :] < xc, left[:, None], right[:, None])
        return system.conserved(prim)
    return init


def _bn_prim_from_row(row):
    """Table order (rho1,u1,p1,rho2,u2,p2,phi1) -> primitive vector order."""
    r1, u1, p1, r2, u2, p2, phi = row
    return (r1, u1, p1, r2, u2, p2, phi)


def build_problem(name: str, constants: dict | None = None) -> ProblemSetup:
    """Instantiate a registered problem; ``constants`` may override physical
    parameters (gammas, gravity, relaxation rates, ...)."""
    constants = dict(constants or {})
    transmissive = {"xlo": TRANSMISSIVE, "xhi": TRANSMISSIVE}
    periodic = {"xlo": PERIODIC, "xhi": PERIODIC}

    if name.startswith("bn_rp"):
        k = int(name[len("bn_rp"):])
        row = BN_RIEMANN_TABLE[k]
        sys = BaerNunziato(1, gamma1=row["gamma"][0], pi1=row["pi"][0],
                           gamma2=row["gamma"][1], pi2=row["pi"][1], **constants)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=BN_RP_DOMAIN, t_end=row["t_end"],
            initial=_riemann_initial(sys, _bn_prim_from_row(row["left"]),
                                     _bn_prim_from_row(row["right"])),
            bcs=transmissive,
            defaults=dict(order=row["order"], riemann=row["riemann"],
                          flattener=row["flattener"], cfl=0.8, nx=200))

    if name == "abgrall":
        row = ABGRALL
        sys = BaerNunziato(1, gamma1=row["gamma"][0], pi1=row["pi"][0],
                           gamma2=row["gamma"][1], pi2=row["pi"][1], **constants)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=BN_RP_DOMAIN, t_end=row["t_end"],
            initial=_riemann_initial(sys, _bn_prim_from_row(row["left"]),
                                     _bn_prim_from_row(row["right"])),
            bcs=transmissive,
            defaults=dict(order=row["order"], riemann=row["riemann"],
                          flattener=row["flattener"], cfl=0.8, nx=200))

    if name.startswith("tlsw_rp") or name.startswith("debris_rp"):
        layered = name.startswith("tlsw")
        k = int(name.split("rp")[1])
        row = (TLSW_RIEMANN_TABLE if layered else DEBRIS_RIEMANN_TABLE)[k]
        cls = TwoLayerShallowWater if layered else DebrisFlow
        cons = dict(gravity=9.8, density_ratio=(0.8 if layered else 0.5))
        cons.update(constants)
        sys = cls(1, **cons)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=LAYERED_RP_DOMAIN,
            t_end=row["t_end"],
            initial=_riemann_initial(sys, row["left"], row["right"]),
            bcs=transmissive,
            defaults=dict(order=row["order"], riemann=row["riemann"],
                          flattener=False, cfl=0.8, nx=200))

    if name == "bn_stiff":
        row = BN_STIFF_1D
        cons = dict(lam_drag=row["lam_drag"], mu_press=row["mu_press"])
        cons.update(constants)
        sys = BaerNunziato(1, gamma1=row["gamma"][0], pi1=row["pi"][0],
                           gamma2=row["gamma"][1], pi2=row["pi"][1], **cons)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=BN_RP_DOMAIN, t_end=row["t_end"],
            initial=_riemann_initial(sys, _bn_prim_from_row(row["left"]),
                                     _bn_prim_from_row(row["right"])),
            bcs=transmissive,
            defaults=dict(order=row["order"], riemann=row["riemann"],
                          flattener=False, cfl=0.8, nx=400, stepper="imex433"))

    if name == "bn_stiff_2d":
        row = BN_STIFF_2D
        cons = dict(lam_drag=row["lam_drag"], mu_press=row["mu_press"])
        cons.update(constants)
        sys = BaerNunziato(2, gamma1=row["gamma"][0], pi1=row["pi"][0],
                           gamma2=row["gamma"][1], pi2=row["pi"][1], **cons)
        quad = [np.asarray(q) for q in row["quadrants"]]

        def init(x, y):
            xg = x[None, :] > 0.0
            yg = y[:, None] > 0.0
            prim = np.empty((9, y.size, x.size))
            for comp in range(9):
                prim[comp] = np.where(
                    xg & yg, quad[0][comp],
                    np.where(~xg & yg, quad[1][comp],
                             np.where(~xg & ~yg, quad[2][comp], quad[3][comp])))
            return sys.conserved(prim.reshape(9, -1)).reshape(prim.shape)
        return ProblemSetup(
            name=name, system=sys, ndim=2, domain=(-0.5, 0.5, -0.5, 0.5),
            t_end=row["t_end"], initial=init,
            bcs={"xlo": TRANSMISSIVE, "xhi": TRANSMISSIVE,
                 "ylo": TRANSMISSIVE, "yhi": TRANSMISSIVE},
            defaults=dict(order=row["order"], riemann=row["riemann"],
                          flattener=False, cfl=0.4, nx=400, ny=400,
                          stepper="imex433"))

    if name == "sod":
        sys = Euler(1, gamma=constants.pop("gamma", 1.4))
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=BN_RP_DOMAIN, t_end=SOD["t_end"],
            initial=_riemann_initial(sys, SOD["left"], SOD["right"]),
            bcs=transmissive,
            defaults=dict(order=5, riemann="llf", flattener=False, cfl=0.8,
                          nx=1000))

    if name.startswith("mms_"):
        sys = _mms_system(name[len("mms_"):], constants)
        mms = make_mms(sys)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=(0.0, 1.0), t_end=0.2,
            initial=lambda x: mms.exact(x, 0.0),
            bcs=periodic, forcing=mms.forcing, exact=mms.exact,
            defaults=dict(order=5, riemann="hll", flattener=False, cfl=0.4,
                          nx=64))

    if name == "bn_smooth":
        # unforced smooth periodic two-phase field: the conservation testbed
        sys = _mms_system("bn", constants)
        mms = make_mms(sys)
        return ProblemSetup(
            name=name, system=sys, ndim=1, domain=(0.0, 1.0), t_end=0.25,
            initial=lambda x: mms.exact(x, 0.0), bcs=periodic,
            defaults=dict(order=5, riemann="hll", flattener=False, cfl=0.8,
                          nx=64))

    if name in ("shock_bubble", "shock_vortex"):
        return _template_2d(name, constants)

    raise KeyError(f"unknown problem {name!r}; see list_problems()")


def _mms_system(sys_name, constants):
    if sys_name == "euler":
        return Euler(1, **constants)
    if sys_name in ("bn", "baer_nunziato"):
        cons = dict(gamma1=1.4, pi1=0.0, gamma2=1.4, pi2=0.0)
        cons.update(constants)
        return BaerNunziato(1, **cons)
    if sys_name in ("tlsw", "two_layer_sw"):
        cons = dict(gravity=9.8, density_ratio=0.8)
        cons.update(constants)
        return TwoLayerShallowWater(1, **cons)
    if sys_name in ("debris", "debris_flow"):
        cons = dict(gravity=9.8, density_ratio=0.5)
        cons.update(constants)
        return DebrisFlow(1, **cons)
    raise KeyError(f"no manufactured-solution system {sys_name!r}")


def _template_2d(name, constants):
    """Parameterized 2D templates: a planar right-going shock state pair
    plus a circular perturbation (bubble) or a velocity vortex.  Defaults
    are chosen to run stably; they are qualitative demonstrations."""
    cons = dict(gamma1=1.4, pi1=0.0, gamma2=1.4, pi2=0.0)
    radius = constants.pop("radius", 0.25)
    center = constants.pop("center", (0.3, 0.0) if name == "shock_bubble" else (0.5, 0.5))
    amplitude = constants.pop("amplitude", 0.5)
    cons.update(constants)
    sys = BaerNunziato(2, **cons)
    # pre/post shock states: rho1,u1,v1,p1,rho2,u2,v2,p2,phi1
    ahead = np.array([1.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 1.0, 0.4])
    behind = np.array([2.0, 0.5, 0.0, 2.5, 1.0, 0.5, 0.0, 2.5, 0.4])
    x_shock = -0.2 if name == "shock_bubble" else 0.0

    def init(x, y):
        xx = np.broadcast_to(x[None, :], (y.size, x.size))
        yy = np.broadcast_to(y[:, None], (y.size, x.size))
        prim = np.empty((9, y.size, x.size))
        for comp in range(9):
            prim[comp] = np.where(xx < x_shock, behind[comp], ahead[comp])
        r2 = (xx - center[0]) ** 2 + (yy - center[1]) ** 2
        inside = r2 < radius ** 2
        if name == "shock_bubble":
            prim[0] = np.where(inside, ahead[0] * (1.0 + amplitude), prim[0])
            prim[8] = np.where(inside, np.minimum(0.9, ahead[8] * (1.0 + amplitude)),
                               prim[8])
        else:
            blob = amplitude * np.exp(1.0 - r2 / radius ** 2)
            spin_x = -(yy - center[1]) / radius
            spin_y = (xx - center[0]) / radius
            mask = (xx > x_shock)
            for iv in (1, 5):
                prim[iv] = prim[iv] + np.where(mask & inside, blob * spin_x, 0.0)
            for iv in (2, 6):
                prim[iv] = prim[iv] + np.where(mask & inside, blob * spin_y, 0.0)
        return sys.conserved(prim.reshape(9, -1)).reshape(prim.shape)

    if name == "shock_bubble":
        domain = (-0.5, 3.0, -0.75, 0.75)
        defaults = dict(order=5, riemann="hll", flattener=False, cfl=0.4,
                        nx=140, ny=60)
        t_end = 0.025
    else:
        domain = (-0.5, 1.5, -0.5, 1.5)
        defaults = dict(order=5, riemann="hll", flattener=False, cfl=0.4,
                        nx=80, ny=80)
        t_end = 0.1
    return ProblemSetup(
        name=name, system=sys, ndim=2, domain=domain, t_end=t_end, initial=init,
        bcs={"xlo": TRANSMISSIVE, "xhi": TRANSMISSIVE,
             "ylo": TRANSMISSIVE, "yhi": TRANSMISSIVE},
        defaults=defaults)


def list_problems() -> list[str]:
    names = [f"bn_rp{k}" for k in BN_RIEMANN_TABLE]
    names += ["abgrall", "bn_smooth", "bn_stiff", "bn_stiff_2d", "sod"]
    names += [f"tlsw_rp{k}" for k in TLSW_RIEMANN_TABLE]
    names += [f"debris_rp{k}" for k in DEBRIS_RIEMANN_TABLE]
    names += ["mms_euler", "mms_bn", "mms_tlsw", "mms_debris"]
    names += ["shock_bubble", "shock_vortex"]
    return names
