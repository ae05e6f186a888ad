"""Run orchestration: time loops, convergence studies, self-reference
solutions and the zones-per-second benchmark."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .mesh import FieldSet, UniformMesh, ghosts_for_order
from .outputs import snapshot_paths, write_csv_1d, write_csv_2d, write_summary, \
    write_vtk_2d
from .problems import ProblemSetup, build_problem
from .interp import WenoParams
from .spatial import SchemeConfig, compute_rate
from .stepping import advance, compute_dt


@dataclass
class RunArtifacts:
    config: dict
    setup: ProblemSetup
    mesh: UniformMesh
    field: FieldSet
    t: float
    steps: int
    wall_time: float
    zones_per_sec: float
    conservation: dict
    snapshots: list = field(default_factory=list)   # (t, interior copy)
    files: list = field(default_factory=list)


def make_scheme(cfg: RunConfig) -> SchemeConfig:
    weno = cfg.weno
    if weno:
        weno = dict(weno)
        if "gamma_lo" in weno:
            weno["gamma_lo"] = tuple(weno["gamma_lo"])
        weno = WenoParams(**weno)
    else:
        weno = WenoParams()
    return SchemeConfig(order=cfg.order, formulation=cfg.formulation,
                        riemann=cfg.riemann, char_interp=cfg.char_interp,
                        char_derivs=cfg.char_derivs,
                        ladder_weights=cfg.ladder_weights,
                        flattener=cfg.flattener, weno=weno)


def _make_mesh(setup: ProblemSetup, cfg: RunConfig) -> UniformMesh:
    g = ghosts_for_order(cfg.order)
    if setup.ndim == 1:
        x0, x1 = setup.domain
        return UniformMesh.line(cfg.nx, x0, x1, g)
    x0, x1, y0, y1 = setup.domain
    ny = cfg.ny or cfg.nx
    return UniformMesh.rect(cfg.nx, ny, x0, x1, y0, y1, g)


def _init_field(setup: ProblemSetup, mesh: UniformMesh) -> FieldSet:
    f = FieldSet(mesh, setup.system.nvar)
    if mesh.ndim == 1:
        f.interior = setup.initial(mesh.xcenters())
    else:
        f.interior = setup.initial(mesh.xcenters(), mesh.ycenters())
    return f


def run_simulation(cfg: RunConfig, setup: ProblemSetup | None = None,
                   collect=None) -> RunArtifacts:
    """Advance the configured problem to t_end, writing outputs if asked.

    ``collect(t, field)`` is an optional in-memory observer called after
    every accepted step (used by tests for time-series diagnostics).
    """
    setup = setup or build_problem(cfg.problem, constants=cfg.constants)
    scheme = make_scheme(cfg)
    scheme.validate_for(setup.system)
    mesh = _make_mesh(setup, cfg)
    fld = _init_field(setup, mesh)
    system = setup.system
    t_end = cfg.t_end if cfg.t_end is not None else setup.t_end

    forcing = setup.forcing
    explicit_source = cfg.stepper != "imex433" and system.is_stiff

    def rate_fn(f, t):
        rate = compute_rate(f, system, scheme, setup.bcs, threads=cfg.threads,
                            forcing=forcing, t=t)
        if explicit_source:
            # non-IMEX steppers treat the relaxation source explicitly
            # (only viable when the source is mild; the stiff problems
            # default to the IMEX stepper)
            u = f.interior
            shape = u.shape
            src = system.source(u.reshape(shape[0], -1))
            rate.interior += src.reshape(shape)
        return rate

    sums0 = fld.interior.reshape(system.nvar, -1).sum(axis=1)
    snap_times = list(np.linspace(0.0, t_end, cfg.snapshots + 1)[1:]) \
        if cfg.snapshots > 0 else [t_end]
    snaps = []
    t, steps = 0.0, 0
    next_snap = 0
    t0 = time.perf_counter()
    while t < t_end - 1e-13 * max(1.0, t_end):
        dt = cfg.dt if cfg.dt is not None else compute_dt(fld, system, cfg.cfl)
        dt = min(dt, snap_times[next_snap] - t)
        advance(fld, t, dt, rate_fn, system, cfg.stepper)
        t += dt
        steps += 1
        if collect is not None:
            collect(t, fld)
        if t >= snap_times[next_snap] - 1e-13 * max(1.0, t_end):
            snaps.append((t, fld.interior.copy()))
            next_snap = min(next_snap + 1, len(snap_times) - 1)
    wall = time.perf_counter() - t0
    nzones = mesh.nx * (mesh.ny if mesh.ndim == 2 else 1)
    sums1 = fld.interior.reshape(system.nvar, -1).sum(axis=1)
    scales = np.abs(fld.interior.reshape(system.nvar, -1)).sum(axis=1)
    cons = set(system.conservative_components)
    ledger = {
        name: {"initial": s0, "final": s1, "conservative_row": k in cons,
               "relative_change": abs(s1 - s0) / max(abs(s0), sc, 1e-300)}
        for k, (name, s0, s1, sc) in enumerate(
            zip(system.var_names, sums0, sums1, scales))
    }
    art = RunArtifacts(config=cfg.echo(), setup=setup, mesh=mesh, field=fld,
                       t=t, steps=steps, wall_time=wall,
                       zones_per_sec=nzones * steps / max(wall, 1e-12),
                       conservation=ledger, snapshots=snaps)
    if cfg.out_dir:
        _write_outputs(art, cfg)
    return art


def _write_outputs(art: RunArtifacts, cfg: RunConfig):
    system = art.setup.system
    mesh = art.mesh
    for k, (t, u) in enumerate(art.snapshots):
        csv, vtk = snapshot_paths(cfg.out_dir, art.setup.name, k, mesh.ndim)
        if mesh.ndim == 1:
            prim = system.primitive(u)
            write_csv_1d(csv, mesh.xcenters(), u, prim, system.var_names,
                         system.prim_names)
        else:
            write_csv_2d(csv, mesh.xcenters(), mesh.ycenters(), u,
                         system.var_names)
            fields = {name: u[i] for i, name in enumerate(system.var_names)}
            write_vtk_2d(vtk, mesh.xcenters(), mesh.ycenters(), fields)
            art.files.append(vtk)
        art.files.append(csv)
    summary = {
        "config": art.config,
        "t_final": art.t,
        "steps": art.steps,
        "wall_time_s": art.wall_time,
        "zones_per_sec": art.zones_per_sec,
        "conservation": art.conservation,
        "files": art.files,
    }
    spath = os.path.join(cfg.out_dir, f"{art.setup.name}_summary.json")
    write_summary(spath, summary)
    art.files.append(spath)


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    resolutions: list
    l1: list
    linf: list

    @property
    def l1_orders(self):
        return [np.log2(self.l1[i] / self.l1[i + 1])
                for i in range(len(self.l1) - 1)]

    @property
    def linf_orders(self):
        return [np.log2(self.linf[i] / self.linf[i + 1])
                for i in range(len(self.linf) - 1)]

    def table(self) -> str:
        lines = [f"{'zones':>8} {'L1 error':>13} {'L1 order':>9} "
                 f"{'Linf error':>13} {'Linf order':>10}"]
        for i, n in enumerate(self.resolutions):
            o1 = f"{self.l1_orders[i - 1]:9.2f}" if i else " " * 9
            oi = f"{self.linf_orders[i - 1]:10.2f}" if i else " " * 10
            lines.append(f"{n:>8} {self.l1[i]:13.5e} {o1} "
                         f"{self.linf[i]:13.5e} {oi}")
        return "\n".join(lines)

    def csv(self) -> str:
        rows = ["zones,l1_error,l1_order,linf_error,linf_order"]
        for i, n in enumerate(self.resolutions):
            o1 = f"{self.l1_orders[i - 1]:.6f}" if i else ""
            oi = f"{self.linf_orders[i - 1]:.6f}" if i else ""
            rows.append(f"{n},{self.l1[i]:.10e},{o1},{self.linf[i]:.10e},{oi}")
        return "\n".join(rows)


def run_convergence(cfg: RunConfig, resolutions) -> ConvergenceReport:
    """Error-vs-resolution study against the problem's exact solution.

    The time step is scaled as dx^(order/3) relative to the coarsest mesh so
    the third-order stepper never limits the measured spatial order.
    """
    setup = build_problem(cfg.problem, constants=cfg.constants)
    if setup.exact is None:
        raise ValueError(f"problem {cfg.problem!r} has no exact solution")
    l1, linf = [], []
    base = resolutions[0]
    for n in resolutions:
        sub = RunConfig(**{**cfg.echo(), "nx": n, "snapshots": 1,
                           "out_dir": None})
        sub.dt = None
        scale = (base / n) ** ((cfg.order - 3) / 3.0) if cfg.order > 3 else 1.0
        setup_n = build_problem(cfg.problem, constants=cfg.constants)
        scheme = make_scheme(sub)
        mesh = _make_mesh(setup_n, sub)
        fld = _init_field(setup_n, mesh)
        system = setup_n.system
        t_end = sub.t_end if sub.t_end is not None else setup_n.t_end

        def rate_fn(f, t):
            return compute_rate(f, system, scheme, setup_n.bcs,
                                forcing=setup_n.forcing, t=t)
        t = 0.0
        while t < t_end - 1e-13:
            dt = min(compute_dt(fld, system, sub.cfl) * scale, t_end - t)
            advance(fld, t, dt, rate_fn, system, sub.stepper)
            t += dt
        err = fld.interior - setup_n.exact(mesh.xcenters(), t_end)
        l1.append(float(np.abs(err).mean()))
        linf.append(float(np.abs(err).max()))
    return ConvergenceReport(list(resolutions), l1, linf)


# ---------------------------------------------------------------------------
# reference solutions and benchmark
# ---------------------------------------------------------------------------

def run_reference(problem: str, nx: int = 2000, constants: dict | None = None) -> tuple:
    """Self-reference run: third order, LLF, component-wise interpolation on
    a fine mesh.  Returns (x, conserved)."""
    cfg = RunConfig(problem=problem, order=3, riemann="llf", nx=nx,
                    formulation="eq15", char_interp=False, cfl=0.8,
                    constants=constants or {})
    art = run_simulation(cfg)
    return art.mesh.xcenters(), art.field.interior.copy()


def compare_to_reference(x, u, x_ref, u_ref) -> float:
    """L1 distance per variable against a fine-mesh reference, averaged onto
    the coarse zones by sampling the reference at the coarse centers."""
    idx = np.clip(np.searchsorted(x_ref, x), 0, len(x_ref) - 1)
    return float(np.abs(u - u_ref[:, idx]).mean())


def run_benchmark(orders=(3, 5, 7, 9),
                  formulations=("eq15", "eq13", "central", "eq2"),
                  nx: int = 1000, steps: int = 200, repeats: int = 5) -> dict:
    """Zones-per-second table on the shock-tube workload: fixed step count,
    LLF, warm-up run discarded, median of the timed repeats."""
    results = {}
    setup = build_problem("sod")
    for formulation in formulations:
        for order in orders:
            cfg = RunConfig(problem="sod", order=order, formulation=formulation,
                            riemann="llf", nx=nx, cfl=0.8)
            scheme = make_scheme(cfg)
            mesh = _make_mesh(setup, cfg)
            system = setup.system

            def one_run():
                fld = _init_field(setup, mesh)

                def rate_fn(f, t):
                    return compute_rate(f, system, scheme, setup.bcs, t=t)
                t = 0.0
                t0 = time.perf_counter()
                for _ in range(steps):
                    dt = compute_dt(fld, system, cfg.cfl)
                    advance(fld, t, dt, rate_fn, system, "ssp3")
                    t += dt
                return time.perf_counter() - t0

            one_run()  # warm-up discarded
            times = sorted(one_run() for _ in range(repeats))
            median = times[len(times) // 2]
            results[(formulation, order)] = nx * steps / median
    return results


def benchmark_table(results: dict) -> str:
    orders = sorted({o for _, o in results})
    forms = sorted({f for f, _ in results})
    lines = ["formulation " + "".join(f"{f'order {o}':>14}" for o in orders)]
    for f in forms:
        row = f"{f:<11}"
        for o in orders:
            row += f"{results[(f, o)]:>12.0f}/s"
        lines.append(row)
    return "\n".join(lines)
