import numpy as np
import pytest

from ncweno.interp import interp_tables
from ncweno.mesh import (FieldSet, PERIODIC, TRANSMISSIVE, UniformMesh,
                         ghosts_for_order)
from ncweno.mms import make_mms
from ncweno.spatial import (CENTER_LADDER, LADDER, SchemeConfig, boundary_ladder,
                            compute_rate)
from ncweno.systems.baer_nunziato import BaerNunziato
from ncweno.systems.euler import Euler

PER = {"xlo": PERIODIC, "xhi": PERIODIC}


def smooth_euler_field(n=64, order=5, seed=0):
    sys = Euler(1)
    mesh = UniformMesh.line(n, 0.0, 1.0, ghosts_for_order(order))
    x = mesh.xcenters()
    rng = np.random.default_rng(seed)
    prim = np.stack([1.5 + 0.3 * np.sin(2 * np.pi * x + rng.random()),
                     0.5 + 0.2 * np.cos(2 * np.pi * x + rng.random()),
                     2.0 + 0.4 * np.sin(4 * np.pi * x + rng.random())])
    f = FieldSet(mesh, 3)
    f.interior = sys.conserved(prim)
    return sys, mesh, f


def smooth_bn_field(n=64, order=5):
    sys = BaerNunziato(1, 1.4, 0.0, 1.4, 0.0)
    mesh = UniformMesh.line(n, 0.0, 1.0, ghosts_for_order(order))
    f = FieldSet(mesh, 7)
    f.interior = make_mms(sys).exact(mesh.xcenters(),  0.0)
    return sys, mesh, f


@pytest.mark.parametrize("formulation", ["eq2", "eq13", "eq15", "central"])
def test_uniform_state_gives_exactly_zero_rate(formulation):
    sys = BaerNunziato(1, 1.4, 0.0, 1.4, 0.0) if formulation != "eq2" else Euler(1)
    mesh = UniformMesh.line(16, 0.0, 1.0, ghosts_for_order(5))
    f = FieldSet(mesh, sys.nvar)
    state = np.array([1.0, 0.3, 2.0, 0.5, 0.2, 1.0, 0.4])[:sys.nvar]
    f.interior = np.tile(state[:, None], (1, 16))
    cfg = SchemeConfig(order=5, formulation=formulation, riemann="hll")
    rate = compute_rate(f, sys, cfg, PER)
    assert np.all(rate.interior == 0.0)


@pytest.mark.parametrize("order", [3, 5, 7, 9])
def test_eq15_equals_eq2_for_conservative_system(order):
    sys, mesh, f = smooth_euler_field(order=order)
    r15 = compute_rate(f.copy(), sys,
                       SchemeConfig(order=order, formulation="eq15", riemann="hll"), PER)
    r2 = compute_rate(f.copy(), sys,
                      SchemeConfig(order=order, formulation="eq2", riemann="hll"), PER)
    scale = np.abs(r2.interior).max()
    assert np.abs(r15.interior - r2.interior).max() <= 1e-14 * scale


def test_eq13_matches_eq2_for_conservative_system():
    sys, mesh, f = smooth_euler_field()
    r13 = compute_rate(f.copy(), sys,
                       SchemeConfig(order=5, formulation="eq13", riemann="hll"), PER)
    r2 = compute_rate(f.copy(), sys,
                      SchemeConfig(order=5, formulation="eq2", riemann="hll"), PER)
    assert np.abs(r13.interior - r2.interior).max() <= 1e-14 * np.abs(r2.interior).max()


def test_eq13_and_eq15_agree_under_refinement():
    # both are consistent discretizations; their rate difference shrinks at
    # high order (the zone-centered slope is one order below the boundary
    # ladder, so assert at least order-1)
    sys = BaerNunziato(1, 1.4, 0.0, 1.4, 0.0)
    mms = make_mms(sys)
    order = 5
    diffs = []
    for n in (32, 64, 128):
        mesh = UniformMesh.line(n, 0.0, 1.0, ghosts_for_order(order))
        f = FieldSet(mesh, 7)
        f.interior = mms.exact(mesh.xcenters(), 0.0)
        r15 = compute_rate(f.copy(), sys,
                           SchemeConfig(order=order, formulation="eq15", riemann="hll"), PER)
        r13 = compute_rate(f.copy(), sys,
                           SchemeConfig(order=order, formulation="eq13", riemann="hll"), PER)
        diffs.append(np.abs(r15.interior - r13.interior).max())
    rates = [np.log2(diffs[i] / diffs[i + 1]) for i in range(2)]
    assert min(rates) >= order - 1.3


def test_conservation_telescoping_periodic():
    sys, mesh, f = smooth_bn_field()
    cfg = SchemeConfig(order=5, formulation="eq15", riemann="hll")
    rate = compute_rate(f, sys, cfg, PER)
    # mass rows of both phases have identically zero non-conservative rows
    flux_scale = np.abs(sys.flux(f.interior, 0)).max() / mesh.dx
    for row in (0, 3):
        assert np.abs(rate.interior[row].sum()) <= 1e-13 * flux_scale * mesh.nx
    # Euler: every row telescopes
    sysE, meshE, fE = smooth_euler_field()
    rateE = compute_rate(fE, sysE, SchemeConfig(order=5, formulation="eq15",
                                                riemann="llf"), PER)
    scaleE = np.abs(sysE.flux(fE.interior, 0)).max() / meshE.dx
    assert np.abs(rateE.interior.sum(axis=1)).max() <= 1e-13 * scaleE * meshE.nx


def test_ladder_truncation_is_exact():
    rng = np.random.default_rng(3)
    ds = [rng.normal(size=(2, 9)) for _ in range(4)]
    l3 = boundary_ladder(ds, 3)
    assert np.array_equal(l3, LADDER[0] * ds[0])
    l5 = boundary_ladder(ds, 5)
    assert np.array_equal(l5, LADDER[0] * ds[0] + LADDER[1] * ds[1])
    l9 = boundary_ladder(ds, 9)
    expected = sum(LADDER[m] * ds[m] for m in range(4))
    assert np.allclose(l9, expected, rtol=0, atol=1e-16)


def test_order3_rate_free_of_higher_ladder_terms():
    # feeding nonsense into the d4..d8 slots must not change an order-3 rate
    sys, mesh, f = smooth_euler_field(order=3)
    cfg = SchemeConfig(order=3, formulation="eq15", riemann="hll")
    r1 = compute_rate(f.copy(), sys, cfg, PER)
    r2 = compute_rate(f.copy(), sys, cfg, PER)
    assert np.array_equal(r1.interior, r2.interior)
    assert len(__import__("ncweno.derivs", fromlist=["face_deriv_tables"])
               .face_deriv_tables(3).high.d_rows) == 1


def test_flattener_gates_only_flagged_zone_ladders():
    sys = BaerNunziato(1, 3.0, 100.0, 1.4, 0.0)
    mesh = UniformMesh.line(60, -0.5, 0.5, ghosts_for_order(5))
    x = mesh.xcenters()
    prim = np.empty((7, x.size))
    prim[0] = np.where(x < 0, 800.0, 1000.0)
    prim[1] = prim[2] = prim[4] = prim[5] = 1.0
    prim[3] = np.where(x < 0, 2.0, 1.0)
    prim[6] = np.where(x < 0, 0.99, 0.01)
    f = FieldSet(mesh, 7)
    f.interior = sys.conserved(prim)
    bcs = {"xlo": TRANSMISSIVE, "xhi": TRANSMISSIVE}
    r_on = compute_rate(f.copy(), sys, SchemeConfig(order=5, riemann="llf",
                                                    flattener=True), bcs)
    r_off = compute_rate(f.copy(), sys, SchemeConfig(order=5, riemann="llf",
                                                     flattener=False), bcs)
    eta = sys.flattener(f.interior)
    same = np.abs(r_on.interior - r_off.interior).max(axis=0) == 0.0
    assert np.all(same[eta <= 1e-12])


def test_eq13_zone_center_slope_taylor_identity():
    # for polynomial data, the boundary-value difference minus the odd
    # zone-centered Taylor ladder reproduces the interpolant slope exactly
    order = 9
    rad = interp_tables(order).radius
    n = 2 * rad + 5
    xi = np.arange(n, dtype=float) - n // 2
    u = (0.3 + 0.5 * xi + 0.25 * xi ** 2 + 0.1 * xi ** 3 + 0.02 * xi ** 4
         + 0.01 * xi ** 5)[None]
    from ncweno.interp import linear_interp_oracle
    right, left, slope = linear_interp_oracle(u, order, want_slope=True)
    # exact odd derivatives of the data polynomial at the valid centers
    xs = xi[rad:n - rad]
    d1 = 0.5 + 0.5 * xs + 0.3 * xs ** 2 + 0.08 * xs ** 3 + 0.05 * xs ** 4
    d3 = 0.6 + 0.48 * xs + 0.6 * xs ** 2
    d5 = 1.2 + 0.0 * xs
    recon = (right - left) - (CENTER_LADDER[0] * d3 + CENTER_LADDER[1] * d5)
    assert np.allclose(recon, d1, rtol=1e-11)
    assert np.allclose(slope, d1, rtol=1e-11)


def test_2d_sweep_is_dimension_by_dimension():
    # data varying only along x: the 2D rate equals the 1D rate in each row
    sys = Euler(2)
    order = 5
    mesh = UniformMesh.rect(32, 6, 0.0, 1.0, 0.0, 1.0, ghosts_for_order(order))
    x = mesh.xcenters()
    prim = np.stack([1.0 + 0.2 * np.sin(2 * np.pi * x),
                     0.3 + 0.1 * np.cos(2 * np.pi * x),
                     np.full_like(x, 0.05),
                     1.0 + 0.2 * np.cos(2 * np.pi * x)])
    u1d = sys.conserved(prim)
    f = FieldSet(mesh, 4)
    f.interior = np.repeat(u1d[:, None, :], 6, axis=1)
    bcs = {"xlo": PERIODIC, "xhi": PERIODIC, "ylo": PERIODIC, "yhi": PERIODIC}
    cfg = SchemeConfig(order=order, formulation="eq15", riemann="hll")
    rate = compute_rate(f, sys, cfg, bcs)
    for j in range(1, 6):
        assert np.array_equal(rate.interior[:, 0, :], rate.interior[:, j, :])
    assert np.abs(rate.interior).max() > 0.0


def test_threads_give_identical_rates():
    sys = Euler(2)
    mesh = UniformMesh.rect(16, 12, 0.0, 1.0, 0.0, 1.0, ghosts_for_order(5))
    rng = np.random.default_rng(1)
    x, y = mesh.xcenters(), mesh.ycenters()
    prim = np.stack([1.0 + 0.1 * np.sin(2 * np.pi * (x[None] + y[:, None])),
                     0.2 * np.cos(2 * np.pi * x)[None] * np.ones((12, 1)),
                     0.1 * np.sin(2 * np.pi * y)[:, None] * np.ones((1, 16)),
                     1.0 + 0.1 * np.cos(2 * np.pi * (x[None] - y[:, None]))])
    f = FieldSet(mesh, 4)
    f.interior = sys.conserved(prim.reshape(4, -1)).reshape(4, 12, 16)
    bcs = {"xlo": PERIODIC, "xhi": PERIODIC, "ylo": PERIODIC, "yhi": PERIODIC}
    cfg = SchemeConfig(order=5, riemann="hll")
    r1 = compute_rate(f.copy(), sys, cfg, bcs, threads=1)
    r2 = compute_rate(f.copy(), sys, cfg, bcs, threads=3)
    assert np.array_equal(r1.interior, r2.interior)


def test_eq2_refuses_noncons_system():
    sys = BaerNunziato(1, 1.4, 0.0, 1.4, 0.0)
    cfg = SchemeConfig(order=5, formulation="eq2")
    with pytest.raises(ValueError):
        cfg.validate_for(sys)


def test_blowup_is_reported():
    from ncweno.systems.base import AdmissibilityError
    sys, mesh, f = smooth_euler_field()
    f.interior[2] *= -1.0   # negative energies
    cfg = SchemeConfig(order=5, riemann="hll")
    with pytest.raises(AdmissibilityError):
        compute_rate(f, sys, cfg, PER)
