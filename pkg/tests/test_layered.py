import numpy as np
import pytest

from conftest import fd_flux_jacobian, random_layered_states
from ncweno.mesh import FieldSet, PERIODIC, UniformMesh, ghosts_for_order
from ncweno.spatial import SchemeConfig, compute_rate
from ncweno.systems.base import HyperbolicityError
from ncweno.systems.layered import DebrisFlow, TwoLayerShallowWater

CASES = [(TwoLayerShallowWater, 0.8), (DebrisFlow, 0.5)]


@pytest.mark.parametrize("cls,ratio", CASES)
@pytest.mark.parametrize("axis", [0, 1])
def test_jacobian_and_eigensystem_fuzzed(rng, cls, ratio, axis):
    sys, u = random_layered_states(rng, 40, cls, ratio)
    afd = fd_flux_jacobian(sys, u, axis) + sys.noncons_matrix(u, axis)
    lam, r, l = sys.eigensystem(u, axis)
    res = np.einsum("nij,njk->nik", afd, r) - r * lam.T[:, None, :]
    assert np.abs(res).max() <= 1e-6 * np.abs(afd).max()
    a = sys.quasilinear_matrix(u, axis)
    res2 = np.einsum("nij,njk->nik", a, r) - r * lam.T[:, None, :]
    assert np.abs(res2).max() <= 1e-8 * np.abs(a).max()
    assert np.abs(np.einsum("nij,njk->nik", l, r) - np.eye(7)).max() <= 1e-10
    lo, hi = sys.signal_speed_range(u, axis)
    assert np.all(lam.min(axis=0) >= lo - 1e-12)
    assert np.all(lam.max(axis=0) <= hi + 1e-12)


@pytest.mark.parametrize("cls,ratio", CASES)
def test_noncons_rows_as_printed(cls, ratio):
    g = 9.8
    sys = cls(1, gravity=g, density_ratio=ratio)
    u = sys.conserved(np.array([1.2, 0.1, 0.0, 0.7, -0.2, 0.0, 0.3])[:, None])
    c = sys.noncons_matrix(u, 0)[0]
    h_a, h_b = 1.2, 0.7
    if cls is TwoLayerShallowWater:
        # rows: g h1 dx h2 + g h1 dx b ; rho g h2 dx h1 + g h2 dx b
        assert c[1, 3] == pytest.approx(g * h_a)
        assert c[1, 6] == pytest.approx(g * h_a)
        assert c[4, 0] == pytest.approx(ratio * g * h_b)
        assert c[4, 6] == pytest.approx(g * h_b)
    else:
        # rows: g h_s rho dx h_f + g h_s dx b ; g h_f dx h_s + g h_f dx b
        assert c[1, 3] == pytest.approx(ratio * g * h_a)
        assert c[1, 6] == pytest.approx(g * h_a)
        assert c[4, 0] == pytest.approx(g * h_b)
        assert c[4, 6] == pytest.approx(g * h_b)
    # every other row of C vanishes
    mask = np.ones((7, 7), bool)
    mask[1] = mask[4] = False
    assert np.all(c[mask] == 0.0)


def test_debris_solid_momentum_flux_as_printed():
    g, rho = 9.8, 0.5
    sys = DebrisFlow(1, gravity=g, density_ratio=rho)
    h_s, u_s, h_f = 1.3, 0.4, 0.6
    u = sys.conserved(np.array([h_s, u_s, 0.0, h_f, 0.2, 0.0, 0.0])[:, None])
    f = sys.flux(u, 0)[:, 0]
    expected = h_s * u_s ** 2 + g * h_s ** 2 * rho / 2 \
        + g * (1 - rho) * h_s * (h_f + h_s) / 2
    assert f[1] == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("cls,ratio", CASES)
def test_flat_lake_at_rest_is_discrete_steady(cls, ratio):
    sys = cls(1, gravity=9.8, density_ratio=ratio)
    mesh = UniformMesh.line(24, 0.0, 1.0, ghosts_for_order(5))
    prim = np.tile(np.array([1.0, 0.0, 0.0, 0.7, 0.0, 0.0, 0.2])[:, None], (1, 24))
    f = FieldSet(mesh, 7)
    f.interior = sys.conserved(prim)
    cfg = SchemeConfig(order=5, riemann="hlli")
    rate = compute_rate(f, sys, cfg, {"xlo": PERIODIC, "xhi": PERIODIC})
    assert np.abs(rate.interior).max() <= 1e-12


@pytest.mark.parametrize("cls,ratio", CASES)
def test_topography_row_is_inert(rng, cls, ratio):
    sys, u = random_layered_states(rng, 16, cls, ratio)
    assert np.all(sys.flux(u, 0)[6] == 0.0)
    assert np.all(sys.flux_jacobian(u, 0)[:, 6, :] == 0.0)
    assert np.all(sys.noncons_matrix(u, 0)[:, 6, :] == 0.0)


def test_still_water_eigenvalues_in_pairs():
    sys = TwoLayerShallowWater(1, gravity=9.8, density_ratio=0.8)
    u = sys.conserved(np.array([1.0, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0])[:, None])
    lam, _, _ = sys.eigensystem(u)
    lam = np.sort(lam[:, 0])
    assert np.allclose(lam + lam[::-1], 0.0, atol=1e-12)


def test_hyperbolicity_loss_is_flagged():
    # large interlayer shear with near-equal depths: complex internal modes
    sys = TwoLayerShallowWater(1, gravity=9.8, density_ratio=0.999)
    u = sys.conserved(np.array([1.0, 3.0, 0.0, 1.0, -3.0, 0.0, 0.0])[:, None])
    with pytest.raises(HyperbolicityError):
        sys.eigensystem(u)


def test_riemann_table_states_load_and_evaluate():
    from ncweno.problems import build_problem
    for name in ("tlsw_rp1", "debris_rp2", "debris_rp3"):
        setup = build_problem(name)
        x = np.linspace(-5, 5, 50)
        u = setup.initial(x)
        assert setup.system.admissible_mask(u).all()
        assert np.isfinite(setup.system.flux(u, 0)).all()
        lam, r, l = setup.system.eigensystem(u, 0)
        assert np.isfinite(lam).all()
