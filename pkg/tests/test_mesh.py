import numpy as np
import pytest

from ncweno.mesh import (BoundaryCondition, FieldSet, PERIODIC, TRANSMISSIVE,
                         UniformMesh, extract_strip, fill_ghosts,
                         ghosts_for_order, scatter_strip, scatter_strip_update)


def make_1d(n=4, nghost=2, nvar=1):
    mesh = UniformMesh.line(n, 0.0, 1.0, nghost)
    return mesh, FieldSet(mesh, nvar)


def test_ghosts_for_order():
    assert [ghosts_for_order(k) for k in (3, 5, 7, 9)] == [3, 4, 5, 6]
    with pytest.raises(ValueError):
        ghosts_for_order(4)


@pytest.mark.parametrize("order", [3, 5, 7, 9])
def test_ghosts_cover_stencils(order):
    from ncweno.interp import interp_tables
    # zone interpolation needs radius+1 ghosts; boundary derivatives need
    # (order+1)/2; both must fit in the configured layer count
    g = ghosts_for_order(order)
    assert g >= interp_tables(order).radius + 1
    assert g >= (order + 1) // 2


def test_periodic_fill():
    mesh, f = make_1d()
    f.interior = np.array([[1.0, 2.0, 3.0, 4.0]])
    fill_ghosts(f, {"xlo": PERIODIC, "xhi": PERIODIC})
    assert f.values[0].tolist() == [3, 4, 1, 2, 3, 4, 1, 2]


def test_transmissive_fill():
    mesh, f = make_1d()
    f.interior = np.array([[1.0, 2.0, 3.0, 4.0]])
    fill_ghosts(f, {"xlo": TRANSMISSIVE, "xhi": TRANSMISSIVE})
    assert f.values[0].tolist() == [1, 1, 1, 2, 3, 4, 4, 4]


def test_fixed_fill_uses_table_state():
    # left column of the first two-phase Riemann problem, conserved form
    from ncweno.problems import build_problem
    setup = build_problem("bn_rp1")
    state = setup.initial(np.array([-0.25]))[:, 0]
    mesh = UniformMesh.line(4, 0.0, 1.0, 2)
    f = FieldSet(mesh, 7)
    f.interior = np.tile(state[:, None] * 0.5, (1, 4))
    fill_ghosts(f, {"xlo": BoundaryCondition("fixed", state),
                    "xhi": TRANSMISSIVE})
    assert np.array_equal(f.values[:, 0], state)
    assert np.array_equal(f.values[:, 1], state)


def test_fill_idempotent():
    mesh, f = make_1d()
    f.interior = np.array([[1.0, 2.0, 3.0, 4.0]])
    bcs = {"xlo": PERIODIC, "xhi": PERIODIC}
    fill_ghosts(f, bcs)
    before = f.values.copy()
    fill_ghosts(f, bcs)
    assert np.array_equal(before, f.values)


def test_missing_bc_and_bad_state():
    mesh, f = make_1d()
    with pytest.raises(ValueError):
        fill_ghosts(f, {"xlo": PERIODIC})
    with pytest.raises(ValueError):
        fill_ghosts(f, {"xlo": BoundaryCondition("fixed", np.zeros(3)),
                        "xhi": TRANSMISSIVE})
    with pytest.raises(ValueError):
        BoundaryCondition("weird")


def test_strip_round_trip_bitwise(rng):
    mesh = UniformMesh.rect(5, 3, 0.0, 1.0, 0.0, 1.0, 2)
    f = FieldSet(mesh, 2, rng.random((2, 7, 9)))
    for axis, count in ((0, 3), (1, 5)):
        for j in range(count):
            strip = extract_strip(f, axis, j)
            before = f.values.copy()
            scatter_strip(f, strip, axis, j)
            assert np.array_equal(before, f.values)
    assert extract_strip(f, 0, 1).shape == (2, 9)
    assert extract_strip(f, 1, 2).shape == (2, 7)


def test_strip_guards():
    mesh, f = make_1d()
    with pytest.raises(ValueError):
        extract_strip(f, 1, 0)       # axis=y on a 1D mesh
    mesh2 = UniformMesh.rect(4, 3, 0.0, 1.0, 0.0, 1.0, 2)
    f2 = FieldSet(mesh2, 1)
    with pytest.raises(IndexError):
        extract_strip(f2, 0, 3)


def test_scatter_update_accumulates_and_spares_ghosts(rng):
    mesh = UniformMesh.rect(4, 3, 0.0, 1.0, 0.0, 1.0, 2)
    rate = FieldSet(mesh, 2)
    c = rng.random((2, 4))
    scatter_strip_update(rate, c, 0, 1)
    scatter_strip_update(rate, c, 0, 1)
    assert np.allclose(rate.values[:, 3, 2:-2], 2 * c)
    ghosts = rate.values.copy()
    ghosts[:, 2:-2, 2:-2] = 0.0
    assert np.all(ghosts == 0.0)
    with pytest.raises(ValueError):
        scatter_strip_update(rate, rng.random((2, 5)), 0, 1)


def test_mesh_validation():
    with pytest.raises(ValueError):
        UniformMesh(ndim=3, nx=4, x0=0.0, dx=0.1)
    with pytest.raises(ValueError):
        UniformMesh(ndim=1, nx=4, x0=0.0, dx=-0.1)
    with pytest.raises(ValueError):
        UniformMesh(ndim=2, nx=4, x0=0.0, dx=0.1)  # missing ny/dy
