import numpy as np
import pytest
from fractions import Fraction

from ncweno.interp import (interp_tables, interpolate_characteristic,
                           interpolate_strip, linear_interp_oracle)
from ncweno.systems.euler import Euler

ORDERS = (3, 5, 7, 9)


def monomial_strip(m, order, dx=0.02, x0=1.0, extra=9):
    rad = interp_tables(order).radius
    n = 2 * rad + extra
    x = (np.arange(n) - n / 3) * dx + x0
    return x, (x ** m)[None, :]


def test_constant_reproduction_exact():
    u = np.full((2, 20), 7.25)
    r, l = interpolate_strip(u, 5)
    assert np.all(r == 7.25) and np.all(l == 7.25)


def test_small_stencil_linear_and_quadratic():
    # f(x) = x on centers -dx, 0, dx -> dx/2 at the right boundary
    dx = 0.3
    u = (np.arange(-2, 3.0) * dx)[None]
    r, l = interpolate_strip(u, 3)
    mid = 2 - interp_tables(3).radius
    assert r[0, mid] == pytest.approx(dx / 2, abs=1e-15)
    # f(x) = x^2 samples 1,0,1 -> 0.25 at x = 0.5 (the exact parabola)
    u = (np.arange(-3, 4.0) ** 2)[None]
    r, l = interpolate_strip(u, 3)
    mid = 3 - interp_tables(3).radius
    assert r[0, mid] == pytest.approx(0.25, abs=1e-14)
    assert l[0, mid] == pytest.approx(0.25, abs=1e-14)


def test_order5_quartic_matches_vandermonde_oracle():
    # independent oracle: solve the 5x5 Vandermonde system for the unique
    # degree-4 interpolant of x^4 samples and evaluate at dx/2
    dx = 0.7
    offs = np.arange(-2, 3)
    samples = (offs * dx) ** 4.0
    v = np.vander(offs * dx, 5, increasing=True)
    coef = np.linalg.solve(v, samples)
    expected = sum(c * (dx / 2) ** k for k, c in enumerate(coef))
    u = ((np.arange(-4, 5) * dx) ** 4.0)[None]
    ro, _ = linear_interp_oracle(u, 5)
    mid = 4 - interp_tables(5).radius
    assert ro[0, mid] == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("order", ORDERS)
def test_monomial_reproduction_matches_oracle(order):
    worst = 0.0
    for m in range(order):
        _, u = monomial_strip(m, order)
        r, l = interpolate_strip(u, order)
        ro, lo = linear_interp_oracle(u, order)
        scale = max(1.0, np.abs(ro).max())
        worst = max(worst, np.abs(r - ro).max() / scale,
                    np.abs(l - lo).max() / scale)
    assert worst <= 1e-12


@pytest.mark.parametrize("order", ORDERS)
def test_oracle_exact_on_polynomials(order):
    rad = interp_tables(order).radius
    n = 2 * rad + 7
    x = np.linspace(-0.4, 0.9, n)
    dx = x[1] - x[0]
    for m in range(order):
        u = (x ** m)[None]
        ro, lo = linear_interp_oracle(u, order)
        xr = x[rad:n - rad] + dx / 2
        xl = x[rad:n - rad] - dx / 2
        assert np.allclose(ro[0], xr ** m, rtol=1e-12, atol=1e-13)
        assert np.allclose(lo[0], xl ** m, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("order", ORDERS)
def test_order_of_accuracy_sine(order):
    errs = []
    for n in (40, 80):
        dx = 2 * np.pi / n
        xs = np.arange(-8, n + 8) * dx
        u = np.sin(xs)[None]
        r, _ = interpolate_strip(u, order)
        rad = interp_tables(order).radius
        xr = xs[rad:len(xs) - rad] + dx / 2
        errs.append(np.abs(r[0] - np.sin(xr)).max())
    assert errs[0] / errs[1] >= 2 ** (order - 0.5)


def test_eno_property_on_step():
    u = np.zeros((1, 30))
    u[0, 15:] = 1.0
    r, l = interpolate_strip(u, 5)
    tol = 1e-10
    assert r.min() >= -tol and r.max() <= 1.0 + tol
    assert l.min() >= -tol and l.max() <= 1.0 + tol


def test_translation_and_scale_equivariance(rng):
    u = rng.normal(size=(2, 25))
    r, l = interpolate_strip(u, 5)
    r2, l2 = interpolate_strip(u + 3.75, 5)
    assert np.allclose(r2, r + 3.75, rtol=0, atol=1e-12 * max(1, np.abs(r).max()))
    s = 137.5
    r3, l3 = interpolate_strip(u * s, 5)
    assert np.allclose(r3, r * s, rtol=1e-12)
    assert np.allclose(l3, l * s, rtol=1e-12)


def test_characteristic_identity_projection_matches_componentwise(rng):
    u = rng.normal(size=(3, 24)) + 3.0
    rad = interp_tables(5).radius
    nz = u.shape[1] - 2 * rad
    eye = np.broadcast_to(np.eye(3), (nz, 3, 3)).copy()
    rc, lc = interpolate_characteristic(u, eye, eye, 5)
    rp, lp = interpolate_strip(u, 5)
    assert np.allclose(rc, rp, rtol=0, atol=1e-13 * np.abs(rp).max())
    assert np.allclose(lc, lp, rtol=0, atol=1e-13 * np.abs(lp).max())


def test_characteristic_round_trip_constant(rng):
    u = np.full((3, 20), 2.5)
    rad = interp_tables(5).radius
    nz = u.shape[1] - 2 * rad
    r0 = np.eye(3) + 0.4 * rng.normal(size=(3, 3))
    r_eig = np.broadcast_to(r0, (nz, 3, 3)).copy()
    l_eig = np.linalg.inv(r_eig)
    assert np.abs(np.einsum("nij,njk->nik", l_eig, r_eig) - np.eye(3)).max() < 1e-10
    rc, lc = interpolate_characteristic(u, l_eig, r_eig, 5)
    assert np.allclose(rc, 2.5, atol=1e-12)
    assert np.allclose(lc, 2.5, atol=1e-12)


@pytest.mark.parametrize("order", (5, 7))
def test_characteristic_matches_componentwise_on_smooth_euler(order):
    # both paths converge to the exact interface values at the design order,
    # so their difference must also shrink at that rate
    sys = Euler(ndim=1)
    diffs = []
    for n in (32, 64):
        x = np.linspace(0.0, 1.0, n, endpoint=False)
        prim = np.stack([1.0 + 0.2 * np.sin(2 * np.pi * x),
                         0.5 + 0.1 * np.cos(2 * np.pi * x),
                         1.0 + 0.2 * np.sin(2 * np.pi * x + 1.0)])
        u = sys.conserved(prim)
        rad = interp_tables(order).radius
        lam, r_eig, l_eig = sys.eigensystem(u[:, rad:n - rad])
        rc, _ = interpolate_characteristic(u, l_eig, r_eig, order)
        rp, _ = interpolate_strip(u, order)
        diffs.append(np.abs(rc - rp).max())
    assert diffs[0] / max(diffs[1], 1e-300) >= 2 ** (order - 1)


def test_coefficients_are_exact_rationals():
    # spot-check the published 5-point boundary row against its fraction form
    tab = interp_tables(5)
    row = tab.high.val_right
    expected = [Fraction(3, 128), Fraction(-5, 32), Fraction(45, 64),
                Fraction(15, 32), Fraction(-5, 128)]
    assert np.allclose(row, [float(f) for f in expected], rtol=0, atol=1e-16)
    assert row.sum() == pytest.approx(1.0, abs=1e-15)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        interpolate_strip(np.zeros((1, 20)), 4)
    with pytest.raises(FloatingPointError):
        u = np.zeros((1, 20))
        u[0, 3] = np.nan
        interpolate_strip(u, 5)
