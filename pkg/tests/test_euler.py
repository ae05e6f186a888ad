import numpy as np
import pytest

from conftest import fd_flux_jacobian, random_euler_states
from ncweno.systems.base import HyperbolicityError
from ncweno.systems.euler import Euler


@pytest.mark.parametrize("ndim,axis", [(1, 0), (2, 0), (2, 1)])
def test_round_trip_and_jacobian(rng, ndim, axis):
    sys, u = random_euler_states(rng, 40, ndim)
    prim = sys.primitive(u)
    assert np.allclose(sys.conserved(prim), u, rtol=1e-13)
    a = sys.flux_jacobian(u, axis)
    afd = fd_flux_jacobian(sys, u, axis)
    assert np.abs(a - afd).max() <= 1e-6 * max(1.0, np.abs(a).max())


@pytest.mark.parametrize("ndim,axis", [(1, 0), (2, 0), (2, 1)])
def test_eigensystem_invariants(rng, ndim, axis):
    sys, u = random_euler_states(rng, 40, ndim)
    a = fd_flux_jacobian(sys, u, axis)      # C = 0 for this system
    lam, r, l = sys.eigensystem(u, axis)
    res = np.einsum("nij,njk->nik", a, r) - r * lam.T[:, None, :]
    assert np.abs(res).max() <= 1e-8 * np.abs(a).max()
    assert np.abs(np.einsum("nij,njk->nik", l, r) - np.eye(sys.nvar)).max() <= 1e-10
    assert np.all(np.diff(lam, axis=0) >= -1e-12)


def test_numerical_eigensystem_matches_analytic(rng):
    sys, u = random_euler_states(rng, 25)
    lam_a, _, _ = sys.eigensystem(u)
    lam_n, r, l = sys.numerical_eigensystem(u)
    assert np.abs(np.sort(lam_a, axis=0) - lam_n).max() <= 1e-8
    a = sys.quasilinear_matrix(u, 0)
    res = np.einsum("nij,njk->nik", a, r) - r * lam_n.T[:, None, :]
    assert np.abs(res).max() <= 1e-8 * max(1.0, np.abs(a).max())


def test_numerical_eigensystem_flags_complex_pairs():
    class Rotator(Euler):
        def quasilinear_matrix(self, u, axis=0):
            n = u.shape[1]
            a = np.zeros((n, 3, 3))
            a[:, 0, 1] = 1.0
            a[:, 1, 0] = -1.0   # pure rotation: eigenvalues +-i
            a[:, 2, 2] = 1.0
            return a
    sys = Rotator(1)
    u = sys.conserved(np.array([[1.0], [0.0], [1.0]]))
    with pytest.raises(HyperbolicityError):
        sys.numerical_eigensystem(u)


def test_admissibility():
    sys = Euler(1)
    u = sys.conserved(np.array([[1.0, 1.0], [0.0, 0.0], [1.0, 1.0]]))
    assert sys.admissible_mask(u).all()
    u[2, 1] = 0.0   # zero total energy -> negative pressure
    mask = sys.admissible_mask(u)
    assert mask[0] and not mask[1]


def test_ld_contact_is_genuinely_degenerate(rng):
    # eigenvalue along the contact eigenvector direction stays u
    sys, u = random_euler_states(rng, 8)
    for lam, r, l in sys.ld_fields(u):
        eps = 1e-6
        u2 = u + eps * r
        lam2 = u2[1] / u2[0]
        assert np.abs(lam2 - lam).max() <= 1e-9 * (1 + np.abs(lam).max())
