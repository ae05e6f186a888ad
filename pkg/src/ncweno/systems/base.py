"""Pluggable hyperbolic system interface.

A system supplies the physical flux, the matrix of non-conservative
products, eigenstructure, admissibility checks, primitive/conserved maps
and (for stiff systems) relaxation sources.  All methods are vectorized:
states are (nvar, n) arrays and per-zone matrices are (n, nvar, nvar).
"""

from __future__ import annotations

import numpy as np


class AdmissibilityError(RuntimeError):
    """A state left the physically admissible set."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class HyperbolicityError(RuntimeError):
    """Complex eigenvalues detected (loss of hyperbolicity)."""


class HyperbolicSystem:
    name: str = "base"
    has_noncons: bool = False
    has_relaxation: bool = False   # relaxation_solve implemented
    is_stiff: bool = False
    # whether the high-derivative ladders should share one nonlinear weight
    # set across components by default (systems whose physics lives on a
    # mixture manifold need this; see the two-phase system)
    shared_ladder_default: bool = False

    def __init__(self, ndim: int = 1):
        if ndim not in (1, 2):
            raise ValueError("ndim must be 1 or 2")
        self.ndim = ndim

    # -- bookkeeping -------------------------------------------------------
    @property
    def nvar(self) -> int:
        raise NotImplementedError

    @property
    def var_names(self) -> tuple[str, ...]:
        raise NotImplementedError

    @property
    def prim_names(self) -> tuple[str, ...]:
        raise NotImplementedError

    @property
    def conservative_components(self) -> tuple[int, ...]:
        """Indices of components whose non-conservative row is identically
        zero (their periodic sums are exactly conserved)."""
        return tuple(range(self.nvar))

    # -- physics -----------------------------------------------------------
    def flux(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        raise NotImplementedError

    def noncons_matrix(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        """C(U) with shape (n, nvar, nvar); zero when has_noncons is False."""
        n = u.shape[1]
        return np.zeros((n, self.nvar, self.nvar))

    def noncons_product(self, u: np.ndarray, du: np.ndarray, axis: int = 0) -> np.ndarray:
        """C(U) . du without forming the dense matrix (hot path; systems
        with sparse C override this)."""
        c = self.noncons_matrix(u, axis)
        return np.einsum("nij,jn->in", c, du)

    def flux_jacobian(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        """Analytic dF/dU with shape (n, nvar, nvar)."""
        raise NotImplementedError

    def quasilinear_matrix(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        a = self.flux_jacobian(u, axis)
        if self.has_noncons:
            a = a + self.noncons_matrix(u, axis)
        return a

    # -- wave speeds and eigenstructure -------------------------------------
    def signal_speed_range(self, u: np.ndarray, axis: int = 0):
        """(lo, hi) per zone with lo <= lambda_min and hi >= lambda_max."""
        raise NotImplementedError

    def max_signal_speed(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        lo, hi = self.signal_speed_range(u, axis)
        return np.maximum(np.abs(lo), np.abs(hi))

    def eigensystem(self, u: np.ndarray, axis: int = 0):
        """(lam, R, L) with lam (nvar, n) ascending, R/L (n, nvar, nvar),
        A R = R diag(lam) and L = R^-1."""
        return self.numerical_eigensystem(u, axis)

    def numerical_eigensystem(self, u: np.ndarray, axis: int = 0):
        """Dense eigendecomposition of the quasilinear matrix (fallback and
        cross-check path for systems without analytic eigenvectors)."""
        a = self.quasilinear_matrix(u, axis)
        lam, vec = np.linalg.eig(a)
        scale = np.max(np.abs(lam), axis=-1) + 1e-300
        bad = np.abs(lam.imag).max(axis=-1) > 1e-8 * scale
        if np.any(bad):
            raise HyperbolicityError(
                f"complex eigenvalues at zones {np.nonzero(bad)[0][:8].tolist()}")
        lam = lam.real
        vec = vec.real
        idx = np.argsort(lam, axis=-1)
        lam = np.take_along_axis(lam, idx, axis=-1)
        r = np.take_along_axis(vec, idx[:, None, :], axis=-1)
        l = np.linalg.inv(r)
        return lam.T, r, l

    def ld_fields(self, u_star: np.ndarray, axis: int = 0):
        """Linearly degenerate fields at the resolved state, as a list of
        (lam (n,), r (nvar, n), l (nvar, n)) with l.r = 1; None if unknown."""
        return None

    # -- variable maps and admissibility ------------------------------------
    def primitive(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def conserved(self, prim: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def admissible_mask(self, u: np.ndarray) -> np.ndarray:
        return np.all(np.isfinite(u), axis=0)

    def check_admissible(self, u: np.ndarray, context: str = ""):
        ok = self.admissible_mask(u)
        if not np.all(ok):
            where = np.nonzero(~ok)[0]
            raise AdmissibilityError(
                f"{self.name}: inadmissible state {context} at zones "
                f"{where[:8].tolist()} (of {where.size})", where=where)

    # -- sources ------------------------------------------------------------
    def source(self, u: np.ndarray) -> np.ndarray | None:
        """Pointwise source vector; None when the system has no sources."""
        return None

    def relaxation_solve(self, u: np.ndarray, dt: float) -> np.ndarray:
        """Pointwise implicit solve of U = U_in + dt*S(U) for stiff sources."""
        raise NotImplementedError(f"{self.name} has no relaxation sources")

    # -- shock flattener -----------------------------------------------------
    def flattener(self, u_strip: np.ndarray) -> np.ndarray:
        """Per-zone flattener value in [0, 1]; zones with eta > 0 suppress the
        high-derivative terms.  Defaults to all zero (inactive)."""
        return np.zeros(u_strip.shape[1])
