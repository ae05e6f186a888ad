"""Uniform Cartesian meshes, pointwise field storage and strip extraction.

Mesh functions are stored as point samples at zone centers (this is a finite
difference code, not a finite volume one).  Storage is structure-of-arrays:
one contiguous array per variable, with the x index innermost so that
x-strips are contiguous memory.  Ghost layers are carried on every side and
filled by :func:`fill_ghosts` before each sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def ghosts_for_order(order: int) -> int:
    """Ghost layers per side needed by the stencils of a given order.

    The zone interpolation needs (order-1)/2 + 1 layers and the
    interface-centered derivative stencils need (order+1)/2; one spare layer
    covers both with a single formula.
    """
    if order not in (3, 5, 7, 9):
        raise ValueError(f"unsupported order {order}; expected 3, 5, 7 or 9")
    return (order + 3) // 2


@dataclass(frozen=True)
class UniformMesh:
    """Uniform 1D or 2D Cartesian mesh (zone counts exclude ghosts)."""

    ndim: int
    nx: int
    x0: float
    dx: float
    ny: int = 0
    y0: float = 0.0
    dy: float = 0.0
    nghost: int = 4

    def __post_init__(self):
        if self.ndim not in (1, 2):
            raise ValueError("ndim must be 1 or 2")
        if self.nx < 1 or self.dx <= 0.0:
            raise ValueError("nx must be positive and dx > 0")
        if self.ndim == 2 and (self.ny < 1 or self.dy <= 0.0):
            raise ValueError("2D mesh needs ny >= 1 and dy > 0")
        if self.nghost < 1:
            raise ValueError("nghost must be >= 1")

    @classmethod
    def line(cls, nx, x0, x1, nghost):
        return cls(ndim=1, nx=nx, x0=x0, dx=(x1 - x0) / nx, nghost=nghost)

    @classmethod
    def rect(cls, nx, ny, x0, x1, y0, y1, nghost):
        return cls(ndim=2, nx=nx, x0=x0, dx=(x1 - x0) / nx,
                   ny=ny, y0=y0, dy=(y1 - y0) / ny, nghost=nghost)

    def spacing(self, axis: int) -> float:
        return self.dx if axis == 0 else self.dy

    def zones(self, axis: int) -> int:
        return self.nx if axis == 0 else self.ny

    def xcenters(self) -> np.ndarray:
        """Zone-center x coordinates, interior only."""
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    def ycenters(self) -> np.ndarray:
        if self.ndim != 2:
            raise ValueError("ycenters on a 1D mesh")
        return self.y0 + (np.arange(self.ny) + 0.5) * self.dy


class FieldSet:
    """Pointwise conserved-variable samples over a mesh, ghosts included.

    ``values`` has shape (nvar, nx+2g) in 1D and (nvar, ny+2g, nx+2g) in 2D;
    the x index is always last (contiguous).
    """

    def __init__(self, mesh: UniformMesh, nvar: int, values: np.ndarray | None = None):
        self.mesh = mesh
        self.nvar = nvar
        g = mesh.nghost
        if mesh.ndim == 1:
            shape = (nvar, mesh.nx + 2 * g)
        else:
            shape = (nvar, mesh.ny + 2 * g, mesh.nx + 2 * g)
        if values is None:
            values = np.zeros(shape)
        if values.shape != shape:
            raise ValueError(f"values shape {values.shape} != expected {shape}")
        self.values = values

    def copy(self) -> "FieldSet":
        return FieldSet(self.mesh, self.nvar, self.values.copy())

    def zeros_like(self) -> "FieldSet":
        return FieldSet(self.mesh, self.nvar)

    @property
    def interior(self) -> np.ndarray:
        """Writable view of the interior zones."""
        g = self.mesh.nghost
        if self.mesh.ndim == 1:
            return self.values[:, g:-g]
        return self.values[:, g:-g, g:-g]

    @interior.setter
    def interior(self, data):
        g = self.mesh.nghost
        if self.mesh.ndim == 1:
            self.values[:, g:-g] = data
        else:
            self.values[:, g:-g, g:-g] = data


@dataclass(frozen=True)
class BoundaryCondition:
    """Ghost-fill rule for one side: periodic, transmissive or fixed state."""

    kind: str
    state: np.ndarray | None = None  # fixed-state only, shape (nvar,)

    def __post_init__(self):
        if self.kind not in ("periodic", "transmissive", "fixed"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "fixed" and self.state is None:
            raise ValueError("fixed boundary needs a state vector")


PERIODIC = BoundaryCondition("periodic")
TRANSMISSIVE = BoundaryCondition("transmissive")


def _fill_axis(values: np.ndarray, g: int, lo: BoundaryCondition, hi: BoundaryCondition):
    """Fill ghost layers along the last axis of ``values``."""
    n = values.shape[-1] - 2 * g
    if lo.kind == "periodic" or hi.kind == "periodic":
        if lo.kind != hi.kind:
            raise ValueError("periodic boundaries must be paired")
        values[..., :g] = values[..., n:n + g]
        values[..., n + g:] = values[..., g:2 * g]
        return
    if lo.kind == "transmissive":
        values[..., :g] = values[..., g:g + 1]
    else:
        values[..., :g] = lo.state.reshape((-1,) + (1,) * (values.ndim - 1))
    if hi.kind == "transmissive":
        values[..., n + g:] = values[..., n + g - 1:n + g]
    else:
        values[..., n + g:] = hi.state.reshape((-1,) + (1,) * (values.ndim - 1))


def fill_ghosts(field: FieldSet, bcs: dict) -> FieldSet:
    """Fill all ghost zones of ``field`` in place and return it.

    ``bcs`` maps side names ("xlo", "xhi" and, in 2D, "ylo", "yhi") to
    :class:`BoundaryCondition`.  Corner ghosts are filled by applying the
    x fill first and the y fill second over the full extended rows.
    """
    mesh = field.mesh
    g = mesh.nghost
    for side in ("xlo", "xhi") + (("ylo", "yhi") if mesh.ndim == 2 else ()):
        if side not in bcs:
            raise ValueError(f"missing boundary condition for side {side!r}")
        st = bcs[side].state
        if st is not None and st.shape != (field.nvar,):
            raise ValueError("fixed-state boundary has wrong variable count")
    _fill_axis(field.values, g, bcs["xlo"], bcs["xhi"])
    if mesh.ndim == 2:
        swapped = field.values.swapaxes(1, 2)  # y becomes the last axis
        _fill_axis(swapped, g, bcs["ylo"], bcs["yhi"])
    return field


def extract_strip(field: FieldSet, axis: int, transverse_index: int) -> np.ndarray:
    """Contiguous (nvar, n+2g) copy of one 1D strip including ghosts.

    ``transverse_index`` is the interior index along the other axis; it is
    ignored in 1D.  Round-tripping through :func:`scatter_strip` is exact.
    """
    mesh = field.mesh
    if axis not in (0, 1) or (mesh.ndim == 1 and axis != 0):
        raise ValueError(f"axis {axis} invalid for {mesh.ndim}D mesh")
    if mesh.ndim == 1:
        return np.ascontiguousarray(field.values)
    g = mesh.nghost
    if axis == 0:
        if not 0 <= transverse_index < mesh.ny:
            raise IndexError("transverse index out of range")
        return np.ascontiguousarray(field.values[:, g + transverse_index, :])
    if not 0 <= transverse_index < mesh.nx:
        raise IndexError("transverse index out of range")
    return np.ascontiguousarray(field.values[:, :, g + transverse_index])


def scatter_strip(field: FieldSet, strip: np.ndarray, axis: int, transverse_index: int):
    """Write a full strip (ghosts included) back; inverse of extract_strip."""
    mesh = field.mesh
    if mesh.ndim == 1:
        field.values[...] = strip
        return
    g = mesh.nghost
    if axis == 0:
        field.values[:, g + transverse_index, :] = strip
    else:
        field.values[:, :, g + transverse_index] = strip


def scatter_strip_update(rate: FieldSet, contribution: np.ndarray, axis: int,
                         transverse_index: int):
    """Accumulate an interior-only strip contribution into a rate field.

    ``contribution`` has shape (nvar, n_interior) for the given axis; ghost
    zones of the rate field are never written.
    """
    mesh = rate.mesh
    g = mesh.nghost
    if contribution.shape != (rate.nvar, mesh.zones(axis)):
        raise ValueError("contribution shape does not match interior strip")
    if mesh.ndim == 1:
        rate.values[:, g:-g] += contribution
        return
    if axis == 0:
        rate.values[:, g + transverse_index, g:-g] += contribution
    else:
        rate.values[:, g:-g, g + transverse_index] += contribution
