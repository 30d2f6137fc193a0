"""Topological invariants by Brillouin-zone integration.

The 1D winding number integrates the curvature function over dk/(2 pi); the
2D invariant integrates the mapping-degree density of the Bloch axis over
d^2k/(4 pi) and is cross-checked against a gauge-invariant plaquette
(link-variable) computation on the same grid, an independent route free of
derivative discretization error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OracleMismatch, QuantizationFailure, ZeroGap
from .walk1d import WalkParams, rotated_curvature_1d, zeta_components_1d
from .walk2d import curvature_grid_2d, zeta_components_2d

DEFAULT_N_1D = 4096
DEFAULT_N_2D = 256
GAP_TOL = 1e-10
DEFECT_LIMIT = 1e-3


@dataclass(frozen=True)
class InvariantResult:
    """Raw BZ integral, its rounded integer, and the quantization defect."""

    raw: float
    rounded: int
    defect: float
    grid: int


def _quantize(raw: float, grid: int) -> InvariantResult:
    rounded = int(np.rint(raw))
    defect = abs(raw - rounded)
    if defect >= DEFECT_LIMIT:
        raise QuantizationFailure("integral %.6f is %.2e from an integer"
                                  % (raw, defect))
    return InvariantResult(float(raw), rounded, float(defect), grid)


def winding_number_1d(p: WalkParams, n_grid: int = DEFAULT_N_1D) -> InvariantResult:
    """Winding number C = integral F(k) dk / (2 pi) on a uniform grid.

    Raises:
        ZeroGap: the spectrum closes somewhere on the grid.
        QuantizationFailure: the integral does not round cleanly.
    """
    k = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    zx, zy, zz = zeta_components_1d(k, p)
    if np.min(zx * zx + zy * zy + zz * zz) < GAP_TOL ** 2:
        raise ZeroGap("gap closed on the integration grid")
    raw = float(np.sum(rotated_curvature_1d(k, p)) / n_grid)
    return _quantize(raw, n_grid)


def chern_number_2d(p: WalkParams, n_grid: int = DEFAULT_N_2D) -> InvariantResult:
    """Mapping-degree invariant C = integral F d^2k / (4 pi), with oracle.

    The trapezoidal integral of the curvature function must round to the
    same integer as the plaquette link-variable computation.

    Raises:
        ZeroGap, QuantizationFailure, OracleMismatch.
    """
    k = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    zx, zy, zz = zeta_components_2d(kx, ky, p)
    if np.min(zx * zx + zy * zy + zz * zz) < GAP_TOL ** 2:
        raise ZeroGap("gap closed on the integration grid")
    f = curvature_grid_2d(kx, ky, p)
    raw = float(np.sum(f) * (2.0 * np.pi / n_grid) ** 2 / (4.0 * np.pi))
    result = _quantize(raw, n_grid)
    oracle = chern_plaquette(p, n_grid)
    if oracle.rounded != result.rounded:
        raise OracleMismatch("integral gives %d but plaquette oracle gives %d"
                             % (result.rounded, oracle.rounded))
    return result

def _lower_band_states(kx, ky, p: WalkParams):
    """Lower-band spinors of the axis field on a grid, gauge chosen per point.

    Uses the south gauge (axis_x + i axis_y in the lower component) away from
    the north pole and the complementary gauge near it; the plaquette product
    is invariant under the per-point choice.
    """
    zx, zy, zz = zeta_components_2d(kx, ky, p)
    zn = np.sqrt(zx * zx + zy * zy + zz * zz)
    nx, ny, nz = zx / zn, zy / zn, zz / zn
    south = nz < 0.5
    up = np.where(south, nz - 1.0, -(nx - 1j * ny))
    dn = np.where(south, nx + 1j * ny, 1.0 + nz)
    norm = np.sqrt(np.abs(up) ** 2 + np.abs(dn) ** 2)
    return up / norm, dn / norm


def chern_plaquette(p: WalkParams, n_grid: int = DEFAULT_N_2D) -> InvariantResult:
    """Plaquette (link-variable) invariant of the lower band.

    Link products around each plaquette give the lattice field strength; the
    loop holonomy is exp(-i flux), so the flux is minus the argument of the
    counterclockwise product.  The total over the zone is 2 pi C exactly at
    any resolution fine enough to keep each plaquette flux within (-pi, pi).
    """
    k = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    zx, zy, zz = zeta_components_2d(kx, ky, p)
    if np.min(zx * zx + zy * zy + zz * zz) < GAP_TOL ** 2:
        raise ZeroGap("gap closed on the plaquette grid")
    up, dn = _lower_band_states(kx, ky, p)

    def link(axis):
        u2 = np.roll(up, -1, axis=axis)
        d2 = np.roll(dn, -1, axis=axis)
        return np.conj(up) * u2 + np.conj(dn) * d2

    ux = link(0)
    uy = link(1)
    plaq = ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy)
    flux = -np.angle(plaq)
    raw = float(flux.sum() / (2.0 * np.pi))
    return _quantize(raw, n_grid)


__all__ = [
    "InvariantResult", "winding_number_1d", "chern_number_2d",
    "chern_plaquette",
]
