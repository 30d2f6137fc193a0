"""Split-step quantum walk on a line (chiral-symmetric, two internal states).

One period of the protocol is

    U(k) = S_up C(alpha) S_down C(beta),

with coins C(theta) = exp(-i theta sigma_y / 2) and spin-dependent shifts
S_up = exp(i k (sigma_z - 1)/2), S_down = exp(i k (sigma_z + 1)/2).  The
effective Hamiltonian H = i ln U = E n.sigma gives quasienergy bands

    E(k) = +/- arccos(kap_a kap_b cos k - lam_a lam_b),

with kap_j = cos(j/2), lam_j = sin(j/2), and axis n = zeta/|zeta| where

    zeta = (kap_a lam_b sin k,
            lam_a kap_b + kap_a lam_b cos k,
            -kap_a kap_b sin k).

The curvature function F(k) is the winding density of the chiral-projected
axis; its Brillouin-zone integral over dk/(2 pi) is the winding number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtCriticality, FlatDegenerate, ZeroGap
from .geometry import RealVec3, Spinor

ARCCOS_CLAMP = 1e-12
FLAT_FLOOR = 1e-12
GAP_FLOOR = 1e-14

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _reduce_angle(x: float) -> float:
    """Map an angle to (-pi, pi]."""
    y = float(np.mod(x + np.pi, 2.0 * np.pi) - np.pi)
    return np.pi if y == -np.pi else y


@dataclass(frozen=True)
class WalkParams:
    """Coin rotation angles of one walk period."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("angles must be finite")

    def reduced(self) -> "WalkParams":
        return WalkParams(_reduce_angle(self.alpha), _reduce_angle(self.beta))


@dataclass(frozen=True)
class Unitary2:
    """A 2x2 unitary, validated on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if np.abs(m @ m.conj().T - np.eye(2)).max() > 1e-12:
            raise ValueError("matrix is not unitary within 1e-12")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class EffectiveHamiltonianSample:
    """Upper-band quasienergy and rotation axis at one momentum."""

    quasienergy: float
    axis: RealVec3


def coin(theta: float) -> np.ndarray:
    """Coin rotation exp(-i theta sigma_y / 2)."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def unitary_1d(k: float, p: WalkParams) -> Unitary2:
    """One-period walk unitary at momentum k."""
    s_up = np.diag([1.0, np.exp(-1j * k)])
    s_down = np.diag([np.exp(1j * k), 1.0])
    return Unitary2(s_up @ coin(p.alpha) @ s_down @ coin(p.beta))


def effective_hamiltonian(U: Unitary2) -> EffectiveHamiltonianSample:
    """Decompose U = cos(E) I - i sin(E) n.sigma on the principal branch.

    E is reported in [0, pi] (upper band); n carries the sign information.

    Raises:
        FlatDegenerate: |sin E| < 1e-12, where the axis is undefined.
    """
    m = U.matrix
    cos_e = float((np.trace(m) / 2.0).real)
    cos_e = float(np.clip(cos_e, -1.0, 1.0))
    e = float(np.arccos(cos_e))
    sin_e = np.sin(e)
    if abs(sin_e) < FLAT_FLOOR:
        raise FlatDegenerate("band touching: quasienergy %.3e from 0 or pi" % min(e, np.pi - e))
    n = np.array([(1j * np.trace(s @ m) / 2.0).real for s in (_SX, _SY, _SZ)])
    n /= sin_e
    return EffectiveHamiltonianSample(e, RealVec3(*n))


def reconstruct_unitary(sample: EffectiveHamiltonianSample) -> Unitary2:
    """Rebuild U = cos(E) I - i sin(E) n.sigma from a decomposition."""
    e = sample.quasienergy
    n = sample.axis
    nsig = n.x * _SX + n.y * _SY + n.z * _SZ
    return Unitary2(np.cos(e) * np.eye(2) - 1j * np.sin(e) * nsig)


def _half_angles(p: WalkParams):
    return (np.cos(p.alpha / 2.0), np.sin(p.alpha / 2.0),
            np.cos(p.beta / 2.0), np.sin(p.beta / 2.0))


def energy_1d(k, p: WalkParams):
    """Upper quasienergy band E(k) = arccos(kap_a kap_b cos k - lam_a lam_b).

    Accepts scalar or array momenta.
    """
    ka, la, kb, lb = _half_angles(p)
    arg = ka * kb * np.cos(k) - la * lb
    arg = np.clip(arg, -1.0, 1.0)  # rounding tolerance at the branch edges
    return np.arccos(arg)


def zeta_components_1d(k, p: WalkParams):
    """Unnormalized-axis components (zeta_x, zeta_y, zeta_z); array-capable."""
    ka, la, kb, lb = _half_angles(p)
    zx = ka * lb * np.sin(k)
    zy = la * kb + ka * lb * np.cos(k)
    zz = -ka * kb * np.sin(k)
    return zx, zy, zz


def zeta_1d(k: float, p: WalkParams) -> RealVec3:
    """zeta-vector at one momentum; |zeta| = sin E and n = zeta/|zeta|."""
    zx, zy, zz = zeta_components_1d(float(k), p)
    return RealVec3(float(zx), float(zy), float(zz))


def chiral_axis(p: WalkParams) -> RealVec3:
    """Axis A = (kap_b, 0, lam_b) perpendicular to the walk's n-vector."""
    _, _, kb, lb = _half_angles(p)
    return RealVec3(kb, 0.0, lb)


def gauge_rotation_matrix(p: WalkParams) -> np.ndarray:
    """Rotation about y with cos(t) = lam_b, sin(t) = -kap_b, mapping A -> z."""
    _, _, kb, lb = _half_angles(p)
    return np.array([[lb, 0.0, -kb], [0.0, 1.0, 0.0], [kb, 0.0, lb]])


def rotated_zeta_1d(k, p: WalkParams):
    """Planar components of the rotated axis: (kap_a sin k, zeta_y, 0)."""
    ka, la, kb, lb = _half_angles(p)
    zx = ka * np.sin(k)
    zy = la * kb + ka * lb * np.cos(k)
    return zx, zy


def _rotated_norm2(k, p: WalkParams):
    zx, zy = rotated_zeta_1d(k, p)
    return zx * zx + zy * zy


def rotated_eigenstate_lower(k: float, p: WalkParams) -> Spinor:
    """Lower eigenstate in the rotated frame, in the gauge whose doubled
    Berry connection equals the curvature function:

        |psi'_-> = (-|zeta'|, zeta'_x - i zeta'_y) / (sqrt(2) |zeta'|).
    """
    zx, zy = rotated_zeta_1d(float(k), p)
    zn = np.hypot(zx, zy)
    if zn < GAP_FLOOR:
        raise ZeroGap("gap closed at k = %.6f" % k)
    return Spinor(-1.0 / np.sqrt(2.0), (zx - 1j * zy) / (np.sqrt(2.0) * zn))


def _validate_gap(k, p: WalkParams):
    n2 = np.min(_rotated_norm2(k, p))
    if n2 < GAP_FLOOR ** 2:
        raise ZeroGap("gap closed on the requested momenta")


def curvature_1d(k, p: WalkParams):
    """Curvature function F(k) = (n x d_k n) . A; array-capable.

    Closed form:
        F = (-cos k sin(alpha) kap_b - 2 kap_a^2 lam_b)
            / (2 sin^2 k kap_a^2 + 2 (cos k kap_a lam_b + lam_a kap_b)^2).
    """
    _validate_gap(k, p)
    ka, la, kb, lb = _half_angles(p)
    num = -np.cos(k) * np.sin(p.alpha) * kb - 2.0 * ka ** 2 * lb
    den = (2.0 * np.sin(k) ** 2 * ka ** 2
           + 2.0 * (np.cos(k) * ka * lb + la * kb) ** 2)
    return num / den


def rotated_curvature_1d(k, p: WalkParams):
    """Curvature function as the doubled rotated-frame Berry connection.

    Algebraically identical to :func:`curvature_1d`; kept as the second route
    for cross-checks.
    """
    _validate_gap(k, p)
    ka, la, kb, lb = _half_angles(p)
    num = -ka ** 2 * lb - la * ka * kb * np.cos(k)
    den = (ka ** 2 * np.sin(k) ** 2 + la ** 2 * kb ** 2
           + 2.0 * ka * kb * la * lb * np.cos(k)
           + ka ** 2 * lb ** 2 * np.cos(k) ** 2)
    return num / den


def _curvature_raw_1d(k, alpha, beta):
    """Unvalidated curvature on broadcastable (k, alpha, beta) arrays."""
    ka, la = np.cos(alpha / 2.0), np.sin(alpha / 2.0)
    kb, lb = np.cos(beta / 2.0), np.sin(beta / 2.0)
    num = -ka ** 2 * lb - la * ka * kb * np.cos(k)
    den = (ka ** 2 * np.sin(k) ** 2 + la ** 2 * kb ** 2
           + 2.0 * ka * kb * la * lb * np.cos(k)
           + ka ** 2 * lb ** 2 * np.cos(k) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def peak_asymptotics_1d(p: WalkParams, k_c: float):
    """Closed-form peak height and squared width at a high-symmetry point.

    At k_c = 0 the relevant half-angle is lam_(a+b); at k_c = pi it is
    lam_(a-b).  Returns (F_peak, xi2) with

        F_peak(0)  = -kap_a / lam_(a+b),
        F_peak(pi) = +kap_a / lam_(a-b),
        xi2 = (kap_b^2 + kap_a^2 kap_b^2 - kap_a kap_b lam_a lam_b)
              / (2 lam_(a+-b)^2).

    Raises:
        AtCriticality: the corresponding gap channel is closed.
    """
    ka, la, kb, lb = _half_angles(p)
    at_zero = abs(_reduce_angle(k_c)) < 1e-9
    if not at_zero and abs(abs(_reduce_angle(k_c)) - np.pi) > 1e-9:
        raise ValueError("k_c must be 0 or pi")
    lam = np.sin((p.alpha + p.beta) / 2.0) if at_zero else np.sin((p.alpha - p.beta) / 2.0)
    if abs(lam) < FLAT_FLOOR:
        raise AtCriticality("peak channel at k_c=%s is critical" % ("0" if at_zero else "pi"))
    f_peak = -ka / lam if at_zero else ka / lam
    xi2 = 0.5 * (kb ** 2 + ka ** 2 * kb ** 2 - ka * kb * la * lb) / lam ** 2
    return float(f_peak), float(xi2)


def gap_distances(p: WalkParams):
    """Angle distances of (alpha, beta) to the two gap-closing families.

    Returns (|alpha+beta| mod 2 pi, |alpha-beta| mod 2 pi), wrapped to
    [0, pi]; the k=0 channel closes when the first vanishes, the k=pi
    channel when the second does.
    """
    return (abs(_reduce_angle(p.alpha + p.beta)),
            abs(_reduce_angle(p.alpha - p.beta)))
