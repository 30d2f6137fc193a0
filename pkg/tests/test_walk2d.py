import numpy as np
import pytest

from topocrit import (
    AtCriticality, Momentum2, WalkParams, ZeroGap,
    curvature_2d, effective_hamiltonian, energy_2d, peak_asymptotics_2d,
    unitary_2d, zeta_2d,
)
from topocrit.geometry import berry_curvature_fd
from topocrit.walk1d import reconstruct_unitary
from topocrit.walk2d import (axis_slice_curvature, diagonal_slice_curvature,
                             min_gap_2d, rho_2d, zeta_components_2d)

RNG = np.random.default_rng(11)


def lower_state(kx, ky, p, south):
    """Lower-band spinor of the axis field in a fixed gauge."""
    z = zeta_2d(Momentum2(kx, ky), p).as_array()
    n = z / np.linalg.norm(z)
    if south:
        v = np.array([n[2] - 1.0, n[0] + 1j * n[1]])
    else:
        v = np.array([-(n[0] - 1j * n[1]), 1.0 + n[2]])
    return v / np.linalg.norm(v)


# --- protocol unitary ---

def test_unitary_pure_shift_limit():
    sz = np.diag([1.0, -1.0])
    for _ in range(10):
        kx, ky = RNG.uniform(-np.pi, np.pi, 2)
        u = unitary_2d(Momentum2(kx, ky), WalkParams(0.0, 0.0)).matrix
        expect = np.diag(np.exp(1j * np.diag(2 * (kx + ky) * sz)))
        np.testing.assert_allclose(u, expect, atol=1e-13)


def test_unitary_trace_identity():
    for _ in range(60):
        kx, ky, a, b = RNG.uniform(-2 * np.pi, 2 * np.pi, 4)
        u = unitary_2d(Momentum2(kx, ky), WalkParams(a, b)).matrix
        assert abs((np.trace(u) / 2).real - rho_2d(kx, ky, WalkParams(a, b))) < 1e-12


def test_unitarity_and_periodicity():
    for _ in range(30):
        kx, ky, a, b = RNG.uniform(-5, 5, 4)
        p = WalkParams(a, b)
        u = unitary_2d(Momentum2(kx, ky), p).matrix
        assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12
        u2 = unitary_2d(Momentum2(kx + 2 * np.pi, ky), p).matrix
        u3 = unitary_2d(Momentum2(kx, ky + 2 * np.pi), p).matrix
        assert np.abs(u - u2).max() < 1e-12
        assert np.abs(u - u3).max() < 1e-12


def test_effective_hamiltonian_round_trip():
    for _ in range(30):
        kx, ky, a, b = RNG.uniform(-np.pi, np.pi, 4)
        p = WalkParams(a, b)
        u = unitary_2d(Momentum2(kx, ky), p)
        z = zeta_2d(Momentum2(kx, ky), p)
        if z.norm() < 1e-3:
            continue
        s = effective_hamiltonian(u)
        np.testing.assert_allclose(reconstruct_unitary(s).matrix, u.matrix,
                                   atol=1e-10)
        np.testing.assert_allclose(z.as_array() / z.norm(),
                                   s.axis.as_array(), atol=1e-8)


# --- bands and axis ---

def test_energy_gap_closes_on_slice():
    e = energy_2d(Momentum2(np.pi / 2, -np.pi / 2), WalkParams(0.0, np.pi / 2))
    assert e < 1e-12


def test_energy_trivial_point():
    assert energy_2d(Momentum2(0.0, 0.0), WalkParams(0.0, 0.0)) < 1e-12


def test_zeta_norm_matches_rho():
    for _ in range(50):
        kx, ky, a, b = RNG.uniform(-2 * np.pi, 2 * np.pi, 4)
        p = WalkParams(a, b)
        zx, zy, zz = zeta_components_2d(kx, ky, p)
        r = rho_2d(kx, ky, p)
        assert abs(zx ** 2 + zy ** 2 + zz ** 2 - (1 - r ** 2)) < 1e-10


def test_zeta_special_limits():
    for _ in range(10):
        kx, ky = RNG.uniform(-np.pi, np.pi, 2)
        z = zeta_2d(Momentum2(kx, ky), WalkParams(0.0, 0.0))
        np.testing.assert_allclose(
            z.as_array(), [0.0, 0.0, -np.sin(2 * (kx + ky))], atol=1e-14)
        z = zeta_2d(Momentum2(0.0, ky), WalkParams(0.7, 1.2))
        assert abs(z.x) < 1e-14


# --- curvature function ---

def test_curvature_matches_doubled_berry_curvature():
    # stroboscopic lower-band curvature oracle, gauge fixed per stencil
    p = WalkParams(np.pi / 3, np.pi / 2)
    k = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    for kx in k:
        for ky in k:
            z = zeta_2d(Momentum2(kx, ky), p)
            if z.norm() < 1e-3:
                continue
            south = (z.z / z.norm()) < 0.5
            state = lambda x, y: lower_state(x, y, p, south)
            om = berry_curvature_fd(state, float(kx), float(ky))
            f = curvature_2d(Momentum2(kx, ky), p)
            assert abs(f - 2 * om) < 1e-5


def test_curvature_sign_flip_across_critical_alpha():
    eps = 1e-3
    q = Momentum2(np.pi / 2, -np.pi / 2)
    r = (curvature_2d(q, WalkParams(-eps, np.pi / 2))
         / curvature_2d(q, WalkParams(+eps, np.pi / 2)))
    assert abs(r + 1.0) < 0.01


def test_curvature_even_along_slice():
    p = WalkParams(0.4, np.pi / 2)
    for d in (0.05, 0.2, 0.6):
        fp = diagonal_slice_curvature(np.array([+d]), p)[0]
        fm = diagonal_slice_curvature(np.array([-d]), p)[0]
        assert abs(fp - fm) < 1e-10


def test_curvature_raises_on_closed_gap():
    with pytest.raises(ZeroGap):
        curvature_2d(Momentum2(np.pi / 2, -np.pi / 2), WalkParams(0.0, np.pi / 2))


# --- peak asymptotics ---

def test_peak_value_example():
    fp, _ = peak_asymptotics_2d(WalkParams(0.1, np.pi / 2))
    assert abs(fp + 838.6336612) < 1e-4


def test_peak_matches_curvature_exactly():
    q = Momentum2(np.pi / 2, -np.pi / 2)
    for a in (-2.5, -0.3, -0.1, 0.1, 0.3, 1.0, 2.9):
        for b in (0.4, np.pi / 2, 2.0):
            fp, _ = peak_asymptotics_2d(WalkParams(a, b))
            fc = curvature_2d(q, WalkParams(a, b))
            assert abs(fp - fc) < 1e-10 * max(1.0, abs(fc))


def test_peak_scaling_exponents():
    eps = np.logspace(-3, -1, 12)
    fp = [abs(peak_asymptotics_2d(WalkParams(e, np.pi / 2))[0]) for e in eps]
    xi = [np.sqrt(abs(peak_asymptotics_2d(WalkParams(e, np.pi / 2))[1]))
          for e in eps]
    g = -np.polyfit(np.log(eps), np.log(fp), 1)[0]
    n = -np.polyfit(np.log(eps), np.log(xi), 1)[0]
    assert abs(g - 2.0) < 0.05
    assert abs(n - 1.0) < 0.05


def test_peak_magnitude_continuous_across_alpha_pi():
    d = 1e-4
    fm, _ = peak_asymptotics_2d(WalkParams(np.pi - d, np.pi / 2))
    fp, _ = peak_asymptotics_2d(WalkParams(np.pi + d, np.pi / 2))
    assert abs(abs(fm) - abs(fp)) < 1e-3 * max(abs(fm), 1e-12) + 1e-6


def test_peak_at_criticality_raises():
    with pytest.raises(AtCriticality):
        peak_asymptotics_2d(WalkParams(0.0, np.pi / 2))


def test_gap_closes_only_at_alpha_zero_on_slice():
    assert min_gap_2d(WalkParams(0.0, np.pi / 2)) < 1e-6
    assert min_gap_2d(WalkParams(0.5, np.pi / 2)) > 0.1


def test_momentum_reduced_range():
    q = Momentum2(-0.3, 7.0).reduced()
    assert 0.0 <= q.kx < 2 * np.pi
    assert 0.0 <= q.ky < 2 * np.pi
    p = WalkParams(0.7, 1.1)
    assert abs(energy_2d(q, p) - energy_2d(Momentum2(-0.3, 7.0), p)) < 1e-12


def test_axis_slice_profiles_share_peak_value():
    # same center value along either axis; the widths differ (the peak is an
    # anisotropic, tilted Lorentzian), with the y width the larger one
    p = WalkParams(0.3, np.pi / 2)
    fx0 = axis_slice_curvature(np.array([0.0]), p, axis="x")[0]
    fy0 = axis_slice_curvature(np.array([0.0]), p, axis="y")[0]
    assert abs(fx0 - fy0) < 1e-12
    d = 0.02
    wing_x = axis_slice_curvature(np.array([d]), p, axis="x")[0]
    wing_y = axis_slice_curvature(np.array([d]), p, axis="y")[0]
    assert abs(wing_y) < abs(wing_x) < abs(fx0)
