import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import roots_legendre

from traid.harmonic import (
    EigenState,
    PolarPoint,
    StateError,
    allowed_lambdas,
    apply_hamiltonian_fd,
    energy,
    field_grid,
    jacobi_coords,
    normalization,
    sector_eigenvalues_numeric,
    spectrum,
    statistics_of,
    wall_conditions,
    wavefunction,
    wavefunction_array,
)
from traid.representations import AbelianRep, Statistics

BOSE, FERMI = AbelianRep.parse("++"), AbelianRep.parse("--")
MIX_A, MIX_B = AbelianRep.parse("+-"), AbelianRep.parse("-+")

# (nu, lambda, rep) used for the eigenfunction checks
STATES = [
    (0, Fraction(3), FERMI),
    (1, Fraction(3), BOSE),
    (0, Fraction(3, 2), MIX_A),
    (0, Fraction(9, 2), MIX_B),
]
WALLS = [j * math.pi / 3 for j in range(6)]


def state(nu, lam, rep):
    return EigenState(nu, Fraction(lam), rep)


# --- coordinates ----------------------------------------------------------------


def test_jacobi_examples():
    p = jacobi_coords(1, -1, 0)
    assert p.rho ** 2 == pytest.approx(2)
    assert p.phi == pytest.approx(math.pi / 2)
    assert jacobi_coords(2.5, 2.5, 2.5).rho == 0
    assert jacobi_coords(2.5, 2.5, 2.5).phi == 0


def test_jacobi_translation_invariance():
    rng = random.Random(0)
    for _ in range(200):
        x = [rng.uniform(-5, 5) for _ in range(3)]
        c = rng.uniform(-10, 10)
        a, b = jacobi_coords(*x), jacobi_coords(*(v + c for v in x))
        assert a.rho == pytest.approx(b.rho, abs=1e-9)
        assert math.cos(a.phi - b.phi) == pytest.approx(1, abs=1e-9)


def test_jacobi_walls():
    # x1 = x2 on phi = 0, pi; x2 = x3 and x1 = x3 on the other four rays
    assert jacobi_coords(1, 1, 0).phi == pytest.approx(0)
    assert jacobi_coords(0, 0, 1).phi == pytest.approx(math.pi)
    for x in [(1, 0, 0), (0, 1, 1), (0, 1, 0), (1, 0, 1)]:
        phi = jacobi_coords(*x).phi
        assert min(abs(phi - w) for w in WALLS) < 1e-12


def test_polar_point():
    assert PolarPoint(1.0, -math.pi / 2).phi == pytest.approx(3 * math.pi / 2)
    with pytest.raises(ValueError):
        PolarPoint(-1.0, 0.0)


# --- angular spectrum -------------------------------------------------------------


def test_allowed_lambda_examples():
    assert allowed_lambdas(FERMI, 3) == [3, 6, 9]
    assert allowed_lambdas(BOSE, 3) == [3, 6, 9]
    assert allowed_lambdas(MIX_A, 2) == [Fraction(3, 2), Fraction(9, 2)]
    assert allowed_lambdas(MIX_B, 1) == [Fraction(3, 2)]
    assert all(isinstance(x, Fraction) for x in allowed_lambdas(MIX_A, 4))


@pytest.mark.parametrize("rep", [BOSE, FERMI, MIX_A, MIX_B])
def test_allowed_lambdas_match_boundary_value_problem(rep):
    left, right = wall_conditions(rep)
    numeric = sector_eigenvalues_numeric(left, right, 6)
    exact = np.array([float(x) for x in allowed_lambdas(rep, 6)])
    np.testing.assert_allclose(numeric, exact, rtol=1e-5)


def test_wall_conditions():
    assert wall_conditions(BOSE) == ("neumann", "neumann")
    assert wall_conditions(FERMI) == ("dirichlet", "dirichlet")
    assert set(wall_conditions(MIX_A)) == {"neumann", "dirichlet"}
    with pytest.raises(StateError):
        wall_conditions(AbelianRep.parse("+++"))


def test_energy_examples():
    assert energy(0, 3) == 4
    assert energy(0, Fraction(3, 2)) == Fraction(5, 2)
    assert energy(2, 3) == 8
    for nu, lam in [(-1, 3), (0, 0), (0, -Fraction(3, 2)), (0.5, 3)]:
        with pytest.raises(StateError):
            energy(nu, lam)


def test_spectrum_examples():
    levels = spectrum(FERMI, 4)
    assert [lv.energy for lv in levels] == [4]
    assert (levels[0].states[0].nu, levels[0].states[0].lam) == (0, 3)
    levels = spectrum(MIX_A, 3)
    assert [lv.energy for lv in levels] == [Fraction(5, 2)]
    for rep in (BOSE, FERMI, MIX_A, MIX_B):
        assert spectrum(rep, 1) == []


def test_spectrum_ordering_and_exactness():
    lowest = {str(r): spectrum(r, 20)[0].energy for r in (BOSE, FERMI, MIX_A, MIX_B)}
    assert lowest["+-"] == lowest["-+"] == Fraction(5, 2)
    assert lowest["++"] == lowest["--"] == 4
    for rep in (BOSE, MIX_B):
        for lv in spectrum(rep, 20):
            for s in lv.states:
                assert lv.energy - (2 * s.nu + s.lam + 1) == 0


def test_spectrum_degeneracy():
    # E = 10 for bosons: (nu, lam) = (3, 3) and (0, 9); each is one state per rep
    lv = {lv.energy: lv for lv in spectrum(BOSE, 10)}[10]
    assert sorted((s.nu, s.lam) for s in lv.states) == [(0, 9), (3, 3)]
    assert lv.degeneracy == 2
    assert {lv.energy: lv for lv in spectrum(BOSE, 10, orientations=2)}[10].degeneracy == 4
    with pytest.raises(ValueError):
        spectrum(BOSE, 10, orientations=3)


def test_state_validation():
    with pytest.raises(StateError):
        EigenState(0, Fraction(3, 2), FERMI)
    with pytest.raises(StateError):
        EigenState(0, Fraction(3), MIX_A)
    with pytest.raises(StateError):
        EigenState(0, Fraction(3), AbelianRep.parse("+"))
    assert state(0, 3, FERMI).energy == 4
    assert statistics_of(MIX_B) is Statistics.MIXED


# --- wavefunctions ----------------------------------------------------------------


@pytest.mark.parametrize("nu, lam, rep", STATES)
def test_vanishes_at_origin(nu, lam, rep):
    assert wavefunction(state(nu, lam, rep), PolarPoint(0.0, 1.0)) == 0


def test_fermionic_nodal_walls():
    s = state(0, 3, FERMI)
    rho = np.linspace(0.05, 5, 200)
    for w in WALLS:
        assert np.max(np.abs(wavefunction_array(s, rho, np.full_like(rho, w)))) < 1e-8


@pytest.mark.parametrize("nu, lam, rep", STATES + [(2, Fraction(6), BOSE), (1, Fraction(15, 2), MIX_A)])
def test_wall_residuals(nu, lam, rep):
    s = state(nu, lam, rep)
    rho = np.linspace(0.05, 5, 100)
    h = 1e-5
    for j, w in enumerate(WALLS):
        gen = 2 if j % 2 == 0 else 1
        phi = np.full_like(rho, w)
        if rep.signs[gen - 1] == -1:
            assert np.max(np.abs(wavefunction_array(s, rho, phi))) < 1e-8
        else:
            # derivative taken on the double cover, so it never straddles the cut
            d = (wavefunction_array(s, rho, phi + h) - wavefunction_array(s, rho, phi - h)) / (2 * h)
            assert np.max(np.abs(d)) < 1e-6


def test_mixed_state_sheets():
    s = state(0, Fraction(3, 2), MIX_A)
    rng = random.Random(1)
    for _ in range(50):
        p = PolarPoint(rng.uniform(0.2, 3), rng.uniform(0, 2 * math.pi))
        a, b = wavefunction(s, p), wavefunction(s, p, sheet=1)
        assert abs(a) == pytest.approx(abs(b), abs=1e-14)
        assert a == pytest.approx(-b, abs=1e-14)


def test_mixed_sign_flip_across_cut():
    s = state(0, Fraction(3, 2), MIX_B)
    eps = 1e-6
    above = wavefunction(s, PolarPoint(1.0, eps))
    below = wavefunction(s, PolarPoint(1.0, -eps))  # principal branch: phi = 2 pi - eps
    assert abs(above) > 0.1
    assert below == pytest.approx(-above, rel=1e-5)


def test_integer_states_are_single_valued():
    s = state(1, 3, BOSE)
    assert wavefunction(s, PolarPoint(1.0, 1e-9)) == pytest.approx(wavefunction(s, PolarPoint(1.0, -1e-9)))


@pytest.mark.parametrize("nu, lam, rep", STATES + [(3, Fraction(15, 2), MIX_A)])
def test_normalization_quadrature(nu, lam, rep):
    s = state(nu, lam, rep)
    x, wx = roots_legendre(200)
    rho, wr = 8 * (x + 1), 8 * wx
    y, wy = roots_legendre(240)
    phi, wp = math.pi * (y + 1), math.pi * wy
    R, P = np.meshgrid(rho, phi, indexing="ij")
    dens = np.abs(wavefunction_array(s, R, P)) ** 2 * R
    assert wr @ dens @ wp == pytest.approx(1, abs=1e-6)
    assert normalization(nu, lam) > 0


@pytest.mark.parametrize("nu, lam, rep", STATES)
def test_eigenfunction_finite_difference(nu, lam, rep):
    s = state(nu, lam, rep)
    rng = np.random.default_rng(2)
    rho = rng.uniform(0.3, 4.0, 4000)
    phi = rng.uniform(0.001, 2 * math.pi - 0.001, 4000)
    psi = wavefunction_array(s, rho, phi)
    keep = np.abs(psi) > 1e-3 * np.max(np.abs(psi))
    rho, phi, psi = rho[keep][:100], phi[keep][:100], psi[keep][:100]
    assert len(rho) == 100
    h_psi = apply_hamiltonian_fd(s, rho, phi)
    rel = np.abs(h_psi - float(s.energy) * psi) / np.abs(float(s.energy) * psi)
    assert np.max(rel) < 1e-4


# --- grids ------------------------------------------------------------------------


def test_field_grid_shape_and_determinism():
    s = state(0, Fraction(3, 2), MIX_A)
    g = field_grid(s, 4.0, 33)
    assert g.shape == (33, 33)
    assert np.array_equal(g, field_grid(s, 4.0, 33))
    with pytest.raises(ValueError):
        field_grid(s, 4.0, 8)


def test_field_grid_orientation():
    # rows run in y, columns in x
    s = state(0, 3, FERMI)
    g = field_grid(s, 3.0, 61)
    axis = np.linspace(-3, 3, 61)
    i, j = 45, 40
    expected = wavefunction(s, PolarPoint(math.hypot(axis[j], axis[i]), math.atan2(axis[i], axis[j]))).real
    assert g[i, j] == pytest.approx(expected)


@pytest.mark.parametrize("nu, lam, rep", STATES + [(0, Fraction(6), BOSE)])
def test_field_grid_point_symmetry(nu, lam, rep):
    s = state(nu, lam, rep)
    g = field_grid(s, 4.0, 64)  # even: no sample on the axes or the cut
    flipped = g[::-1, ::-1]
    if lam.denominator == 1:
        parity = (-1) ** int(lam)
        np.testing.assert_allclose(flipped, parity * g, atol=1e-12)
    else:
        # rotation by pi on the double cover, then back to the principal branch
        axis = np.linspace(-4, 4, 64)
        X, Y = np.meshgrid(axis, axis)
        R, P = np.hypot(X, Y), np.mod(np.arctan2(Y, X), 2 * math.pi)
        a = wavefunction_array(s, R, P + math.pi)
        np.testing.assert_allclose(flipped, np.where(P + math.pi >= 2 * math.pi, -a, a), atol=1e-12)


def test_fermionic_grid_zero_on_wall_rays():
    s = state(0, 3, FERMI)
    g = field_grid(s, 4.0, 81)  # centre row is y = 0: the walls phi = 0, pi
    assert np.max(np.abs(g[40])) < 1e-8
    hw = 4.0
    for w in WALLS:
        r = np.linspace(0.1, hw, 50)
        vals = wavefunction_array(s, r, np.full_like(r, w))
        assert np.max(np.abs(vals)) < 1e-8


def far_field_max(s, hw=9.0, n=401):
    axis = np.linspace(-hw, hw, n)
    X, Y = np.meshgrid(axis, axis)
    g = field_grid(s, hw, n)
    return np.max(np.abs(g[np.hypot(X, Y) > 6]))


def test_far_field_ground_mixed():
    assert far_field_max(state(0, Fraction(3, 2), MIX_A)) < 1e-6


@pytest.mark.parametrize("lam, rep", [(3, FERMI), (3, BOSE), (Fraction(9, 2), MIX_B), (6, BOSE)])
def test_far_field_gaussian_bound(lam, rep):
    # beyond rho = sqrt(lambda) the envelope C rho^lambda e^{-rho^2/2} decreases
    lam = Fraction(lam)
    bound = normalization(0, lam) * 6.0 ** float(lam) * math.exp(-18.0)
    assert far_field_max(state(0, lam, rep)) <= bound * (1 + 1e-12)
