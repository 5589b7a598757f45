import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twobosonwalk import fock
from twobosonwalk.errors import PhysicalityError
from twobosonwalk.states import (
    BeamParams,
    CoherenceFamilyParams,
    TwoBosonDensityMatrix,
    coherence_eta,
    density_from_beams,
    density_from_family,
    density_from_pure,
    pure_state,
    random_density_matrix,
    require_valid,
    validate,
)

L = 4


def test_pure_basis_vector():
    psi = pure_state([(1, 1, 1.0)], L)
    want = np.zeros(fock.dimension(L))
    want[fock.index_of(1, 1, L)] = 1
    np.testing.assert_array_equal(psi.amplitudes, want)


def test_pure_two_beam_state():
    th, ph = 1.1, 0.4
    psi = pure_state([(1, 1, math.cos(th / 2)), (0, 0, math.sin(th / 2) * np.exp(1j * ph))], L)
    assert psi.amplitudes[fock.index_of(1, 1, L)] == pytest.approx(math.cos(th / 2))
    assert psi.amplitudes[fock.index_of(0, 0, L)] == pytest.approx(math.sin(th / 2) * np.exp(1j * ph))


def test_pure_merges_then_normalises():
    psi = pure_state([(0, 1, 3.0), (1, 0, 4j)], L)
    assert psi.amplitudes[fock.index_of(0, 1, L)] == pytest.approx((3 + 4j) / 5)
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-15)


def test_pure_errors():
    with pytest.raises(PhysicalityError):
        pure_state([(0, 1, 0.0)], L)
    with pytest.raises(IndexError):
        pure_state([(0, 9, 1.0)], L)


def test_density_from_pure(rng):
    basis = density_from_pure(pure_state([(2, 3, 1.0)], L)).matrix
    assert basis[fock.index_of(2, 3, L), fock.index_of(2, 3, L)] == 1
    assert np.count_nonzero(basis) == 1
    amps = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    rho = density_from_pure(pure_state([(q, r, a) for (q, r), a in zip(fock.pair_table(L), amps)], L))
    assert coherence_eta(rho) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == 1


def test_beams_limits():
    rho = density_from_beams(BeamParams(0.0, 1.2, 0.5), L)
    assert coherence_eta(rho) == pytest.approx(1.0, abs=1e-12)
    rho = density_from_beams(BeamParams(math.pi / 2, 1.2, 0.5), L)
    i11 = fock.index_of(1, 1, L)
    want = np.zeros_like(rho.matrix)
    want[i11, i11] = 1
    np.testing.assert_allclose(rho.matrix, want, atol=1e-15)


def test_beams_hand_worked_case():
    # cos^2 = sin^2 = 1/2, cos(pi/4) sin(pi/4) = 1/2
    rho = density_from_beams(BeamParams(math.pi / 4, math.pi / 2, 0.0), L)
    assert rho.element(0, 0, 0, 0) == pytest.approx(0.25, abs=1e-15)
    assert rho.element(1, 1, 1, 1) == pytest.approx(0.75, abs=1e-15)
    assert rho.element(0, 0, 1, 1) == pytest.approx(0.25, abs=1e-15)
    # Tr rho^2 = 1/16 + 9/16 + 2/16 = 3/4
    assert coherence_eta(rho) == pytest.approx(0.5, abs=1e-14)


@settings(max_examples=80, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4))
def test_beams_are_valid_and_inside_family_bound(delta, theta, phi):
    rho = density_from_beams(BeamParams(delta, theta, phi), L)
    assert validate(rho).ok
    alpha = rho.element(0, 0, 0, 0).real
    eta = coherence_eta(rho)
    assert eta >= 1 - 4 * alpha * (1 - alpha) - 1e-12
    assert eta <= 1 + 1e-12
    # the four entries of the beam state coincide with a family member
    fam = density_from_family(CoherenceFamilyParams(alpha, min(eta, 1.0), phi), L)
    if abs(rho.element(0, 0, 1, 1)) > 1e-12:
        ph = np.angle(rho.element(0, 0, 1, 1))
        fam = density_from_family(CoherenceFamilyParams(alpha, min(eta, 1.0), ph), L)
    np.testing.assert_allclose(fam.matrix, rho.matrix, rtol=0, atol=1e-7)


def test_family_fig1_cases():
    rho = density_from_family(CoherenceFamilyParams(1.0, 1.0, 0.0), L)
    want = np.zeros_like(rho.matrix)
    want[0, 0] = 1
    np.testing.assert_array_equal(rho.matrix, want)

    rho = density_from_family(CoherenceFamilyParams(0.5, 0.0, 0.0), L)
    i0, i1 = fock.index_of(0, 0, L), fock.index_of(1, 1, L)
    assert rho.matrix[i0, i0] == rho.matrix[i1, i1] == 0.5
    assert rho.matrix[i0, i1] == 0 and np.count_nonzero(rho.matrix) == 2

    rho = density_from_family(CoherenceFamilyParams(0.5, 0.5, 0.0), L)
    assert abs(rho.matrix[i0, i1]) == pytest.approx(math.sqrt(0.5) / 2, abs=1e-15)
    assert abs(rho.matrix[i0, i1]) == pytest.approx(0.35355, abs=5e-6)


def family_params():
    """Uniform over alpha, eta spanning its admissible range [1 - 4a(1-a), 1]."""

    def build(t):
        alpha, s, phi = t
        lo = 1 - 4 * alpha * (1 - alpha)
        return CoherenceFamilyParams(alpha, lo + s * (1 - lo), phi)

    return st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(-7, 7)).map(build)


@settings(max_examples=150, deadline=None)
@given(family_params())
def test_family_round_trip_and_spectrum(p):
    rho = density_from_family(p, L)
    assert coherence_eta(rho) == pytest.approx(p.eta, abs=1e-12)
    assert validate(rho).ok
    i0, i1 = fock.index_of(0, 0, L), fock.index_of(1, 1, L)
    block = rho.matrix[np.ix_([i0, i1], [i0, i1])]
    root = math.sqrt((2 * p.alpha - 1) ** 2 + p.gamma**2)
    want = sorted([(1 - root) / 2, (1 + root) / 2])
    np.testing.assert_allclose(np.linalg.eigvalsh(block), want, rtol=0, atol=1e-12)
    assert -1e-12 <= want[0] and want[1] <= 1 + 1e-12
    assert -1e-12 <= coherence_eta(rho) <= 1 + 1e-12


def test_family_physicality_gate():
    with pytest.raises(PhysicalityError):
        density_from_family(CoherenceFamilyParams(0.1, 0.1, 0.0), L)
    with pytest.raises(PhysicalityError):
        density_from_family(CoherenceFamilyParams(0.5, 1.2, 0.0), L)
    with pytest.raises(PhysicalityError):
        density_from_family(CoherenceFamilyParams(1.5, 1.0, 0.0), L)
    density_from_family(CoherenceFamilyParams(0.1, 0.64, 0.0), L)


def test_eta_simple_cases():
    rho = density_from_family(CoherenceFamilyParams(0.5, 0.0), L)
    assert coherence_eta(rho) == pytest.approx(0.0, abs=1e-15)


def test_validate_rejects_non_psd():
    d = fock.dimension(L)
    m = np.zeros((d, d), dtype=complex)
    i0, i1 = fock.index_of(0, 0, L), fock.index_of(1, 1, L)
    m[i0, i0] = m[i1, i1] = 0.5
    m[i0, i1] = m[i1, i0] = 0.6
    rep = validate(TwoBosonDensityMatrix(m, L))
    assert not rep.ok and not rep.positive
    assert rep.min_eigenvalue == pytest.approx(-0.1, abs=1e-12)
    with pytest.raises(PhysicalityError, match="positive"):
        require_valid(TwoBosonDensityMatrix(m, L))


def test_validate_rejects_non_hermitian():
    rho = density_from_family(CoherenceFamilyParams(0.5, 0.5), L).matrix.copy()
    rho[0, 1] += 1e-6
    rep = validate(rho)
    assert not rep.ok and not rep.hermitian and rep.hermiticity_error == pytest.approx(1e-6)
    assert any("Hermitian" in f for f in rep.failures())


def test_validate_rejects_bad_trace():
    rho = density_from_family(CoherenceFamilyParams(0.5, 0.5), L).matrix * 1.01
    rep = validate(rho)
    assert not rep.unit_trace and not rep.ok


def test_random_density_matrices_are_valid(rng):
    for L_ in (2, 4, 7):
        for rank in (None, 1, 3):
            rho = random_density_matrix(L_, rng, rank)
            rep = validate(rho)
            assert rep.ok, rep.failures()
            assert 2 / fock.dimension(L_) - 1 - 1e-12 <= coherence_eta(rho) <= 1 + 1e-12


def test_shape_mismatch():
    with pytest.raises(ValueError):
        TwoBosonDensityMatrix(np.eye(5), 3)
