import math

import numpy as np
import pytest
from scipy.special import jv

from twobosonwalk import fock
from twobosonwalk.correlation import CorrelationMatrix, gamma_bessel
from twobosonwalk.lattice import LatticeSpec, build_lattice, single_particle_matrix
from twobosonwalk.observables import (
    avg_distance,
    distance_series,
    entropy_series,
    evolve_density,
    normalized_distance,
    reduced_density,
    reduced_density_left,
    subsystem_partition,
    _local_basis,
)
from twobosonwalk.oracle import (
    build_h2,
    evolve_oracle,
    random_lattice_spec,
    reduced_density_oracle,
)
from twobosonwalk.propagator import propagate_spectral
from twobosonwalk.states import (
    CoherenceFamilyParams,
    density_from_family,
    density_from_pure,
    pure_state,
    random_density_matrix,
)

L_RING = 61
ORIGIN = 30


def d_at(alpha, eta, phi, tau=8.0):
    return avg_distance(gamma_bessel(CoherenceFamilyParams(alpha, eta, phi), 1.0, tau / 2, L_RING, ORIGIN))


def coherent_weight(tau):
    """B(tau) = sum_{q>r} (q - r) 2 J_q J_r J_{r-1} J_{q-1}, evaluated with scipy."""
    n = np.arange(-29, 31)
    jq, jq1 = jv(n, tau), jv(n - 1, tau)
    sep = n[:, None] - n[None, :]
    return float(np.sum(np.where(sep > 0, sep, 0) * 2 * np.outer(jq, jq) * np.outer(jq1, jq1)))


def test_distance_zero_at_time_zero():
    assert d_at(0.5, 0.7, 0.3, tau=0.0) == 0.0


def test_distance_explicit_formula():
    # raw weighted sum over q > r, scipy Bessel values
    p = CoherenceFamilyParams(0.3, 0.9, 0.7)
    tau = 5.0
    n = np.arange(-29, 31)
    jq, jq1 = jv(n, tau), jv(n - 1, tau)
    a, b = np.outer(jq, jq), np.outer(jq1, jq1)
    g = -2 * p.gamma * math.cos(p.phi) * a * b + 2 * p.alpha * a**2 + 2 * (1 - p.alpha) * b**2
    sep = n[:, None] - n[None, :]
    want = float(np.sum(np.where(sep > 0, sep, 0) * g))
    assert d_at(0.3, 0.9, 0.7, tau) == pytest.approx(want, abs=1e-12)


def test_distance_affine_in_coherent_amplitude():
    # at alpha = 1/2, gamma = sqrt(eta)
    xs, ys = [], []
    for eta in (0.0, 0.36, 0.81):
        for phi in (0.0, 2.0):
            xs.append(math.sqrt(eta) * math.cos(phi))
            ys.append(d_at(0.5, eta, phi))
    coeffs = np.polyfit(xs, ys, 1)
    assert np.abs(np.polyval(coeffs, xs) - ys).max() <= 1e-10
    assert coeffs[0] == pytest.approx(-coherent_weight(8.0), abs=1e-10)


def test_distance_grows_with_coherence_at_zero_phase():
    assert d_at(0.5, 1.0, 0.0) > d_at(0.5, 0.5, 0.0) > d_at(0.5, 0.0, 0.0)


def test_distance_slope_sign_matches_coherent_weight():
    for tau in (2.0, 5.0, 8.0):
        b = coherent_weight(tau)
        for phi in (0.0, 1.0, 2.0, math.pi):
            etas = np.linspace(0, 1, 6)
            ds = np.array([d_at(0.5, e, phi, tau) for e in etas])
            steps = np.diff(ds)
            expect = -math.cos(phi) * b
            if abs(expect) > 1e-9:
                assert np.all(np.sign(steps) == np.sign(expect))


def test_distance_depends_on_phase_through_cosine():
    for eta in (0.3, 1.0):
        base = d_at(0.5, eta, 0.9)
        assert d_at(0.5, eta, -0.9) == pytest.approx(base, abs=1e-12)
        assert d_at(0.5, eta, 2 * math.pi - 0.9) == pytest.approx(base, abs=1e-12)
        phis = [0.0, 0.5, 1.2, 2.0, 3.0]
        ds = [d_at(0.5, eta, p) for p in phis]
        assert all(a > b for a, b in zip(ds, ds[1:]))
    flat = [d_at(0.5, 0.0, p) for p in (0.0, 1.0, math.pi)]
    assert max(flat) - min(flat) <= 1e-12


def test_distance_series():
    times = np.linspace(0, 4, 9)
    zero = distance_series(CoherenceFamilyParams(0.5, 1.0, 0.0), 1.0, [0.0, 0.0], L_RING, ORIGIN)
    np.testing.assert_array_equal(zero.values, [0.0, 0.0])
    a = distance_series(CoherenceFamilyParams(0.5, 0.5, math.pi / 2), 1.0, times, L_RING, ORIGIN)
    b = distance_series(CoherenceFamilyParams(0.5, 1.0, math.pi / 2), 1.0, times, L_RING, ORIGIN)
    np.testing.assert_allclose(a.values, b.values, rtol=0, atol=1e-12)
    plus = distance_series(CoherenceFamilyParams(0.5, 1.0, 0.0), 1.0, times[1:], L_RING, ORIGIN)
    minus = distance_series(CoherenceFamilyParams(0.5, 1.0, math.pi), 1.0, times[1:], L_RING, ORIGIN)
    assert np.all(plus.values > minus.values)
    assert np.all(plus.values >= 0) and np.all(minus.values >= 0)


def test_distance_is_linear(rng):
    pos = np.arange(6)
    g1, g2 = rng.random((6, 6)), rng.random((6, 6))
    c = lambda g: CorrelationMatrix(g, 0.0, pos)
    assert avg_distance(c(g1 + g2)) == pytest.approx(avg_distance(c(g1)) + avg_distance(c(g2)), abs=1e-12)


def test_normalized_distance():
    g = np.zeros((4, 4))
    g[3, 1] = g[1, 3] = 0.5
    g[2, 2] = 1.0
    c = CorrelationMatrix(g, 0.0, np.arange(4))
    assert avg_distance(c) == pytest.approx(1.0)
    assert normalized_distance(c) == pytest.approx(2.0)


def test_product_state_has_zero_entropy():
    L = 8
    rho = density_from_pure(pure_state([(2, 2, 1.0)], L))
    rep = reduced_density_left(rho, propagate_spectral(np.zeros((L, L)), 0.0), cut=4)
    assert abs(rep.entropy) <= 1e-12
    assert rep.spectrum.sum() == pytest.approx(1.0, abs=1e-12)


def test_bell_state_across_cut():
    L = 8
    rho = density_from_pure(pure_state([(1, 1, 1.0), (6, 6, 1.0)], L))
    rep = reduced_density_left(rho, propagate_spectral(np.zeros((L, L)), 0.0), cut=4)
    assert rep.entropy == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(rep.spectrum[:2], [0.5, 0.5], atol=1e-12)


def test_left_right_symmetry_for_pure_states(rng):
    L = 7
    for _ in range(5):
        lat = build_lattice(random_lattice_spec(L, rng))
        rho = random_density_matrix(L, rng, rank=1)
        t = float(rng.uniform(0, 3))
        evolved = evolve_density(rho, propagate_spectral(single_particle_matrix(lat), t))
        for cut in (1, 3, 5):
            left = np.linalg.eigvalsh(reduced_density(evolved, cut, "left"))
            right = np.linalg.eigvalsh(reduced_density(evolved, cut, "right"))
            s = lambda lam: -sum(x * math.log2(x) for x in lam if x > 1e-14)
            assert s(left) == pytest.approx(s(right), abs=1e-10)


def test_initial_entropy_of_family_states():
    L = 10
    lat = build_lattice(LatticeSpec(L))
    for alpha in (0.2, 0.5, 0.7):
        eta_min = 1 - 4 * alpha * (1 - alpha)
        rho = density_from_family(CoherenceFamilyParams(alpha, eta_min, 0.0), L, origin=2)
        rep = entropy_series(rho, lat, [0.0], cut=5)[0]
        h = -alpha * math.log2(alpha) - (1 - alpha) * math.log2(1 - alpha)
        assert rep.entropy == pytest.approx(h, abs=1e-12)
        rho = density_from_family(CoherenceFamilyParams(alpha, 1.0, 0.0), L, origin=2)
        assert entropy_series(rho, lat, [0.0], cut=5)[0].entropy == pytest.approx(0.0, abs=1e-12)


def test_entropy_bound_and_trace(rng):
    L = 9
    lat = build_lattice(LatticeSpec(L, "open"))
    rho = random_density_matrix(L, rng, rank=4)
    for rep in entropy_series(rho, lat, np.linspace(0, 3, 7), cut=4):
        assert rep.left_dimension == 1 + 4 + 10
        assert 0 <= rep.entropy <= math.log2(rep.left_dimension) + 1e-12
        assert rep.spectrum.sum() == pytest.approx(1.0, abs=1e-10)
        assert rep.spectrum.min() >= -1e-10


def test_fig4_scenario_trend():
    L = 15
    lat = build_lattice(LatticeSpec(L, site_offset=-7))
    rho = density_from_family(CoherenceFamilyParams(0.5, 1.0, 0.0), L, origin=7)
    reps = entropy_series(rho, lat, np.linspace(0, 5, 21), cut=7)
    s = np.array([r.entropy for r in reps])
    assert abs(s[0]) <= 1e-10
    assert np.ptp(s) > 0.5


@pytest.mark.parametrize("L", [4, 5, 6, 7])
def test_reduced_density_matches_oracle(L, rng):
    for _ in range(3):
        lat = build_lattice(random_lattice_spec(L, rng))
        rho = random_density_matrix(L, rng, rank=2)
        t = float(rng.uniform(0, 3))
        cut = int(rng.integers(1, L))
        ours = reduced_density(evolve_density(rho, propagate_spectral(single_particle_matrix(lat), t)), cut)
        ref, keys = reduced_density_oracle(evolve_oracle(rho.matrix, build_h2(lat), t), L, cut)
        local = _local_basis(list(range(cut)))
        perm = []
        for occ in keys:
            sites = tuple(s for s, n in enumerate(occ) for _ in range(n))
            perm.append(local[sites])
        np.testing.assert_allclose(ours[np.ix_(perm, perm)], ref, rtol=0, atol=1e-10)
        assert np.trace(ours).real == pytest.approx(1.0, abs=1e-12)


def test_partition_dimensions():
    li, ri, dl, dr = subsystem_partition(7, 3)
    assert dl == 1 + 3 + 6 and dr == 1 + 4 + 10
    assert len(li) == fock.dimension(7)
    assert len(set(zip(li, ri))) == fock.dimension(7)
    with pytest.raises(ValueError):
        subsystem_partition(7, 0)
    with pytest.raises(ValueError):
        subsystem_partition(7, 7)
