"""Brute-force reference for two bosons on a lattice.

Everything here works on occupation-number tuples ``(n_0, ..., n_{L-1})``
and applies ladder operators one at a time. It deliberately shares no code
with the propagator-based fast paths, so agreement between the two is a
meaningful check. Cost grows like ``D^3`` with ``D = L(L+1)/2``; keep
``L`` below about 10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Boundary, Lattice, LatticeSpec, build_lattice

__all__ = [
    "occupation_basis",
    "build_h2",
    "evolve_oracle",
    "gamma_oracle",
    "reduced_density_oracle",
    "VerificationReport",
    "run_verification",
]

Occupation = tuple[int, ...]


def occupation_basis(num_sites: int) -> list[Occupation]:
    """Two-boson occupation vectors in canonical pair order (q <= r, row by row)."""
    basis = []
    for q in range(num_sites):
        for r in range(q, num_sites):
            n = [0] * num_sites
            n[q] += 1
            n[r] += 1
            basis.append(tuple(n))
    return basis


def _hop(n: Occupation, to: int, frm: int) -> tuple[float, Occupation | None]:
    """Apply ``a_to^+ a_frm`` to the normalised occupation state ``|n>``."""
    if n[frm] == 0:
        return 0.0, None
    m = list(n)
    amp = math.sqrt(m[frm])
    m[frm] -= 1
    amp *= math.sqrt(m[to] + 1)
    m[to] += 1
    return amp, tuple(m)


def build_h2(lattice: Lattice) -> np.ndarray:
    """Two-particle Hamiltonian on the canonical basis, by explicit operator action."""
    basis = occupation_basis(lattice.num_sites)
    index = {n: i for i, n in enumerate(basis)}
    d = len(basis)
    h = np.zeros((d, d))
    for j, n in enumerate(basis):
        for (q, r), c in zip(lattice.bond_sites(), lattice.bonds):
            for to, frm in ((q, r), (r, q)):
                amp, out = _hop(n, to, frm)
                if out is not None:
                    h[index[out], j] -= c * amp
        for s, beta in enumerate(lattice.onsite):
            h[j, j] += beta * n[s]
    return h


def evolve_oracle(rho: np.ndarray, h2: np.ndarray, t: float) -> np.ndarray:
    """Schrodinger-picture ``exp(-i H t) rho exp(+i H t)``."""
    if t == 0:
        return np.array(rho, dtype=complex)
    evals, evecs = np.linalg.eigh(h2)
    w = evecs @ np.diag(np.exp(-1j * evals * t)) @ evecs.conj().T
    return w @ rho @ w.conj().T


def gamma_oracle(rho_t: np.ndarray, num_sites: int) -> np.ndarray:
    """``Tr(rho a_k^+ a_l^+ a_l a_k)``; the operator is ``n_k n_l - delta_kl n_k``."""
    basis = occupation_basis(num_sites)
    g = np.zeros((num_sites, num_sites), dtype=complex)
    for i, n in enumerate(basis):
        for k in range(num_sites):
            for l in range(num_sites):
                value = n[k] * n[l] - (n[k] if k == l else 0)
                if value:
                    g[k, l] += value * rho_t[i, i]
    return g


def reduced_density_oracle(rho: np.ndarray, num_sites: int, cut: int):
    """Partial trace over sites ``>= cut``.

    Returns ``(matrix, keys)``; ``keys[a]`` is the occupation tuple of the
    left-part state labelling row/column ``a``.
    """
    basis = occupation_basis(num_sites)
    left_keys: dict[Occupation, int] = {}
    split = []
    for n in basis:
        a, b = n[:cut], n[cut:]
        left_keys.setdefault(a, len(left_keys))
        split.append((a, b))
    out = np.zeros((len(left_keys), len(left_keys)), dtype=complex)
    for i, (a, b) in enumerate(split):
        for j, (a2, b2) in enumerate(split):
            if b == b2:
                out[left_keys[a], left_keys[a2]] += rho[i, j]
    keys = sorted(left_keys, key=left_keys.get)
    return out, keys


@dataclass(frozen=True)
class VerificationReport:
    num_sites: int
    samples: int
    seed: int
    max_gamma_deviation: float
    max_sum_rule_deviation: float
    max_imaginary_residue: float

    @property
    def passed(self) -> bool:
        return self.max_gamma_deviation <= 1e-10 and self.max_sum_rule_deviation <= 1e-10


def random_lattice_spec(num_sites: int, rng: np.random.Generator) -> LatticeSpec:
    """Random ring or chain, uniform or per-bond couplings, varied on-site rule."""
    boundary = Boundary.PERIODIC if rng.random() < 0.5 else Boundary.OPEN
    nbonds = num_sites if boundary is Boundary.PERIODIC else num_sites - 1
    couplings = float(rng.uniform(0.5, 1.5)) if rng.random() < 0.5 else list(rng.uniform(0.2, 2.0, nbonds))
    choice = rng.integers(3)
    if choice == 0:
        onsite = "decision_tree"
    elif choice == 1:
        onsite = float(rng.uniform(-1, 1))
    else:
        onsite = list(rng.uniform(-1, 1, num_sites))
    return LatticeSpec(num_sites, boundary, couplings, onsite)


def run_verification(num_sites: int = 6, samples: int = 100, seed: int = 20160101) -> VerificationReport:
    """Compare the fast correlation path against the brute-force oracle on random inputs."""
    from .correlation import gamma_general
    from .lattice import single_particle_matrix
    from .propagator import propagate_spectral
    from .states import random_density_matrix

    rng = np.random.default_rng(seed)
    worst = worst_sum = worst_imag = 0.0
    for _ in range(samples):
        lattice = build_lattice(random_lattice_spec(num_sites, rng))
        rho = random_density_matrix(num_sites, rng, rank=int(rng.integers(1, 4)))
        t = float(rng.uniform(0, 3))
        fast = gamma_general(rho, propagate_spectral(single_particle_matrix(lattice), t)).gamma
        ref = gamma_oracle(evolve_oracle(rho.matrix, build_h2(lattice), t), num_sites)
        worst = max(worst, float(np.abs(fast - ref.real).max()))
        worst_imag = max(worst_imag, float(np.abs(ref.imag).max()))
        worst_sum = max(worst_sum, abs(fast.sum() - 2.0), abs(ref.real.sum() - 2.0))
    return VerificationReport(num_sites, samples, seed, worst, worst_sum, worst_imag)
