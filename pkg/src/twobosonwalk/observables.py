"""Quantities derived from the evolved state: pair separation and entanglement."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import fock
from .correlation import CorrelationMatrix, gamma_bessel
from .lattice import Lattice, single_particle_matrix
from .propagator import Propagator, spectral_factory
from .states import CoherenceFamilyParams, TwoBosonDensityMatrix

__all__ = [
    "DistanceSeries",
    "EntropyReport",
    "avg_distance",
    "normalized_distance",
    "distance_series",
    "two_particle_unitary",
    "evolve_density",
    "subsystem_partition",
    "reduced_density",
    "entropy_from_spectrum",
    "reduced_density_left",
    "entropy_series",
    "EIGEN_CUTOFF",
]

EIGEN_CUTOFF = 1e-14


@dataclass(frozen=True)
class DistanceSeries:
    times: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class EntropyReport:
    """Spectrum of the reduced state of sites ``< cut`` and its entropy in bits."""

    cut: int
    time: float
    spectrum: np.ndarray = field(repr=False)
    entropy: float
    left_dimension: int


def avg_distance(gamma: CorrelationMatrix) -> float:
    """``sum_{q > r} (q - r) Gamma[q, r]`` over site positions.

    This is the raw weighted sum: it is not divided by the total weight of
    the off-diagonal region. See :func:`normalized_distance` for that.
    """
    pos = np.asarray(gamma.positions, dtype=float)
    sep = pos[:, None] - pos[None, :]
    return float(np.sum(np.where(sep > 0, sep, 0.0) * gamma.gamma))


def normalized_distance(gamma: CorrelationMatrix) -> float:
    """Mean separation conditioned on the two particles sitting on different sites."""
    pos = np.asarray(gamma.positions, dtype=float)
    above = (pos[:, None] - pos[None, :]) > 0
    weight = float(np.sum(gamma.gamma[above]))
    return avg_distance(gamma) / weight if weight > 0 else 0.0


def distance_series(
    p: CoherenceFamilyParams,
    coupling: float,
    times: Iterable[float],
    num_sites: int,
    origin: int = 0,
) -> DistanceSeries:
    """Raw distance along a time grid on a uniform ring (Bessel closed form)."""
    times = np.asarray(list(times), dtype=float)
    values = np.array([avg_distance(gamma_bessel(p, coupling, t, num_sites, origin)) for t in times])
    return DistanceSeries(times, values)


def two_particle_unitary(u: np.ndarray) -> np.ndarray:
    """Matrix of ``U (x) U`` restricted to the symmetric two-boson sector.

    ``W[kl, qr] = N_kl N_qr (U[k,q] U[l,r] + U[l,q] U[k,r])`` on canonical pairs.
    """
    L = u.shape[0]
    pairs = fock.pair_table(L)
    norm = fock.normalization_vector(L)
    k, l = pairs[:, 0], pairs[:, 1]
    q, r = pairs[:, 0], pairs[:, 1]
    w = u[np.ix_(k, q)] * u[np.ix_(l, r)] + u[np.ix_(l, q)] * u[np.ix_(k, r)]
    return norm[:, None] * w * norm[None, :]


def evolve_density(rho: TwoBosonDensityMatrix, propagator: Propagator) -> TwoBosonDensityMatrix:
    w = two_particle_unitary(propagator.matrix)
    return TwoBosonDensityMatrix(w @ rho.matrix @ w.conj().T, rho.num_sites)


def _local_basis(sites: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Fock basis of a subsystem holding 0, 1 or 2 bosons, keyed by sorted site tuples."""
    basis: dict[tuple[int, ...], int] = {(): 0}
    for s in sites:
        basis[(s,)] = len(basis)
    for i, s in enumerate(sites):
        for s2 in sites[i:]:
            basis[(s, s2)] = len(basis)
    return basis


def subsystem_partition(num_sites: int, cut: int):
    """Split each canonical pair into its left (sites < cut) and right content.

    Returns ``(left_index, right_index, left_dim, right_dim)``, where
    ``left_index[i]`` labels the left-part Fock state of global basis state
    ``i``. The split is an isometry with unit coefficients: the
    ``1/sqrt(2)`` of a doubly occupied site is the same in the global and
    local bases.
    """
    if not 0 < cut < num_sites:
        raise ValueError(f"cut must satisfy 0 < cut < {num_sites}, got {cut}")
    left = _local_basis(list(range(cut)))
    right = _local_basis(list(range(cut, num_sites)))
    pairs = fock.pair_table(num_sites)
    li = np.empty(len(pairs), dtype=int)
    ri = np.empty(len(pairs), dtype=int)
    for i, (q, r) in enumerate(pairs):
        lpart = tuple(s for s in (q, r) if s < cut)
        rpart = tuple(s for s in (q, r) if s >= cut)
        li[i] = left[lpart]
        ri[i] = right[rpart]
    return li, ri, len(left), len(right)


def reduced_density(rho: TwoBosonDensityMatrix, cut: int, side: str = "left") -> np.ndarray:
    """Partial trace of ``rho`` onto the sites left (``< cut``) or right of ``cut``."""
    li, ri, dl, dr = subsystem_partition(rho.num_sites, cut)
    if side == "left":
        keep, trace_out, dim = li, ri, dl
    elif side == "right":
        keep, trace_out, dim = ri, li, dr
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    out = np.zeros((dim, dim), dtype=complex)
    m = rho.matrix
    for b in np.unique(trace_out):
        idx = np.flatnonzero(trace_out == b)
        out[np.ix_(keep[idx], keep[idx])] += m[np.ix_(idx, idx)]
    return out


def entropy_from_spectrum(spectrum: np.ndarray) -> float:
    lam = spectrum[spectrum > EIGEN_CUTOFF]
    return float(-np.sum(lam * np.log2(lam))) if lam.size else 0.0


def _report(reduced: np.ndarray, cut: int, time: float) -> EntropyReport:
    spectrum = np.linalg.eigvalsh(reduced)[::-1]
    return EntropyReport(cut, time, spectrum, max(entropy_from_spectrum(spectrum), 0.0), len(reduced))


def reduced_density_left(rho: TwoBosonDensityMatrix, propagator: Propagator, cut: int) -> EntropyReport:
    """Evolve ``rho`` with the two-particle lift of ``propagator`` and trace out sites ``>= cut``."""
    evolved = evolve_density(rho, propagator)
    return _report(reduced_density(evolved, cut, "left"), cut, propagator.time)


def entropy_series(
    rho: TwoBosonDensityMatrix, lattice: Lattice, times: Iterable[float], cut: int | None = None
) -> list[EntropyReport]:
    """Left-part entropy along a time grid using the exact finite-lattice propagator.

    ``cut`` defaults to ``L // 2``.
    """
    if cut is None:
        cut = lattice.num_sites // 2
    if rho.num_sites != lattice.num_sites:
        raise ValueError("density matrix and lattice disagree on the number of sites")
    propagate = spectral_factory(single_particle_matrix(lattice))
    return [reduced_density_left(rho, propagate(t), cut) for t in times]
