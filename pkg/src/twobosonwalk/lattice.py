"""One-dimensional tight-binding lattices and their single-particle matrix.

The non-interacting hopping Hamiltonian is

    H = -sum_q T_{q,q+1} (a_q^+ a_{q+1} + h.c.) + sum_q beta_q a_q^+ a_q

and since it is quadratic the whole two-boson dynamics is generated by the
L x L matrix ``M`` with ``M[q, q] = beta_q`` and ``M[q, q+1] = -T_{q,q+1}``.
Sites are indexed ``0 .. L-1`` internally; ``site_offset`` only changes the
labels reported to the user.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from numbers import Real
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError

__all__ = [
    "Boundary",
    "LatticeSpec",
    "Lattice",
    "build_lattice",
    "single_particle_matrix",
]


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


DECISION_TREE = "decision_tree"

Couplings = Union[float, Sequence[float]]
OnsiteRule = Union[str, float, Sequence[float]]


@dataclass(frozen=True)
class LatticeSpec:
    """Raw description of a chain, as read from a config file.

    Parameters
    ----------
    num_sites : int
        Number of sites ``L`` (at least 2).
    boundary : Boundary or str
        ``"periodic"`` (ring) or ``"open"`` (chain with two ends).
    couplings : float or sequence of float
        A scalar means uniform tunnelling ``C`` on every bond. A sequence
        gives one coupling per bond, bond ``q`` joining sites ``q`` and
        ``q + 1``; it has length ``L`` on a ring and ``L - 1`` otherwise.
    onsite : "decision_tree", float or sequence of float
        ``"decision_tree"`` sets ``beta_q`` to the sum of the couplings of
        the bonds touching ``q``; a scalar is a constant on-site energy; a
        sequence lists ``beta_q`` explicitly.
    site_offset : int
        Label of internal site 0. ``-(L // 2)`` gives the centred labels
        ``-l .. l`` for ``L = 2l + 1``.
    """

    num_sites: int
    boundary: Boundary | str = Boundary.PERIODIC
    couplings: Couplings = 1.0
    onsite: OnsiteRule = DECISION_TREE
    site_offset: int = 0


@dataclass(frozen=True)
class Lattice:
    """A validated lattice with explicit per-bond couplings and on-site energies."""

    num_sites: int
    boundary: Boundary
    bonds: np.ndarray = field(repr=False)
    onsite: np.ndarray = field(repr=False)
    site_offset: int = 0
    uniform_coupling: float | None = None

    @property
    def labels(self) -> np.ndarray:
        return np.arange(self.num_sites) + self.site_offset

    @property
    def is_uniform_ring(self) -> bool:
        """True when the Bessel closed form applies (up to the wrap-around margin)."""
        if self.boundary is not Boundary.PERIODIC or self.uniform_coupling is None:
            return False
        return bool(np.all(self.onsite == self.onsite[0]))

    def bond_sites(self) -> list[tuple[int, int]]:
        L = self.num_sites
        return [(q, (q + 1) % L) for q in range(len(self.bonds))]


def _as_finite_array(values, name: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be numeric") from exc
    if arr.ndim != 1:
        raise ConfigError(f"{name} must be a flat list of numbers")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} contains non-finite values")
    return arr


def build_lattice(spec: LatticeSpec) -> Lattice:
    """Validate ``spec`` and resolve its on-site rule to explicit energies.

    Raises
    ------
    ConfigError
        If ``L < 2``, a per-bond or custom list has the wrong length, or
        any value is non-finite.

    Examples
    --------
    >>> build_lattice(LatticeSpec(5, "open")).onsite
    array([1., 2., 2., 2., 1.])
    """
    L = spec.num_sites
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or L < 2:
        raise ConfigError(f"num_sites must be an integer >= 2, got {L!r}")
    L = int(L)
    try:
        boundary = Boundary(spec.boundary)
    except ValueError as exc:
        raise ConfigError(f"unknown boundary {spec.boundary!r}") from exc
    num_bonds = L if boundary is Boundary.PERIODIC else L - 1

    uniform = None
    if isinstance(spec.couplings, Real):
        c = float(spec.couplings)
        if not np.isfinite(c) or c <= 0:
            raise ConfigError(f"uniform coupling must be finite and > 0, got {c}")
        bonds = np.full(num_bonds, c)
        uniform = c
    else:
        bonds = _as_finite_array(spec.couplings, "couplings")
        if len(bonds) != num_bonds:
            raise ConfigError(
                f"{boundary.value} lattice with {L} sites needs {num_bonds} "
                f"couplings, got {len(bonds)}"
            )

    rule = spec.onsite
    if isinstance(rule, str):
        if rule != DECISION_TREE:
            raise ConfigError(f"unknown on-site rule {rule!r}")
        # missing neighbours on an open chain contribute nothing: the two
        # end sites become defects
        onsite = np.zeros(L)
        for q, c in enumerate(bonds):
            onsite[q] += c
            onsite[(q + 1) % L] += c
    elif isinstance(rule, Real):
        if not np.isfinite(float(rule)):
            raise ConfigError("constant on-site energy must be finite")
        onsite = np.full(L, float(rule))
    else:
        onsite = _as_finite_array(rule, "onsite")
        if len(onsite) != L:
            raise ConfigError(f"custom on-site list needs {L} entries, got {len(onsite)}")

    bonds.setflags(write=False)
    onsite.setflags(write=False)
    return Lattice(
        num_sites=L,
        boundary=boundary,
        bonds=bonds,
        onsite=onsite,
        site_offset=int(spec.site_offset),
        uniform_coupling=uniform,
    )


def single_particle_matrix(lattice: Lattice) -> np.ndarray:
    """Real symmetric matrix generating the single-particle walk.

    ``exp(-1j * M * t)`` is the Schrodinger-picture propagator: column ``r``
    holds the amplitudes of a particle injected at site ``r``.
    """
    m = np.diag(np.array(lattice.onsite, dtype=float))
    for (q, r), c in zip(lattice.bond_sites(), lattice.bonds):
        m[q, r] -= c
        m[r, q] -= c
    return m
