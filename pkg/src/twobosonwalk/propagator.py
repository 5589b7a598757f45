"""Single-particle propagators ``U(t) = exp(-i M t)``.

Two routes are provided: an exact spectral exponential for any lattice, and
the closed form ``U[q, r] = exp(-2iCt) i^(q-r) J_{q-r}(2Ct)`` valid on a
uniform ring as long as the walk has not wrapped around it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .bessel import bessel_orders
from .errors import MarginError

__all__ = [
    "Method",
    "Propagator",
    "spectral_factory",
    "propagate_spectral",
    "propagate_bessel",
    "ring_displacement",
    "bessel_margin_ok",
    "WRAP_MARGIN",
]

WRAP_MARGIN = 10

_I_POWERS = np.array([1, 1j, -1, -1j])


class Method(str, Enum):
    SPECTRAL = "spectral"
    BESSEL = "bessel"


@dataclass(frozen=True)
class Propagator:
    """``matrix[q, r]``: amplitude to find at ``q`` a particle injected at ``r``."""

    time: float
    matrix: np.ndarray = field(repr=False)
    method: Method

    @property
    def num_sites(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.abs(u @ u.conj().T - np.eye(len(u))).max())


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"time must be finite and >= 0, got {t}")
    return t


def spectral_factory(m: np.ndarray) -> Callable[[float], Propagator]:
    """Diagonalise ``m`` once and return ``t -> Propagator`` for it.

    The eigenbasis is shared by every time point, so a time grid costs one
    O(L^3) decomposition plus O(L^3) matrix products per point.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("single-particle matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("single-particle matrix contains non-finite entries")
    evals, evecs = np.linalg.eigh(m)
    size = m.shape[0]

    def propagate(t: float) -> Propagator:
        t = _check_time(t)
        if t == 0.0:
            return Propagator(0.0, np.eye(size, dtype=complex), Method.SPECTRAL)
        u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
        return Propagator(t, u, Method.SPECTRAL)

    return propagate


def propagate_spectral(m: np.ndarray, t: float) -> Propagator:
    return spectral_factory(m)(t)


def ring_displacement(num_sites: int, origin: int = 0) -> np.ndarray:
    """Minimal signed displacement of every site from ``origin`` on a ring.

    Values lie in ``(-L/2, L/2]``.
    """
    d = (np.arange(num_sites) - origin) % num_sites
    return np.where(d > num_sites // 2, d - num_sites, d)


def bessel_margin_ok(coupling: float, t: float, num_sites: int) -> bool:
    """Whether ``tau = 2Ct`` stays ``WRAP_MARGIN`` orders inside half the ring."""
    return 2.0 * coupling * t < num_sites / 2.0 - WRAP_MARGIN


def propagate_bessel(coupling: float, num_sites: int, t: float, *, check_margin: bool = True) -> Propagator:
    """Closed-form propagator on a uniform ring with decision-tree energies.

    Raises
    ------
    MarginError
        If ``2Ct >= L/2 - 10`` and ``check_margin`` is set; the ring is then
        too small for the infinite-lattice form.
    """
    t = _check_time(t)
    if check_margin and not bessel_margin_ok(coupling, t, num_sites):
        raise MarginError(
            f"tau = 2Ct = {2 * coupling * t:g} is too close to L/2 = {num_sites / 2:g}; "
            f"enlarge the ring to more than {math.ceil(4 * coupling * t + 2 * WRAP_MARGIN)} sites "
            "or use the spectral propagator"
        )
    if t == 0.0:
        return Propagator(0.0, np.eye(num_sites, dtype=complex), Method.BESSEL)
    tau = 2.0 * coupling * t
    n = ring_displacement(num_sites)
    # displacement q - r, wrapped onto the ring
    disp = n[(np.arange(num_sites)[:, None] - np.arange(num_sites)[None, :]) % num_sites]
    jn = bessel_orders(disp, tau)
    u = np.exp(-1j * tau) * _I_POWERS[disp % 4] * jn
    return Propagator(t, u, Method.BESSEL)
