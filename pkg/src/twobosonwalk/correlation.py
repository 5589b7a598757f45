r"""Two-particle correlation ``Gamma[k, l] = <a_k^+ a_l^+ a_l a_k>`` after a walk.

General route
-------------
A canonical basis state ``|q r>`` evolves into
``N_qr sum_{k,l} U[k,q] U[l,r] a_k^+ a_l^+ |vac>``, so the two-particle
amplitude reaching the ordered detector pair ``(k, l)`` is

.. math::

    A_{qr}(k, l) = N_{qr} (U_{kq} U_{lr} + U_{kr} U_{lq}),
    \qquad N_{qr} = 1/\sqrt{1 + \delta_{qr}}

and for any density matrix

.. math::

    \Gamma_{kl} = \sum_{i, j} \rho_{ij} A_i(k, l) \overline{A_j(k, l)} .

Expanding the products over the unordered basis reproduces the four-term sum
over singly occupied pairs, the two ``sqrt(2)`` cross sums between singly and
doubly occupied pairs, and the ``2 rho[qq, q'q']`` doubly occupied sum. The
ket-side propagators enter unconjugated and the bra side conjugated
throughout, which is what makes ``Gamma`` real for every Hermitian ``rho``.

Fast paths
----------
For the two-site mixed input (see :mod:`twobosonwalk.states`) only four
matrix elements survive, giving :func:`gamma_family`; on a uniform ring the
propagator is a Bessel function, giving :func:`gamma_bessel`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .bessel import bessel_orders
from .errors import MarginError
from .propagator import Propagator, bessel_margin_ok, ring_displacement
from .states import CoherenceFamilyParams, TwoBosonDensityMatrix

__all__ = [
    "CorrelationMatrix",
    "pair_amplitudes",
    "gamma_general",
    "gamma_family",
    "gamma_bessel",
    "IMAG_TOL",
]

IMAG_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationMatrix:
    """Coincidence map ``gamma[k, l]`` at ``time``.

    ``positions[k]`` is the coordinate of internal site ``k``; distances are
    measured with it, which matters on a ring where the injection point is
    not site 0.
    """

    gamma: np.ndarray = field(repr=False)
    time: float
    positions: np.ndarray = field(repr=False)

    @property
    def num_sites(self) -> int:
        return self.gamma.shape[0]

    def total(self) -> float:
        return float(self.gamma.sum())


def pair_amplitudes(u: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    """``A[i, k, l]`` for each canonical pair ``pairs[i] = (q, r)``."""
    cq = u[:, pairs[:, 0]].T  # (n, L): U[k, q_i]
    cr = u[:, pairs[:, 1]].T
    norm = np.where(pairs[:, 0] == pairs[:, 1], 1.0 / np.sqrt(2.0), 1.0)
    amp = cq[:, :, None] * cr[:, None, :] + cr[:, :, None] * cq[:, None, :]
    return norm[:, None, None] * amp


def gamma_general(rho: TwoBosonDensityMatrix, propagator: Propagator, positions=None) -> CorrelationMatrix:
    """Correlation map for an arbitrary (pure or mixed) two-boson state.

    Only the rows/columns of ``rho`` that carry weight enter the sum, so a
    state supported on ``n`` basis vectors costs ``O(n^2 L^2)``.

    Raises
    ------
    ValueError
        On a size mismatch, or when the result carries an imaginary part
        above ``IMAG_TOL`` (``rho`` not Hermitian).
    """
    u = propagator.matrix
    L = rho.num_sites
    if u.shape != (L, L):
        raise ValueError(f"propagator of shape {u.shape} does not act on {L} sites")
    m = rho.matrix
    support = np.flatnonzero(np.any(m != 0, axis=0) | np.any(m != 0, axis=1))
    pairs = fock.pair_table(L)[support]
    amp = pair_amplitudes(u, pairs)  # (n, L, L)
    sub = m[np.ix_(support, support)]
    n = len(support)
    # weighted[i] = sum_j rho_ij conj(A_j)
    weighted = (sub @ amp.conj().reshape(n, L * L)).reshape(n, L, L)
    gamma = np.einsum("ikl,ikl->kl", amp, weighted)
    residue = float(np.abs(gamma.imag).max()) if n else 0.0
    if residue > IMAG_TOL:
        raise ValueError(f"correlation has imaginary residue {residue:.3g}; is rho Hermitian?")
    if positions is None:
        positions = np.arange(L)
    return CorrelationMatrix(gamma.real.copy(), propagator.time, np.asarray(positions))


def _family_from_columns(p: CoherenceFamilyParams, u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    gamma = p.gamma
    coherent = np.real(np.exp(1j * p.phi) * np.outer(u0, u0) * np.outer(u1, u1).conj())
    g = 2.0 * gamma * coherent
    g += 2.0 * p.alpha * np.abs(np.outer(u0, u0)) ** 2
    g += 2.0 * (1.0 - p.alpha) * np.abs(np.outer(u1, u1)) ** 2
    return g


def gamma_family(
    p: CoherenceFamilyParams, propagator: Propagator, origin: int = 0, positions=None
) -> CorrelationMatrix:
    """Correlation map for the ``(alpha, eta, phi)`` two-site input.

    ``Gamma[q, r] = 2 gamma Re(e^{i phi} U[q,s] U[r,s] U*[r,s+1] U*[q,s+1])
    + 2 alpha |U[r,s] U[q,s]|^2 + 2 (1 - alpha) |U[r,s+1] U[q,s+1]|^2``
    with ``s = origin``.
    """
    u = propagator.matrix
    L = u.shape[0]
    if not 0 <= origin < L - 1:
        raise ValueError(f"injection sites {origin}, {origin + 1} do not fit in {L} sites")
    g = _family_from_columns(p, u[:, origin], u[:, origin + 1])
    if positions is None:
        positions = np.arange(L)
    return CorrelationMatrix(g, propagator.time, np.asarray(positions))


def gamma_bessel(
    p: CoherenceFamilyParams,
    coupling: float,
    t: float,
    num_sites: int,
    origin: int = 0,
    *,
    check_margin: bool = True,
) -> CorrelationMatrix:
    """Correlation map on a uniform ring written with Bessel functions of ``tau = 2Ct``.

    ``Gamma[q, r] = -2 gamma cos(phi) J_q J_r J_{r-1} J_{q-1}
    + 2 alpha (J_q J_r)^2 + 2 (1 - alpha) (J_{r-1} J_{q-1})^2``, where ``q`` and
    ``r`` are ring displacements from ``origin``. ``positions`` of the result
    are those displacements.
    """
    if check_margin and not bessel_margin_ok(coupling, t, num_sites):
        raise MarginError(
            f"tau = {2 * coupling * t:g} too large for a ring of {num_sites} sites; enlarge L"
        )
    gamma = p.gamma
    tau = 2.0 * coupling * t
    disp0 = ring_displacement(num_sites, origin)
    disp1 = ring_displacement(num_sites, (origin + 1) % num_sites)
    j0 = bessel_orders(disp0, tau)
    j1 = bessel_orders(disp1, tau)
    a = np.outer(j0, j0)
    b = np.outer(j1, j1)
    g = -2.0 * gamma * np.cos(p.phi) * a * b + 2.0 * p.alpha * a**2 + 2.0 * (1.0 - p.alpha) * b**2
    return CorrelationMatrix(g, float(t), disp0)
