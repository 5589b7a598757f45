"""Two-boson pure states and density matrices on the canonical Fock basis.

Besides generic constructors, this module builds the mixed input used for
two-photon injection into neighbouring sites ``s`` and ``s + 1``: an
incoherent mixture of two beams, and its three-parameter form

    rho[ss, ss] = alpha
    rho[s+1 s+1, s+1 s+1] = 1 - alpha
    rho[ss, s+1 s+1] = conj(rho[s+1 s+1, ss]) = exp(i phi) * gamma / 2

with ``gamma = sqrt(eta - 1 + 4 alpha (1 - alpha))`` and degree of
coherence ``eta = 2 Tr(rho^2) - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import fock
from .errors import PhysicalityError

__all__ = [
    "TwoBosonPureState",
    "TwoBosonDensityMatrix",
    "CoherenceFamilyParams",
    "BeamParams",
    "ValidationReport",
    "pure_state",
    "density_from_pure",
    "density_from_beams",
    "density_from_family",
    "coherence_eta",
    "validate",
    "require_valid",
    "random_density_matrix",
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "PSD_TOL",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class TwoBosonPureState:
    amplitudes: np.ndarray = field(repr=False)
    num_sites: int

    def __post_init__(self):
        if self.amplitudes.shape != (fock.dimension(self.num_sites),):
            raise ValueError("amplitude vector does not match the Fock dimension")


@dataclass(frozen=True)
class TwoBosonDensityMatrix:
    """``matrix[i, j] = <i| rho |j>`` over canonical pair indices."""

    matrix: np.ndarray = field(repr=False)
    num_sites: int

    def __post_init__(self):
        d = fock.dimension(self.num_sites)
        if self.matrix.shape != (d, d):
            raise ValueError(
                f"density matrix of shape {self.matrix.shape} does not match "
                f"D = {d} for {self.num_sites} sites"
            )

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def element(self, q: int, r: int, qp: int, rp: int) -> complex:
        L = self.num_sites
        return complex(self.matrix[fock.index_of(q, r, L), fock.index_of(qp, rp, L)])


@dataclass(frozen=True)
class CoherenceFamilyParams:
    """Population ``alpha`` of the left site, coherence ``eta``, relative phase ``phi``."""

    alpha: float
    eta: float
    phi: float = 0.0

    @property
    def eta_min(self) -> float:
        return 1.0 - 4.0 * self.alpha * (1.0 - self.alpha)

    @property
    def gamma(self) -> float:
        self.check()
        # clip rounding below the bound, which check() already tolerates
        return math.sqrt(max(self.eta - self.eta_min, 0.0))

    def check(self) -> None:
        a, e = self.alpha, self.eta
        if not all(map(math.isfinite, (a, e, self.phi))):
            raise PhysicalityError("family parameters must be finite")
        if not 0.0 <= a <= 1.0:
            raise PhysicalityError(f"alpha = {a} outside [0, 1]")
        if e > 1.0 + 1e-12 or e < self.eta_min - 1e-12:
            raise PhysicalityError(
                f"eta = {e} outside [{self.eta_min:.6g}, 1] for alpha = {a}; "
                "gamma would be imaginary or the matrix would not be positive"
            )


@dataclass(frozen=True)
class BeamParams:
    """Beam intensity ratio ``cos^2 delta : sin^2 delta``, mixing angle ``theta``, phase ``phi``."""

    delta: float
    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float
    purity: float

    @property
    def hermitian(self) -> bool:
        return self.hermiticity_error <= HERMITIAN_TOL

    @property
    def unit_trace(self) -> bool:
        return self.trace_error <= TRACE_TOL

    @property
    def positive(self) -> bool:
        return self.min_eigenvalue >= -PSD_TOL

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.positive and self.purity <= 1 + 1e-12

    def failures(self) -> list[str]:
        out = []
        if not self.hermitian:
            out.append(f"not Hermitian (max |rho - rho^+| = {self.hermiticity_error:.3g})")
        if not self.unit_trace:
            out.append(f"trace deviates from 1 by {self.trace_error:.3g}")
        if not self.positive:
            out.append(f"not positive semidefinite (min eigenvalue {self.min_eigenvalue:.3g})")
        if self.purity > 1 + 1e-12:
            out.append(f"purity Tr(rho^2) = {self.purity:.15g} exceeds 1")
        return out


def validate(rho: TwoBosonDensityMatrix | np.ndarray) -> ValidationReport:
    """Measure how far ``rho`` is from a valid density matrix. Never repairs it."""
    m = rho.matrix if isinstance(rho, TwoBosonDensityMatrix) else np.asarray(rho)
    herm = float(np.abs(m - m.conj().T).max())
    trace_err = float(abs(np.trace(m) - 1.0))
    # eigenvalues of the Hermitian part; a non-Hermitian input is already rejected
    min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
    purity = float(np.real(np.vdot(m.conj().T, m)))
    return ValidationReport(herm, trace_err, min_eig, purity)


def require_valid(rho: TwoBosonDensityMatrix) -> TwoBosonDensityMatrix:
    report = validate(rho)
    if not report.ok:
        raise PhysicalityError("invalid density matrix: " + "; ".join(report.failures()))
    return rho


def pure_state(coeffs: Iterable[tuple[int, int, complex]], num_sites: int) -> TwoBosonPureState:
    """Assemble a normalised pure state from ``(q, r, amplitude)`` triples.

    ``(q, r)`` and ``(r, q)`` name the same basis state, so their amplitudes
    are added before normalising.
    """
    amps = np.zeros(fock.dimension(num_sites), dtype=complex)
    for q, r, c in coeffs:
        amps[fock.index_of(q, r, num_sites)] += c
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise PhysicalityError("pure state has zero norm")
    return TwoBosonPureState(amps / norm, num_sites)


def density_from_pure(psi: TwoBosonPureState) -> TwoBosonDensityMatrix:
    return TwoBosonDensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.num_sites)


def _check_pair_sites(num_sites: int, origin: int) -> None:
    if not 0 <= origin < num_sites - 1:
        raise ValueError(f"injection sites {origin}, {origin + 1} do not fit in {num_sites} sites")


def density_from_beams(p: BeamParams, num_sites: int, origin: int = 0) -> TwoBosonDensityMatrix:
    """Incoherent mixture ``cos^2(delta) |psi1><psi1| + sin^2(delta) |psi2><psi2|``.

    ``psi1 = cos(theta/2) |2>_{s+1} + sin(theta/2) exp(i phi) |2>_s`` and
    ``psi2 = |2>_{s+1}``, with ``s = origin``.
    """
    _check_pair_sites(num_sites, origin)
    s0, s1 = origin, origin + 1
    w1, w2 = math.cos(p.delta) ** 2, math.sin(p.delta) ** 2
    psi1 = pure_state(
        [(s1, s1, math.cos(p.theta / 2)), (s0, s0, math.sin(p.theta / 2) * np.exp(1j * p.phi))],
        num_sites,
    )
    psi2 = pure_state([(s1, s1, 1.0)], num_sites)
    m = w1 * density_from_pure(psi1).matrix + w2 * density_from_pure(psi2).matrix
    return TwoBosonDensityMatrix(m, num_sites)


def density_from_family(p: CoherenceFamilyParams, num_sites: int, origin: int = 0) -> TwoBosonDensityMatrix:
    """Two-site mixed state parametrised by ``(alpha, eta, phi)``.

    Raises
    ------
    PhysicalityError
        If ``eta`` lies outside ``[1 - 4 alpha (1 - alpha), 1]``.
    """
    _check_pair_sites(num_sites, origin)
    gamma = p.gamma
    i0 = fock.index_of(origin, origin, num_sites)
    i1 = fock.index_of(origin + 1, origin + 1, num_sites)
    d = fock.dimension(num_sites)
    m = np.zeros((d, d), dtype=complex)
    m[i0, i0] = p.alpha
    m[i1, i1] = 1.0 - p.alpha
    m[i0, i1] = np.exp(1j * p.phi) * gamma / 2.0
    m[i1, i0] = np.conj(m[i0, i1])
    return TwoBosonDensityMatrix(m, num_sites)


def coherence_eta(rho: TwoBosonDensityMatrix) -> float:
    """Degree of coherence ``2 Tr(rho^2) - 1``."""
    m = rho.matrix
    return 2.0 * float(np.real(np.vdot(m.conj().T, m))) - 1.0


def random_density_matrix(num_sites: int, rng: np.random.Generator, rank: int | None = None) -> TwoBosonDensityMatrix:
    """``G G^+ / Tr(G G^+)`` for a complex Gaussian ``G``; valid by construction."""
    d = fock.dimension(num_sites)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    m /= np.trace(m).real
    # exact Hermiticity, removing rounding asymmetry of the product
    m = 0.5 * (m + m.conj().T)
    return TwoBosonDensityMatrix(m, num_sites)
