"""Canonical indexing of the two-boson Fock basis.

The unordered pair ``{q, r}`` is stored as ``(min, max)`` and enumerated row
by row: ``(0,0), (0,1), ..., (0,L-1), (1,1), ..., (L-1,L-1)``, giving
``D = L(L+1)/2`` basis states. The basis vector for ``(q, r)`` is
``a_q^+ a_r^+ |vac> / sqrt(1 + delta_qr)``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "dimension",
    "index_of",
    "pair_of",
    "pair_table",
    "normalization",
    "normalization_vector",
]


def dimension(num_sites: int) -> int:
    return num_sites * (num_sites + 1) // 2


def _check_site(q: int, num_sites: int) -> None:
    if not 0 <= q < num_sites:
        raise IndexError(f"site {q} out of range for {num_sites} sites")


def index_of(q: int, r: int, num_sites: int) -> int:
    """Linear index of the unordered pair ``{q, r}``.

    >>> index_of(3, 3, 4)
    9
    """
    _check_site(q, num_sites)
    _check_site(r, num_sites)
    if q > r:
        q, r = r, q
    return q * num_sites - q * (q - 1) // 2 + (r - q)


@lru_cache(maxsize=64)
def pair_table(num_sites: int) -> np.ndarray:
    """``(D, 2)`` array of canonical pairs in index order (read-only)."""
    rows = [(q, r) for q in range(num_sites) for r in range(q, num_sites)]
    table = np.array(rows, dtype=int).reshape(-1, 2)
    table.setflags(write=False)
    return table


def pair_of(index: int, num_sites: int) -> tuple[int, int]:
    if not 0 <= index < dimension(num_sites):
        raise IndexError(f"index {index} out of range for {num_sites} sites")
    q, r = pair_table(num_sites)[index]
    return int(q), int(r)


def normalization(q: int, r: int) -> float:
    """Prefactor ``1/sqrt(1 + delta_qr)`` making ``a_q^+ a_r^+ |vac>`` a unit vector."""
    return 1.0 / math.sqrt(2.0) if q == r else 1.0


@lru_cache(maxsize=64)
def normalization_vector(num_sites: int) -> np.ndarray:
    pairs = pair_table(num_sites)
    vec = np.where(pairs[:, 0] == pairs[:, 1], 1.0 / math.sqrt(2.0), 1.0)
    vec.setflags(write=False)
    return vec
