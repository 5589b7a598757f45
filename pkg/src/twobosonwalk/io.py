"""Density-matrix files and deterministic CSV/JSON writers.

Density-matrix file layout::

    L=3
    # q r q' r' re im
    0 0 0 0 0.5 0
    1 1 1 1 0.5 0

Pairs must be canonical (``q <= r``); entries not listed are zero.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import fock
from .errors import ConfigError
from .states import TwoBosonDensityMatrix, require_valid

__all__ = [
    "fmt",
    "load_density_file",
    "write_density_file",
    "write_csv",
    "write_json",
]


def fmt(x: float) -> str:
    """17 significant digits: round-trips every double."""
    return format(float(x), ".17g")


def load_density_file(path: str | Path) -> TwoBosonDensityMatrix:
    """Read and validate a density matrix.

    Raises
    ------
    ConfigError
        Malformed header or rows, non-canonical or repeated pairs.
    PhysicalityError
        The matrix is not Hermitian, unit-trace and positive.
    """
    lines = Path(path).read_text().splitlines()
    rows = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or not rows[0].startswith("L="):
        raise ConfigError(f"{path}: first line must be 'L=<sites>'")
    try:
        L = int(rows[0][2:])
    except ValueError as exc:
        raise ConfigError(f"{path}: bad header {rows[0]!r}") from exc
    if L < 2:
        raise ConfigError(f"{path}: need at least 2 sites")
    d = fock.dimension(L)
    m = np.zeros((d, d), dtype=complex)
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        parts = row.split()
        if len(parts) != 6:
            raise ConfigError(f"{path}: row {lineno} needs 6 fields, got {len(parts)}")
        try:
            q, r, qp, rp = (int(v) for v in parts[:4])
            re, im = float(parts[4]), float(parts[5])
        except ValueError as exc:
            raise ConfigError(f"{path}: row {lineno} is malformed") from exc
        if q > r or qp > rp:
            raise ConfigError(f"{path}: row {lineno} has a non-canonical pair (need q <= r)")
        if not all(0 <= s < L for s in (q, r, qp, rp)):
            raise ConfigError(f"{path}: row {lineno} has a site outside 0..{L - 1}")
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ConfigError(f"{path}: row {lineno} is not finite")
        key = (q, r, qp, rp)
        if key in seen:
            raise ConfigError(f"{path}: row {lineno} repeats entry {key}")
        seen.add(key)
        m[fock.index_of(q, r, L), fock.index_of(qp, rp, L)] = re + 1j * im
    return require_valid(TwoBosonDensityMatrix(m, L))


def write_density_file(path: str | Path, rho: TwoBosonDensityMatrix) -> None:
    pairs = fock.pair_table(rho.num_sites)
    out = [f"L={rho.num_sites}"]
    for i, j in zip(*np.nonzero(rho.matrix)):
        z = rho.matrix[i, j]
        (q, r), (qp, rp) = pairs[i], pairs[j]
        out.append(f"{q} {r} {qp} {rp} {fmt(z.real)} {fmt(z.imag)}")
    Path(path).write_text("\n".join(out) + "\n")


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence],
    comments: Sequence[str] = (),
) -> None:
    """Write a CSV with ``# key=value`` comment lines first; floats at full precision."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
