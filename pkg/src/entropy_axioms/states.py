"""Density matrices with superselection-sector block structure.

A :class:`DensityMatrix` is an ordered tuple of ``(sector label, block)``
pairs; no entries connect different sectors. Block eigendecompositions are
computed once at construction (they are needed to check positivity anyway)
and reused by every spectral functional.

Randomness uses ``numpy.random.Generator`` with the PCG64 bit generator,
seeded explicitly (``numpy.random.default_rng(seed)``). That choice is fixed
so seeded corpora stay reproducible.
"""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidSpectrum,
    InvalidState,
    MultiBlockUnsupported,
    NotHermitian,
    NotSquare,
    RankExceedsDim,
    SizeOverflow,
    ZeroVector,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
DEFAULT_SECTOR = "0"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Block-diagonal density matrix; construct with :func:`density_matrix`.

    A block is stored either dense (2-D) or, when a constructor knows it is
    diagonal, as its diagonal (1-D). ``blocks`` and ``eigens`` always present
    the dense view and are materialized lazily.
    """

    parts: tuple[tuple[str, np.ndarray], ...]
    block_eigenvalues: tuple[np.ndarray, ...] = field(repr=False)
    _dense_eigens: tuple = field(repr=False, default=())

    @property
    def dims(self) -> list[int]:
        return [a.shape[0] for _, a in self.parts]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def sectors(self) -> list[str]:
        return [label for label, _ in self.parts]

    @property
    def is_single_block(self) -> bool:
        return len(self.parts) == 1

    @property
    def is_diagonal(self) -> bool:
        return all(a.ndim == 1 for _, a in self.parts)

    @cached_property
    def blocks(self) -> tuple[tuple[str, np.ndarray], ...]:
        return tuple((label, np.diag(a).astype(complex) if a.ndim == 1 else a) for label, a in self.parts)

    @cached_property
    def eigens(self) -> tuple[linalg.HermitianEigen, ...]:
        out = []
        for (_, a), eig in zip(self.parts, self._dense_eigens or [None] * len(self.parts)):
            if eig is None:
                order = np.argsort(a.real, kind="stable")
                eig = linalg.HermitianEigen(a.real[order], np.eye(a.size, dtype=complex)[:, order])
            out.append(eig)
        return tuple(out)

    def matrix(self) -> np.ndarray:
        """Dense matrix with the blocks on the diagonal, in block order."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        i = 0
        for _, b in self.blocks:
            d = b.shape[0]
            out[i : i + d, i : i + d] = b
            i += d
        return out

    def block(self, label: str) -> np.ndarray:
        for lab, b in self.blocks:
            if lab == label:
                return b
        raise KeyError(label)


def density_matrix(blocks, hermiticity_tol: float = linalg.HERMITICITY_TOL) -> DensityMatrix:
    """Validate blocks and build a :class:`DensityMatrix`.

    ``blocks`` is an iterable of ``(label, array)`` pairs or a bare array (one
    block in the default sector). A 1-D array is a diagonal block. Violations
    raise :class:`InvalidState` naming the failed invariant.
    """
    if isinstance(blocks, np.ndarray) or (
        isinstance(blocks, (list, tuple)) and blocks and not isinstance(blocks[0], tuple)
    ):
        blocks = [(DEFAULT_SECTOR, blocks)]
    blocks = list(blocks)
    if not blocks:
        raise InvalidState("nonempty", "no blocks")
    labels = [str(lab) for lab, _ in blocks]
    if len(set(labels)) != len(labels):
        raise InvalidState("unique sector labels", f"labels {labels}")

    parts, values, eigens = [], [], []
    total = 0.0
    for label, M in blocks:
        A = np.asarray(M)
        if A.ndim == 1:
            A, w, eig = _check_diagonal(label, A, hermiticity_tol)
        else:
            A, w, eig = _check_dense(label, A, hermiticity_tol)
        if w[0] < -PSD_TOL:
            raise InvalidState("positive semidefinite", f"sector {label!r}: min eigenvalue {w[0]:.3e}")
        total += float(np.sum(w))
        parts.append((str(label), A))
        values.append(w)
        eigens.append(eig)
    if abs(total - 1.0) > TRACE_TOL:
        raise InvalidState("unit trace", f"trace {total!r}")
    return DensityMatrix(tuple(parts), tuple(values), tuple(eigens))


def _check_diagonal(label, a, tol):
    if a.size == 0:
        raise InvalidState("block is a matrix", f"sector {label!r}: empty")
    a = a.astype(complex)
    if not np.all(np.isfinite(a)):
        raise InvalidState("finite entries", f"sector {label!r}")
    if np.linalg.norm(a.imag) > tol * max(1.0, float(np.linalg.norm(a))):
        raise InvalidState("hermitian", f"sector {label!r}: complex diagonal")
    d = a.real.astype(float)
    return d, np.sort(d), None


def _check_dense(label, A, tol):
    try:
        A = linalg.as_matrix(A)
    except DimensionMismatch as exc:
        raise InvalidState("block is a matrix", f"sector {label!r}: {exc}") from exc
    except ValueError as exc:
        raise InvalidState("finite entries", f"sector {label!r}") from exc
    try:
        A = linalg.hermitize(A, tol)
    except NotSquare as exc:
        raise InvalidState("square block", f"sector {label!r}: {exc}") from exc
    except NotHermitian as exc:
        raise InvalidState("hermitian", f"sector {label!r}: {exc}") from exc
    eig = linalg.hermitian_eigen(A, tol)
    return A, eig.eigenvalues, eig


def spectrum(rho: DensityMatrix) -> np.ndarray:
    """All block eigenvalues, concatenated and sorted descending."""
    return np.sort(np.concatenate(rho.block_eigenvalues))[::-1]


def qlb(N: int, sector: str = DEFAULT_SECTOR) -> DensityMatrix:
    """The uniform state ``(1/N) * identity`` on an N-dimensional block."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return density_matrix([(sector, np.full(N, 1.0 / N))])


def pure(v, sector: str = DEFAULT_SECTOR) -> DensityMatrix:
    v = np.asarray(v, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if v.size == 0 or norm == 0.0:
        raise ZeroVector("cannot normalize a zero vector")
    v = v / norm
    return density_matrix([(sector, np.outer(v, v.conj()))])


def _kron_parts(A: np.ndarray, B: np.ndarray, dim_cap: int) -> np.ndarray:
    if A.ndim == 1 and B.ndim == 1:
        if A.size * B.size > dim_cap:
            raise SizeOverflow(f"kron dimension {A.size * B.size} exceeds cap {dim_cap}")
        return np.kron(A, B)
    A = np.diag(A) if A.ndim == 1 else A
    B = np.diag(B) if B.ndim == 1 else B
    return linalg.kron(A, B, dim_cap)


def tensor(a: DensityMatrix, b: DensityMatrix, dim_cap: int = linalg.DIM_CAP) -> DensityMatrix:
    """Product state ``a (x) b``.

    Blocks multiply pairwise; a compound block is labelled ``"la*lb"``.
    Charge arithmetic between sectors is not modelled, so blocks with equal
    total charge are not merged (this never changes a spectrum).
    """
    if a.dim * b.dim > dim_cap:
        raise SizeOverflow(f"product dimension {a.dim * b.dim} exceeds cap {dim_cap}")
    if a.is_single_block and b.is_single_block:
        (la, A), (lb, B) = a.parts[0], b.parts[0]
        label = la if la == lb else f"{la}*{lb}"
        return density_matrix([(label, _kron_parts(A, B, dim_cap))])
    return density_matrix(
        [(f"{la}*{lb}", _kron_parts(A, B, dim_cap)) for la, A in a.parts for lb, B in b.parts]
    )


def tensor_power(rho: DensityMatrix, n: int, dim_cap: int = linalg.DIM_CAP) -> DensityMatrix:
    """n-fold Kronecker power of a single-block state."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not rho.is_single_block:
        raise MultiBlockUnsupported("tensor powers are defined for single-block states only")
    if rho.dim**n > dim_cap:
        raise SizeOverflow(f"dimension {rho.dim}^{n} exceeds cap {dim_cap}")
    label, A = rho.parts[0]
    out = A
    for _ in range(n - 1):
        out = _kron_parts(out, A, dim_cap)
    return density_matrix([(label, out)])


@dataclass(frozen=True)
class RationalSpectrum:
    """Exact positive eigenvalues summing to one, stored in descending order."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(sorted((Fraction(e) for e in self.entries), reverse=True))
        if not entries:
            raise InvalidSpectrum("spectrum is empty")
        if any(e <= 0 for e in entries):
            raise InvalidSpectrum("entries must be positive (omit zero eigenvalues)")
        if sum(entries) != 1:
            raise InvalidSpectrum(f"entries sum to {sum(entries)}, not exactly 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "RationalSpectrum":
        """Parse ``"2/3,1/3"``; decimals such as ``"0.5"`` are read exactly."""
        try:
            parts = [Fraction(p.strip()) for p in text.split(",") if p.strip()]
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidSpectrum(f"cannot parse spectrum {text!r}: {exc}") from exc
        return cls(tuple(parts))

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def common_denominator(self) -> int:
        return math.lcm(*(e.denominator for e in self.entries))

    def floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries])

    def __str__(self):
        return ",".join(str(e) for e in self.entries)


def from_rational_spectrum(s: RationalSpectrum, sector: str = DEFAULT_SECTOR) -> DensityMatrix:
    """Diagonal state with the entries of ``s`` in descending order."""
    return density_matrix([(sector, s.floats())])


def diagonal_state(p: Sequence[float], sector: str = DEFAULT_SECTOR) -> DensityMatrix:
    return density_matrix([(sector, np.asarray(p, dtype=float))])


def random_density(d: int, rank: int | None = None, seed: int = 0, rng=None) -> DensityMatrix:
    """``G G^H / Tr(G G^H)`` for a ``d x rank`` complex Gaussian ``G``."""
    rank = d if rank is None else rank
    if d < 1 or rank < 1:
        raise ValueError("d and rank must be >= 1")
    if rank > d:
        raise RankExceedsDim(f"rank {rank} exceeds dimension {d}")
    rng = np.random.default_rng(seed) if rng is None else rng
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    W = G @ G.conj().T
    return density_matrix(W / np.trace(W).real)


def random_unitary(d: int, seed: int = 0, rng=None) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of a seeded complex Gaussian matrix."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed) if rng is None else rng
    U = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    for j in range(d):
        for i in range(j):
            U[:, j] -= np.vdot(U[:, i], U[:, j]) * U[:, i]
        U[:, j] /= np.linalg.norm(U[:, j])
    return U


def conjugate(rho: DensityMatrix, unitaries) -> DensityMatrix:
    """Apply ``U_b . block . U_b^H`` sector by sector.

    ``unitaries`` is a sequence aligned with ``rho.blocks`` or a mapping from
    sector label to unitary (missing sectors are left unchanged).
    """
    if isinstance(unitaries, dict):
        seq = [unitaries.get(label) for label in rho.sectors]
    else:
        seq = list(unitaries)
        if len(seq) != len(rho.blocks):
            raise DimensionMismatch(f"{len(seq)} unitaries for {len(rho.blocks)} blocks")
    out = []
    for (label, A), (_, raw), U in zip(rho.blocks, rho.parts, seq):
        if U is None:
            out.append((label, raw))
            continue
        U = np.asarray(U, dtype=complex)
        if U.shape != A.shape:
            raise DimensionMismatch(f"sector {label!r}: unitary {U.shape} vs block {A.shape}")
        out.append((label, U @ A @ U.conj().T))
    return density_matrix(out)


# -- state files -------------------------------------------------------------


def dumps(rho: DensityMatrix) -> str:
    """Serialize to the state-file JSON format (17 significant digits)."""
    lines = ['{"blocks": [']
    for i, (label, A) in enumerate(rho.blocks):
        pairs = ", ".join(
            f"[{format(z.real, '.17g')}, {format(z.imag, '.17g')}]" for z in A.ravel()
        )
        sep = "," if i < len(rho.blocks) - 1 else ""
        lines.append(
            f'  {{"sector": {json.dumps(label)}, "dim": {A.shape[0]}, "entries": [{pairs}]}}{sep}'
        )
    lines.append("]}")
    return "\n".join(lines) + "\n"


def from_json_dict(data) -> DensityMatrix:
    if not isinstance(data, dict) or "blocks" not in data:
        raise InvalidState("schema", 'top-level object must have a "blocks" list')
    raw = data["blocks"]
    if not isinstance(raw, list) or not raw:
        raise InvalidState("schema", '"blocks" must be a nonempty list')
    blocks = []
    for i, blk in enumerate(raw):
        if not isinstance(blk, dict) or not {"sector", "dim", "entries"} <= blk.keys():
            raise InvalidState("schema", f'block {i} needs "sector", "dim", "entries"')
        label, d, entries = blk["sector"], blk["dim"], blk["entries"]
        if not isinstance(label, str):
            raise InvalidState("schema", f"block {i}: sector must be a string")
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise InvalidState("schema", f"block {i}: dim must be a positive integer")
        if not isinstance(entries, list) or len(entries) != d * d:
            n = len(entries) if isinstance(entries, list) else "non-list"
            raise InvalidState("entries length = dim^2", f"block {i}: {n} entries for dim {d}")
        vals = []
        for e in entries:
            if (
                not isinstance(e, list)
                or len(e) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in e)
            ):
                raise InvalidState("schema", f"block {i}: entries must be [re, im] number pairs")
            vals.append(complex(e[0], e[1]))
        A = np.array(vals, dtype=complex).reshape(d, d)
        if not np.all(np.isfinite(A)):
            raise InvalidState("finite entries", f"block {i}")
        blocks.append((label, A))
    return density_matrix(blocks)


def loads(text: str) -> DensityMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidState("valid JSON", str(exc)) from exc
    return from_json_dict(data)


def load(path) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(rho))


def block_sum(states: Iterable[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Direct sum of weighted states into separate sectors (weights must sum to 1)."""
    blocks = []
    for w, rho in states:
        for label, A in rho.blocks:
            blocks.append((label, w * A))
    return density_matrix(blocks)
