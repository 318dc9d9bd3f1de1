"""Dense complex Hermitian linear algebra.

Matrices are plain ``numpy`` complex arrays. The eigensolver is a cyclic
Jacobi method using the round-robin (tournament) ordering, so every round
rotates ``n // 2`` disjoint index pairs at once with vectorized updates.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NoConvergence,
    NotHermitian,
    NotSquare,
    SizeOverflow,
)

HERMITICITY_TOL = 1e-10
SUPPORT_FLOOR = 1e-12
DIM_CAP = 4096
MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-14


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns orthonormal
    sweeps: int = 0


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a finite 2-D complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size == 0:
        raise DimensionMismatch("empty matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermiticity_defect(M: np.ndarray) -> float:
    """Relative defect ``||M - M^H||_F / max(1, ||M||_F)``."""
    return float(np.linalg.norm(M - M.conj().T) / max(1.0, np.linalg.norm(M)))


def hermitize(M, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Check Hermiticity within ``tol`` and return ``(M + M^H) / 2``."""
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"matrix is {A.shape[0]}x{A.shape[1]}")
    defect = hermiticity_defect(A)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (A + A.conj().T)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint pairs covering every (p, q), p < q, exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _offdiag_norm(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigen(
    M,
    hermiticity_tol: float = HERMITICITY_TOL,
    max_sweeps: int = MAX_SWEEPS,
    rtol: float = OFFDIAG_RTOL,
) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of ``A[p, q]`` and then applies the
    real symmetric Jacobi rotation, so ``G^H A G`` zeroes the pair. A round
    of disjoint rotations is ``G = diag(g1) + S diag(g2)`` with ``S`` the
    pair-swap permutation, which keeps every update a gather plus a
    broadcast. Iteration stops once the off-diagonal Frobenius norm drops
    below ``rtol * ||M||_F``; ``NoConvergence`` after ``max_sweeps``.
    """
    A = hermitize(M, hermiticity_tol).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(A))
    threshold = rtol * scale
    sweeps = 0
    if n > 1 and scale > 0.0 and _offdiag_norm(A) > threshold:
        rounds = _round_robin(n)
        idx = np.arange(n)
        while True:
            if sweeps >= max_sweeps:
                raise NoConvergence(
                    f"Jacobi did not converge in {max_sweeps} sweeps "
                    f"(off-diagonal norm {_offdiag_norm(A):.3e})"
                )
            for P, Q in rounds:
                b = A[P, Q]
                absb = np.abs(b)
                active = absb > 0.0
                if not np.any(active):
                    continue
                P, Q, b, absb = P[active], Q[active], b[active], absb[active]
                theta = (A[Q, Q].real - A[P, P].real) / (2.0 * absb)
                with np.errstate(over="ignore"):
                    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = np.conj(b) / absb  # e^{-i phi}
                # 2x2 block on (p, q): [[c, s], [-ph*s, ph*c]]
                g1 = np.ones(n, dtype=complex)
                g2 = np.zeros(n, dtype=complex)
                g1[P] = c
                g1[Q] = ph * c
                g2[P] = -ph * s
                g2[Q] = s
                swap = idx.copy()
                swap[P] = Q
                swap[Q] = P
                B = A * g1 + A[:, swap] * g2
                A = np.conj(g1)[:, None] * B + np.conj(g2)[:, None] * B[swap, :]
                A[P, Q] = 0.0
                A[Q, P] = 0.0
                V = V * g1 + V[:, swap] * g2
            sweeps += 1
            if _offdiag_norm(A) <= threshold:
                break
    w = np.diagonal(A).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigen(w[order], V[:, order], sweeps)


def lapack_eigen(M, hermiticity_tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Same contract as :func:`jacobi_eigen`, backed by ``numpy.linalg.eigh``.

    Used as an independent cross-check of the Jacobi solver.
    """
    A = hermitize(M, hermiticity_tol)
    w, V = np.linalg.eigh(A)
    return HermitianEigen(w, V, 0)


def hermitian_eigen(M, hermiticity_tol: float = HERMITICITY_TOL, method: str = "jacobi") -> HermitianEigen:
    if method == "jacobi":
        return jacobi_eigen(M, hermiticity_tol)
    if method == "lapack":
        return lapack_eigen(M, hermiticity_tol)
    raise ValueError(f"unknown eigensolver {method!r}")


def kron(A, B, dim_cap: int = DIM_CAP) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if max(rows, cols) > dim_cap:
        raise SizeOverflow(f"kron dimension {rows}x{cols} exceeds cap {dim_cap}")
    return np.kron(A, B)


def partial_trace_keep(M, local_dim: int, n: int, k: int) -> np.ndarray:
    """Reduced operator on factor ``k`` (1-based) of an ``n``-fold product space."""
    M = as_matrix(M)
    if local_dim < 1 or n < 1:
        raise DimensionMismatch("local_dim and n must be positive")
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"k={k} not in 1..{n}")
    D = local_dim**n
    if M.shape != (D, D):
        raise DimensionMismatch(f"expected {D}x{D} for {n} factors of dim {local_dim}, got {M.shape}")
    left = local_dim ** (k - 1)
    right = local_dim ** (n - k)
    T = M.reshape(left, local_dim, right, left, local_dim, right)
    return np.einsum("aibajb->ij", T)


def trace_norm(M, hermiticity_tol: float = HERMITICITY_TOL) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigen(M, hermiticity_tol).eigenvalues)))


def spectral_apply(
    M,
    f: Callable[[np.ndarray], np.ndarray],
    support_floor: float = SUPPORT_FLOOR,
    hermiticity_tol: float = HERMITICITY_TOL,
    eigen: HermitianEigen | None = None,
) -> np.ndarray:
    """``V diag(f(lambda)) V^H`` restricted to eigenvalues above ``support_floor``.

    Eigenvectors with ``lambda <= support_floor`` are dropped, so ``f = log``
    yields the logarithm on the support and zero on the numerical kernel.
    """
    if eigen is None:
        eigen = hermitian_eigen(M, hermiticity_tol)
    w, V = eigen.eigenvalues, eigen.eigenvectors
    keep = w > support_floor
    Vk = V[:, keep]
    fw = np.asarray(f(w[keep]), dtype=float)
    return (Vk * fw) @ Vk.conj().T
