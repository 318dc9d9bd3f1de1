"""Exact type-class combinatorics and the constructions built on it.

Big integers are Python ``int``; no floating point enters any count or any
power comparison. Floats appear only when a logarithm is finally taken.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .entropy import CLIP, shannon, von_neumann
from .errors import (
    BoundViolation,
    DimensionMismatch,
    MarginalViolation,
    NotMultiple,
    NTooSmall,
    SizeOverflow,
)
from .states import (
    DEFAULT_SECTOR,
    DensityMatrix,
    RationalSpectrum,
    density_matrix,
    from_rational_spectrum,
)

MARGINAL_TOL = 1e-8
KLEIN_SLACK = 1e-9
LN2 = math.log(2.0)


def ln_bignat(x: int) -> float:
    """Natural log of a positive integer of any size.

    Keeps the top 64 bits as the mantissa and adds ``shift * ln 2``.
    """
    if x <= 0:
        raise ValueError("ln_bignat needs a positive integer")
    shift = max(x.bit_length() - 64, 0)
    return math.log(x >> shift) + shift * LN2


@dataclass(frozen=True)
class TypeClass:
    """Strings of length ``n`` with exactly ``counts[j] = n * r_j`` copies of symbol j."""

    n: int
    counts: tuple[int, ...]
    spectrum: RationalSpectrum

    @classmethod
    def of(cls, s: RationalSpectrum, n: int) -> "TypeClass":
        if n < 1 or n % s.common_denominator:
            raise NotMultiple(f"n={n} is not a positive multiple of {s.common_denominator}")
        counts = tuple(int(r * n) for r in s.entries)
        return cls(n, counts, s)

    def __post_init__(self):
        if sum(self.counts) != self.n:
            raise ValueError("counts must sum to n")
        if any(Fraction(m, self.n) != r for m, r in zip(self.counts, self.spectrum.entries)):
            raise ValueError("counts must equal n * r_j exactly")


def multinomial_counts(counts: Sequence[int]) -> int:
    """``(sum m)! / prod(m_j!)`` as a product of binomials."""
    total, out = 0, 1
    for m in counts:
        if m < 0:
            raise ValueError("counts must be non-negative")
        total += m
        out *= math.comb(total, m)
    return out


def multinomial(tc: TypeClass) -> int:
    return multinomial_counts(tc.counts)


def type_class_entropy_rate(tc: TypeClass, kb: float = 1.0) -> float:
    return kb * ln_bignat(multinomial(tc)) / tc.n


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    rate: float
    target: float
    gap: float
    bound: float


def convergence_table(s: RationalSpectrum, n_max: int, kb: float = 1.0) -> list[ConvergenceRow]:
    """One row per multiple ``n`` of the common denominator up to ``n_max``.

    ``bound`` is the method-of-types slack ``rank * ln(n + 1) / n``, so every
    row should satisfy ``0 <= gap <= bound`` up to round-off.
    """
    q = s.common_denominator
    if n_max < q:
        raise ValueError(f"n_max={n_max} is below the common denominator {q}")
    target = shannon(s.floats(), kb)
    rows = []
    for n in range(q, n_max + 1, q):
        rate = type_class_entropy_rate(TypeClass.of(s, n), kb)
        rows.append(ConvergenceRow(n, rate, target, target - rate, kb * s.rank * math.log(n + 1) / n))
    return rows


def sandwich_ok(row: ConvergenceRow, tol: float = 1e-12) -> bool:
    return -tol <= row.gap <= row.bound + tol


# -- the simulation state Omega ----------------------------------------------


def type_class_indices(counts: Sequence[int]) -> list[int]:
    """Flat indices (lexicographic symbol strings) of one type class."""
    ell, n = len(counts), sum(counts)
    target = tuple(counts)
    out = []
    for word in itertools.product(range(ell), repeat=n):
        if tuple(word.count(j) for j in range(ell)) == target:
            idx = 0
            for sym in word:
                idx = idx * ell + sym
            out.append(idx)
    return out


def build_omega(
    s: RationalSpectrum,
    n: int,
    dim_cap: int = linalg.DIM_CAP,
    basis: np.ndarray | None = None,
) -> DensityMatrix:
    """Uniform state on the span of the type-class product vectors.

    Product vectors are ``n``-fold tensor products of eigenvectors of
    ``from_rational_spectrum(s)`` (the standard basis, or the columns of
    ``basis`` when given), enumerated in lexicographic order.
    """
    tc = TypeClass.of(s, n)
    D = s.rank**n
    if D > dim_cap:
        raise SizeOverflow(f"dimension {s.rank}^{n} = {D} exceeds cap {dim_cap}")
    idx = type_class_indices(tc.counts)
    diag = np.zeros(D)
    diag[idx] = 1.0 / len(idx)
    if basis is None:
        return density_matrix([(DEFAULT_SECTOR, diag)])
    U = _kron_power(np.asarray(basis, dtype=complex), n)
    return density_matrix([(DEFAULT_SECTOR, (U * diag) @ U.conj().T)])


def _kron_power(A: np.ndarray, n: int) -> np.ndarray:
    out = A
    for _ in range(n - 1):
        out = np.kron(out, A)
    return out


def _single_block(omega: DensityMatrix) -> np.ndarray:
    if not omega.is_single_block:
        raise DimensionMismatch("expected a single-block state")
    return omega.blocks[0][1]


def verify_marginals(omega: DensityMatrix, s: RationalSpectrum, n: int, rho: DensityMatrix | None = None) -> float:
    """Largest trace distance ``||omega(k) - rho||_1`` over the n one-site marginals."""
    W = _single_block(omega)
    d = s.rank
    if W.shape[0] != d**n:
        raise DimensionMismatch(f"state has dim {W.shape[0]}, expected {d}^{n}")
    R = (rho if rho is not None else from_rational_spectrum(s)).blocks[0][1]
    return max(linalg.trace_norm(linalg.partial_trace_keep(W, d, n, k) - R) for k in range(1, n + 1))


def _check_marginals(omega, s, n, rho=None):
    dev = verify_marginals(omega, s, n, rho)
    if dev > MARGINAL_TOL:
        raise MarginalViolation(f"marginal deviation {dev:.3e} exceeds {MARGINAL_TOL:.0e}")


def site_operator(L1: np.ndarray, n: int, k: int) -> np.ndarray:
    """``1 (x) ... (x) L1 (x) ... (x) 1`` with ``L1`` on factor ``k`` (1-based)."""
    d = L1.shape[0]
    return np.kron(np.kron(np.eye(d ** (k - 1)), L1), np.eye(d ** (n - k)))


def l_operator_check(
    omega: DensityMatrix, s: RationalSpectrum, n: int, rho: DensityMatrix | None = None
) -> tuple[float, float]:
    """Both sides of ``Tr(Omega L) = n Tr(rho L1)`` with ``L1 = ln rho``.

    ``L`` is assembled explicitly as a sum of single-site operators on the
    full product space; the right side uses only the one-site state.
    """
    rho = rho if rho is not None else from_rational_spectrum(s)
    _check_marginals(omega, s, n, rho)
    W = _single_block(omega)
    R = rho.blocks[0][1]
    L1 = linalg.spectral_apply(R, np.log, CLIP, eigen=rho.eigens[0])
    L = sum(site_operator(L1, n, k) for k in range(1, n + 1))
    lhs = float(np.einsum("ij,ji->", W, L).real)
    rhs = n * float(np.trace(R @ L1).real)
    return lhs, rhs


def klein_bound_check(
    omega: DensityMatrix, s: RationalSpectrum, n: int, kb: float = 1.0, rho: DensityMatrix | None = None
) -> tuple[float, float]:
    """``(S(Omega), n * S(rho))``; raises ``BoundViolation`` if the first exceeds the second."""
    rho = rho if rho is not None else from_rational_spectrum(s)
    _check_marginals(omega, s, n, rho)
    s_omega = von_neumann(omega, kb)
    n_svn = n * von_neumann(rho, kb)
    if s_omega > n_svn + KLEIN_SLACK * max(kb, 1.0):
        raise BoundViolation(f"S(Omega)={s_omega!r} exceeds n*S(rho)={n_svn!r}")
    return s_omega, n_svn


AUGMENTED_SPECTRUM = RationalSpectrum((Fraction(2, 3), Fraction(1, 3)))


def augmented_omega(alpha: float = 0.0) -> DensityMatrix:
    """Rank-4 uniform state for spectrum (2/3, 1/3), n = 3.

    The type class {uud, udu, duu} plus the correlated vector
    ``sqrt(2/3) uuu + e^{i alpha} sqrt(1/3) ddd`` (u = index 0, d = index 1).
    """
    vecs = np.zeros((8, 4), dtype=complex)
    for col, idx in enumerate(type_class_indices((2, 1))):
        vecs[idx, col] = 1.0
    vecs[0, 3] = math.sqrt(2.0 / 3.0)
    vecs[7, 3] = np.exp(1j * alpha) * math.sqrt(1.0 / 3.0)
    return density_matrix([(DEFAULT_SECTOR, vecs @ vecs.conj().T / 4.0)])


# -- power bracketing ----------------------------------------------------------


@dataclass(frozen=True)
class BracketRow:
    N: int
    n: int
    m: int
    lhs_ok: bool
    rhs_ok: bool
    rate: float


def theorem1_bracket(N: int, n: int) -> BracketRow:
    """The unique ``m`` with ``2^m <= N^n < 2^(m+1)``, checked in exact integers."""
    if N < 2 or n < 1:
        raise ValueError("need N >= 2 and n >= 1")
    power = N**n
    m = power.bit_length() - 1
    return BracketRow(N, n, m, (1 << m) <= power, power < (1 << (m + 1)), m / n * LN2)


# -- concentration --------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent PCG64 substream for one trial; order of evaluation is irrelevant."""
    return np.random.default_rng([seed, trial])


def concentration_sample(s: RationalSpectrum, n: int, trials: int, c: float, seed: int = 0) -> float:
    """Fraction of trials whose every symbol count lies in ``[(n - c sqrt n) r, (n + c sqrt n) r]``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    p = s.floats()
    p = p / p.sum()
    # count in [(n - w) r, (n + w) r]  <=>  count / r in [n - w, n + w]; count / r is exact
    lo = n - c * math.sqrt(n)
    hi = n + c * math.sqrt(n)
    hits = 0
    for t in range(trials):
        counts = trial_rng(seed, t).multinomial(n, p)
        hits += all(lo <= Fraction(int(m)) / r <= hi for m, r in zip(counts, s.entries))
    return hits / trials


# -- semicontinuity sequence ----------------------------------------------------


def growth_paper(N: int) -> int:
    return N * N


def growth_corrected(N: int) -> int:
    return 1 << (N * N)


GROWTH = {"paper": growth_paper, "corrected": growth_corrected}


@dataclass(frozen=True)
class SemicontinuityRow:
    N: int
    trace_distance: float
    entropy: float
    excess: float  # (ln N + ln D) / N, the contribution of the added uniform block


def semicontinuity_sequence(
    s: RationalSpectrum,
    N_list: Iterable[int],
    dim_growth: Callable[[int], int] = growth_corrected,
    kb: float = 1.0,
) -> list[SemicontinuityRow]:
    """Closed-form spectra of ``rho - (1/N)|phi_1><phi_1| + (1/N) pi(D)``.

    ``D = dim_growth(N)`` new dimensions orthogonal to the range of ``rho``
    each carry weight ``1 / (N D)``. Nothing is materialized: the trace
    distance is summed in exact rationals, the entropy uses ``ln D`` of the
    big integer ``D``.
    """
    r = list(s.entries)
    rows = []
    for N in N_list:
        if N < 1 or r[0] - Fraction(1, N) < 0:
            raise NTooSmall(f"N={N} is below 1/r_1 = {1 / r[0]}")
        D = dim_growth(N)
        if D < 1:
            raise ValueError("dim_growth must return a positive integer")
        dist = abs(-Fraction(1, N)) + D * Fraction(1, N * D)
        head = [float(r[0] - Fraction(1, N))] + [float(x) for x in r[1:]]
        s_head = math.fsum(-x * math.log(x) for x in head if x > 0)
        excess = (math.log(N) + ln_bignat(D)) / N
        rows.append(SemicontinuityRow(N, float(dist), kb * (s_head + excess), kb * excess))
    return rows
