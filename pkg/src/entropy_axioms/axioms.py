"""Functional checks of the entropy axioms and the majorization order.

Every checker returns an :class:`AxiomReport` whose ``pass_`` flag is
``max_violation <= tolerance``. Randomized checks draw each trial from its own
PCG64 substream ``default_rng([seed, trial])``.
"""

import enum
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from . import linalg
from .entropy import CLIP, renyi_of_spectrum, shannon, von_neumann
from .errors import NotNormalized, UniformSpectrum
from .large_numbers import (
    TypeClass,
    convergence_table,
    trial_rng,
    type_class_entropy_rate,
)
from .states import (
    DensityMatrix,
    RationalSpectrum,
    conjugate,
    density_matrix,
    diagonal_state,
    pure,
    qlb,
    random_density,
    random_unitary,
    spectrum,
    tensor,
    tensor_power,
)

AXIOM_TOL = {"A": 1e-9, "B": 1e-9, "C": 1e-12, "D": 1e-9}
SCHUR_SLACK = 1e-10


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    trials: int
    max_violation: float
    pass_: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("pass_")
        return d


def _report(axiom: str, violations: Sequence[float], kb: float = 1.0) -> AxiomReport:
    # violations are entropy differences, so they carry the units of kb
    tol = AXIOM_TOL[axiom] * max(kb, 1.0)
    worst = max(violations) if violations else 0.0
    return AxiomReport(axiom, len(violations), worst, worst <= tol)


def axiom_A_violation(rho: DensityMatrix, psi, kb: float = 1.0, dim_cap: int = linalg.DIM_CAP) -> float:
    """Worst of ``|S(rho (x) psi) - S(rho)|`` and ``|S(psi (x) rho) - S(rho)|``."""
    p = pure(psi)
    s = von_neumann(rho, kb)
    return max(
        abs(von_neumann(tensor(rho, p, dim_cap), kb) - s),
        abs(von_neumann(tensor(p, rho, dim_cap), kb) - s),
    )


def check_axiom_A(rho: DensityMatrix, psi, kb: float = 1.0, dim_cap: int = linalg.DIM_CAP) -> AxiomReport:
    return _report("A", [axiom_A_violation(rho, psi, kb, dim_cap)], kb)


def check_axiom_B(rho: DensityMatrix, seed: int = 0, trials: int = 1, kb: float = 1.0) -> AxiomReport:
    """Random block-local unitaries; none ever mixes two sectors."""
    s = von_neumann(rho, kb)
    violations = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        us = [random_unitary(A.shape[0], rng=rng) for _, A in rho.blocks]
        violations.append(abs(von_neumann(conjugate(rho, us), kb) - s))
    return _report("B", violations, kb)


def check_axiom_C(M: int, N: int, kb: float = 1.0) -> AxiomReport:
    """Strict increase ``S(pi(M)) > S(pi(N))`` with margin ``kb ln(M/N)``."""
    if M <= N:
        raise ValueError("check_axiom_C needs M > N")
    sm, sn = von_neumann(qlb(M), kb), von_neumann(qlb(N), kb)
    violation = abs((sm - sn) - kb * math.log(M / N))
    if not sm > sn:
        violation = math.inf
    return _report("C", [violation], kb)


def check_axiom_D(rho: DensityMatrix, n: int, kb: float = 1.0, dim_cap: int = linalg.DIM_CAP) -> AxiomReport:
    violation = abs(von_neumann(tensor_power(rho, n, dim_cap), kb) - n * von_neumann(rho, kb))
    return _report("D", [violation], kb)


# -- majorization -----------------------------------------------------------------


class Relation(enum.Enum):
    MORE_MIXED = "MoreMixed"
    LESS_MIXED = "LessMixed"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class MajorizationVerdict:
    relation: Relation
    max_partial_sum_gap: float
    partial_sums: tuple[tuple, tuple] = ((), ())


def _prepare(a, b):
    exact = all(isinstance(x, (Fraction, int)) for x in list(a) + list(b))
    if exact:
        a = [Fraction(x) for x in a]
        b = [Fraction(x) for x in b]
    else:
        a = [float(x) for x in a]
        b = [float(x) for x in b]
    size = max(len(a), len(b))
    zero = Fraction(0) if exact else 0.0
    a = sorted(a + [zero] * (size - len(a)), reverse=True)
    b = sorted(b + [zero] * (size - len(b)), reverse=True)
    return exact, a, b


def majorizes(a, b, tol: float = 1e-12) -> MajorizationVerdict:
    """Compare descending partial sums of two spectra.

    ``MORE_MIXED`` means ``a`` is more mixed than ``b``: every partial sum of
    ``a`` is at most the matching one of ``b``, and at least one is smaller by
    more than ``tol``. Sequences of ``Fraction`` are compared exactly.
    """
    exact, a, b = _prepare(a, b)
    tol = 0 if exact else tol
    for name, v in (("a", a), ("b", b)):
        total = sum(v) if exact else math.fsum(v)
        if abs(total - 1) > tol or any(x < -tol for x in v):
            raise NotNormalized(f"spectrum {name} is not normalized (sum {total})")
    if all(abs(x - y) <= tol for x, y in zip(a, b)):
        rel = Relation.EQUAL
    else:
        rel = None
    pa, pb, sa, sb = [], [], 0, 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        pa.append(sa)
        pb.append(sb)
    diffs = [x - y for x, y in zip(pa, pb)]
    gap = float(max(abs(d) for d in diffs))
    if rel is None:
        a_below = all(d <= tol for d in diffs)
        b_below = all(d >= -tol for d in diffs)
        if a_below and any(d < -tol for d in diffs):
            rel = Relation.MORE_MIXED
        elif b_below and any(d > tol for d in diffs):
            rel = Relation.LESS_MIXED
        elif a_below and b_below:
            rel = Relation.EQUAL
        else:
            rel = Relation.INCOMPARABLE
    return MajorizationVerdict(rel, gap, (tuple(pa), tuple(pb)))


def _random_simplex(rng, d: int) -> np.ndarray:
    x = rng.exponential(size=d)
    return x / x.sum()


def birkhoff_mixture(rng, sigma: np.ndarray) -> np.ndarray:
    """``T sigma`` with ``T`` a convex mixture of at most ``d`` random permutations."""
    d = sigma.size
    k = int(rng.integers(1, d + 1))
    weights = _random_simplex(rng, k)
    out = np.zeros(d)
    for w in weights:
        out += w * sigma[rng.permutation(d)]
    return out


def schur_concavity_scan(
    functional: Callable[[np.ndarray], float],
    trials: int,
    seed: int = 0,
    max_dim: int = 8,
) -> tuple[int, float]:
    """Count pairs ``rho > sigma`` (by construction) where the functional drops.

    Returns ``(violations, max_gap)`` with ``max_gap`` the largest observed
    ``functional(sigma) - functional(rho)`` (negative when none drop).
    """
    violations, max_gap = 0, -math.inf
    for t in range(trials):
        rng = trial_rng(seed, t)
        d = int(rng.integers(2, max_dim + 1))
        sigma = _random_simplex(rng, d)
        rho = birkhoff_mixture(rng, sigma)
        gap = functional(sigma) - functional(rho)
        max_gap = max(max_gap, gap)
        if gap > SCHUR_SLACK:
            violations += 1
    return violations, max_gap


def exact_shannon(p: Sequence[Fraction]) -> "mpmath.mpf":
    """``-sum p ln p`` evaluated by mpmath at the current working precision."""
    total = mpmath.mpf(0)
    for x in p:
        if x > 0:
            q = mpmath.mpf(x.numerator) / x.denominator
            total -= q * mpmath.log(q)
    return total


def check_axiom_C_prime(a: Sequence[Fraction], b: Sequence[Fraction], functional=exact_shannon, dps: int = 50) -> bool:
    """Strict Schur-concavity on an exactly represented pair.

    The order is decided in rational arithmetic; the entropies are compared
    at ``dps`` decimal digits so strictness is not lost to round-off.
    Returns ``True`` when ``a`` is not strictly more mixed than ``b``
    (nothing to check) or when ``S(a) > S(b)`` strictly.
    """
    if majorizes(a, b).relation is not Relation.MORE_MIXED:
        return True
    with mpmath.workdps(dps):
        return bool(functional(a) > functional(b))


@dataclass(frozen=True)
class SupStep:
    epsilon: float
    entropy: float
    relation: Relation


def uhlmann_sup_approx(rho: DensityMatrix, steps: int = 40, kb: float = 1.0) -> list[SupStep]:
    """States below ``rho`` in the mixing order whose entropy climbs to ``S(rho)``.

    Step ``k`` moves ``eps_k = 2^-k r_min`` from the smallest positive
    eigenvalue to the largest. A single-eigenvalue ``rho`` admits nothing
    strictly below it, so the constant sequence is returned.
    """
    r = spectrum(rho)
    r = np.where(r < CLIP, 0.0, r)
    support = r[r > 0]
    if support.size < 2:
        s = von_neumann(rho, kb)
        return [SupStep(0.0, s, Relation.EQUAL) for _ in range(steps)]
    i_max, i_min = 0, support.size - 1
    r_min = support[i_min]
    out = []
    for k in range(1, steps + 1):
        eps = r_min * 2.0**-k
        sig = support.copy()
        sig[i_max] += eps
        sig[i_min] -= eps
        verdict = majorizes(r, sig)
        out.append(SupStep(eps, shannon(sig / math.fsum(sig), kb), verdict.relation))
    return out


def sup_gap_bound(rho: DensityMatrix, eps: float, kb: float = 1.0) -> float:
    """Upper bound on ``S(rho) - S(sigma_eps)`` from concavity along the path."""
    r = spectrum(rho)
    support = r[r >= CLIP]
    if support.size < 2:
        return 0.0
    return kb * eps * math.log((support[0] + eps) / (support[-1] - eps))


# -- Renyi discrimination --------------------------------------------------------


@dataclass(frozen=True)
class RenyiRow:
    alpha: float
    renyi: float
    axiom_e_limit: float
    axiom_e_rate: float  # (1/n) ln multinomial at the largest admissible n <= n_max
    bound: float
    separation: float
    additivity_violation: float
    schur_violations: int
    qlb_violation: float
    excluded: bool


def renyi_discrimination_report(
    s: RationalSpectrum,
    alphas: Sequence[float],
    n_max: int = 3000,
    kb: float = 1.0,
    seed: int = 0,
    schur_trials: int = 1000,
) -> list[RenyiRow]:
    """Show each Renyi order passes the A-D style checks yet misses the type-class limit.

    ``excluded`` is ``separation > bound``: the distance between the Renyi
    value and the Shannon limit cannot be closed by the method-of-types slack
    at ``n_max``.
    """
    if len(set(s.entries)) == 1:
        raise UniformSpectrum("uniform spectra give every Renyi order the same value")
    p = s.floats()
    limit = shannon(p, kb)
    last = convergence_table(s, n_max, kb)[-1]
    rho = diagonal_state(p)
    out = []
    for alpha in alphas:
        value = renyi_of_spectrum(p, alpha, kb)
        # additivity over tensor powers, on the exact product spectrum
        add = max(
            abs(renyi_of_spectrum(spectrum(tensor_power(rho, n)), alpha, kb) - n * value)
            for n in (2, 3)
        )
        viol, _ = schur_concavity_scan(lambda q: renyi_of_spectrum(q, alpha), schur_trials, seed)
        qlb_dev = max(abs(renyi_of_spectrum(np.full(N, 1.0 / N), alpha, kb) - kb * math.log(N)) for N in range(1, 65))
        sep = abs(value - limit)
        out.append(
            RenyiRow(alpha, value, limit, last.rate, last.bound, sep, add, viol, qlb_dev, sep > last.bound)
        )
    return out


def type_class_rate(s: RationalSpectrum, n: int, kb: float = 1.0) -> float:
    return type_class_entropy_rate(TypeClass.of(s, n), kb)


# -- standard corpus ---------------------------------------------------------------


def _random_block_state(rng, max_dim: int) -> DensityMatrix:
    """Random state with one to three sectors of total dimension <= max_dim."""
    nblocks = int(rng.integers(1, 4))
    dims = [int(rng.integers(1, max(2, max_dim // nblocks) + 1)) for _ in range(nblocks)]
    weights = _random_simplex(rng, nblocks)
    blocks = []
    for i, (d, w) in enumerate(zip(dims, weights)):
        sub = random_density(d, int(rng.integers(1, d + 1)), rng=rng)
        blocks.append((f"q{i}", w * sub.blocks[0][1]))
    return density_matrix(blocks)


def run_axiom_suite(trials: int = 500, seed: int = 0, kb: float = 1.0, schur_trials: int = 10_000) -> list[AxiomReport]:
    """Seeded corpus for axioms A-D plus the Schur-concavity scans.

    A: random rho (dim 1..6, random rank) with a random vector (dim 1..6),
       both tensor orders.
    B: states with 1-3 sectors, total dim <= 8, block-local unitaries.
    C: pairs N < M drawn from 1..1024.
    D: random rho with dim 1..3 and n in 1..4 (dimension <= 81).
    Schur: shannon and von Neumann on diagonal states, ``schur_trials`` pairs.
    """
    a, b, c, d = [], [], [], []
    for t in range(trials):
        rng = trial_rng(seed, t)
        dim = int(rng.integers(1, 7))
        rho = random_density(dim, int(rng.integers(1, dim + 1)), rng=rng)
        k = int(rng.integers(1, 7))
        psi = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        a.append(axiom_A_violation(rho, psi, kb))

        rho = _random_block_state(rng, 8)
        us = [random_unitary(A.shape[0], rng=rng) for _, A in rho.blocks]
        b.append(abs(von_neumann(conjugate(rho, us), kb) - von_neumann(rho, kb)))

        N = int(rng.integers(1, 1024))
        M = int(rng.integers(N + 1, 1025))
        c.append(check_axiom_C(M, N, kb).max_violation)

        dim = int(rng.integers(1, 4))
        n = int(rng.integers(1, 5)) if dim < 3 else int(rng.integers(1, 4))
        rho = random_density(dim, int(rng.integers(1, dim + 1)), rng=rng)
        d.append(check_axiom_D(rho, n, kb).max_violation)
    reports = [_report("A", a, kb), _report("B", b, kb), _report("C", c, kb), _report("D", d, kb)]
    sv, _ = schur_concavity_scan(lambda p: shannon(p), schur_trials, seed)
    reports.append(AxiomReport("schur-shannon", schur_trials, float(sv), sv == 0))
    sv, _ = schur_concavity_scan(lambda p: von_neumann(diagonal_state(p)), schur_trials, seed + 1)
    reports.append(AxiomReport("schur-von-neumann", schur_trials, float(sv), sv == 0))
    return reports
