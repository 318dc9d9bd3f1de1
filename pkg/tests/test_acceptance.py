"""Acceptance criteria 1-10, each at its stated tolerance and runtime limit.

Run with ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL line per
criterion is printed in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import io
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from entropy_axioms import axioms, cli, entropy, large_numbers, states
from entropy_axioms.axioms import Relation
from entropy_axioms.states import RationalSpectrum

S = RationalSpectrum.parse
LN2 = math.log(2)


def criterion_1():
    worst = max(abs(entropy.von_neumann(states.qlb(N)) - math.log(N)) for N in range(1, 1025))
    bracket_ok = True
    for N in range(2, 101):
        ln_n = math.log(N)
        for n in range(1, 201):
            row = large_numbers.theorem1_bracket(N, n)
            bracket_ok &= row.lhs_ok and row.rhs_ok and abs(row.m / n * LN2 - ln_n) <= LN2 / n
    return worst <= 1e-12 and bracket_ok, f"max |S(qlb(N)) - ln N| = {worst:.2e}; brackets exact: {bracket_ok}"


def criterion_2():
    s = S("2/3,1/3")
    rows = large_numbers.convergence_table(s, 3000)
    ok = all(
        isinstance(large_numbers.multinomial(large_numbers.TypeClass.of(s, r.n)), int)
        and -1e-12 <= r.gap <= 2 * math.log(r.n + 1) / r.n
        and r.target == pytest.approx(0.636514, abs=1e-6)
        for r in rows
    )
    last = rows[-1]
    ok &= last.n == 3000 and last.gap < 0.00534
    return ok, f"{len(rows)} rows; gap at n=3000 = {last.gap:.6f} (bound {last.bound:.6f})"


def _grid():
    for text in ["1/2,1/2", "2/3,1/3", "1/2,1/4,1/4", "3/5,1/5,1/5"]:
        s = S(text)
        for t in (1, 2, 3):
            n = t * s.common_denominator
            if s.rank**n <= 2187:
                yield s, n


def criterion_3():
    worst = {"marginal": 0.0, "entropy": 0.0, "l_operator": 0.0, "klein_excess": -math.inf}
    ok, cases = True, 0
    for s, n in _grid():
        cases += 1
        omega = large_numbers.build_omega(s, n)
        count = large_numbers.multinomial(large_numbers.TypeClass.of(s, n))
        rank = int(np.count_nonzero(states.spectrum(omega) > 1e-12))
        dev = large_numbers.verify_marginals(omega, s, n)
        s_omega, n_svn = large_numbers.klein_bound_check(omega, s, n)
        lhs, rhs = large_numbers.l_operator_check(omega, s, n)
        ok &= rank == count
        worst["marginal"] = max(worst["marginal"], dev)
        worst["entropy"] = max(worst["entropy"], abs(s_omega - math.log(count)))
        worst["l_operator"] = max(worst["l_operator"], abs(lhs - rhs))
        worst["klein_excess"] = max(worst["klein_excess"], s_omega - n_svn)
    ok &= (
        worst["marginal"] <= 1e-10
        and worst["entropy"] <= 1e-9
        and worst["l_operator"] <= 1e-8
        and worst["klein_excess"] <= 1e-9
    )
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return ok, f"{cases} grid cases; worst: {detail}"


def criterion_4():
    s = S("2/3,1/3")
    n_svn = 3 * entropy.von_neumann(states.from_rational_spectrum(s))
    ok, worst = True, 0.0
    for alpha in (0.0, math.pi / 4, math.pi / 2, math.pi):
        omega = large_numbers.augmented_omega(alpha)
        rank = int(np.count_nonzero(states.spectrum(omega) > 1e-12))
        dev = large_numbers.verify_marginals(omega, s, 3)
        worst = max(worst, dev)
        ok &= rank == 4 and dev <= 1e-10 and math.log(4) <= n_svn
    return ok, f"rank 4 at all phases; marginal deviation {worst:.2e}; ln 4 = {math.log(4):.4f} <= {n_svn:.4f}"


def criterion_5():
    worst = math.inf
    for t in range(1000):
        rng = large_numbers.trial_rng(5, t)
        d = int(rng.integers(1, 7))
        rho = states.random_density(d, rng=rng)
        sigma = states.random_density(d, rng=rng)
        worst = min(worst, entropy.relative_entropy(rho, sigma))
    return worst >= -1e-10, f"min relative entropy over 1000 pairs = {worst:.3e}"


def criterion_6():
    reports = axioms.run_axiom_suite(trials=500, seed=0, schur_trials=100)
    core = [r for r in reports if r.axiom in "ABCD"]
    ok = all(r.trials >= 500 and r.max_violation <= 1e-9 and r.pass_ for r in core)
    detail = "; ".join(f"{r.axiom}: {r.max_violation:.1e} over {r.trials}" for r in core)
    return ok, detail


def criterion_7():
    qlb_ok = all(
        axioms.majorizes([Fraction(1, M)] * M, [Fraction(1, N)] * N).relation
        is (Relation.MORE_MIXED if M > N else Relation.LESS_MIXED if M < N else Relation.EQUAL)
        for M in range(1, 33)
        for N in range(1, 33)
    )
    v_shannon, _ = axioms.schur_concavity_scan(entropy.shannon, 10_000, seed=0)
    v_renyi, _ = axioms.schur_concavity_scan(lambda p: entropy.renyi_of_spectrum(p, 2.0), 10_000, seed=1)
    test_states = [
        states.qlb(2),
        states.from_rational_spectrum(S("2/3,1/3")),
        states.from_rational_spectrum(S("1/2,1/4,1/4")),
        states.from_rational_spectrum(S("3/5,1/5,1/5")),
        states.random_density(4, seed=0),
        states.pure([1, 1]),
    ]
    sup_gap = max(
        abs(entropy.von_neumann(rho) - axioms.uhlmann_sup_approx(rho, steps=40)[-1].entropy) for rho in test_states
    )
    ok = qlb_ok and v_shannon == 0 and v_renyi == 0 and sup_gap <= 1e-6
    return ok, (
        f"QLB order exact: {qlb_ok}; Schur violations shannon {v_shannon}, renyi(2) {v_renyi}; "
        f"sup gap after 40 steps {sup_gap:.1e}"
    )


def criterion_8():
    ok = True
    for text in ("1/2,1/2", "2/3,1/3"):
        rows = large_numbers.semicontinuity_sequence(S(text), range(4, 65))
        for r in rows:
            # summed in exact rationals, then rounded once to the nearest double
            ok &= r.trace_distance == float(Fraction(2, r.N))
            ok &= r.entropy >= r.N * LN2
    quadratic = large_numbers.semicontinuity_sequence(S("1/2,1/2"), range(3, 65), large_numbers.growth_paper)
    excess = [r.excess for r in quadratic]
    ok &= all(b < a for a, b in zip(excess, excess[1:]))
    ok &= all(abs(r.excess - 3 * math.log(r.N) / r.N) <= 1e-12 for r in quadratic)
    return ok, f"corrected growth diverges (S >= N ln 2); quadratic growth excess falls to {excess[-1]:.4f} at N=64"


def criterion_9():
    (row,) = axioms.renyi_discrimination_report(S("2/3,1/3"), [2.0], n_max=3000, schur_trials=1000)
    ok = row.separation >= 0.04 and row.bound < 0.006 and row.excluded
    return ok, f"|renyi(2) - limit| = {row.separation:.4f}; sandwich bound at n=3000 = {row.bound:.5f}"


ARTIFACT_COMMANDS = [
    ["converge", "--spectrum", "2/3,1/3", "--nmax", "3000"],
    ["converge", "--spectrum", "2/3,1/3", "--nmax", "3000", "--format", "json"],
    ["omega", "--spectrum", "2/3,1/3", "--n", "3"],
    ["omega", "--augmented", "--alpha-phase", "0.7", "--format", "json"],
    ["axioms", "--trials", "100", "--schur-trials", "1000", "--seed", "0"],
    ["bracket", "--N", "3", "--nmax", "200"],
    ["semicont", "--spectrum", "1/2,1/2", "--Nmax", "64"],
    ["semicont", "--spectrum", "1/2,1/2", "--Nmax", "64", "--growth", "paper", "--format", "json"],
    ["concentrate", "--spectrum", "1/2,1/2", "--n", "10000", "--c", "4", "--trials", "2000", "--seed", "0"],
    ["state", "random", "--dim", "5", "--rank", "3", "--seed", "12345"],
]


def _artifact(argv):
    out = io.StringIO()
    code = cli.run(argv, out, io.StringIO())
    return code, out.getvalue().encode()


def criterion_10():
    first = [_artifact(a) for a in ARTIFACT_COMMANDS]
    second = [_artifact(a) for a in ARTIFACT_COMMANDS]
    same = first == second and all(code == 0 for code, _ in first)
    # a fresh interpreter reproduces the bytes too
    proc = subprocess.run(
        [sys.executable, "-m", "entropy_axioms.cli", *ARTIFACT_COMMANDS[-2]], capture_output=True, check=False
    )
    fresh = proc.returncode == 0 and proc.stdout == first[-2][1]
    return same and fresh, f"{len(ARTIFACT_COMMANDS)} artifacts byte-identical across runs: {same}; fresh process: {fresh}"


CRITERIA = [
    (1, "Boltzmann-Planck formula and power bracketing", criterion_1, 5),
    (2, "type-class rate converges with the sandwich bound", criterion_2, 30),
    (3, "simulation state grid: marginals, rank, entropy, L-operator, Klein", criterion_3, 60),
    (4, "augmented rank-4 simulation state", criterion_4, 1),
    (5, "Klein positivity of relative entropy", criterion_5, 10),
    (6, "axioms A-D functional suite", criterion_6, 60),
    (7, "majorization order, Schur scans, supremum approximation", criterion_7, 30),
    (8, "semicontinuity sequence under both growth laws", criterion_8, 1),
    (9, "Renyi order 2 excluded by the type-class limit", criterion_9, 30),
    (10, "byte-identical artifacts", criterion_10, None),
]

RESULTS = {}


def evaluate(number, name, func, limit):
    start = time.perf_counter()
    ok, detail = func()
    elapsed = time.perf_counter() - start
    timed_ok = limit is None or elapsed < limit
    status = "PASS" if ok and timed_ok else "FAIL"
    limit_text = f" (limit {limit} s)" if limit is not None else ""
    line = f"{status} criterion {number}: {name}: {detail}; {elapsed:.2f} s{limit_text}"
    RESULTS[number] = line
    return ok, timed_ok, line


@pytest.mark.parametrize("number, name, func, limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, func, limit):
    ok, timed_ok, line = evaluate(number, name, func, limit)
    print(line)
    assert ok, line
    assert timed_ok, line


if __name__ == "__main__":
    failures = 0
    for criterion in CRITERIA:
        ok, timed_ok, line = evaluate(*criterion)
        print(line, flush=True)
        failures += not (ok and timed_ok)
    sys.exit(1 if failures else 0)
