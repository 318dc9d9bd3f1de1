"""Command-line front end: ``entropy-axioms <command> [options]``.

Every command validates its inputs, computes the whole result, and only then
writes CSV (default) or JSON to stdout or ``--out``. Floats are written with
17 significant digits in both formats, so the two carry identical values.

Exit codes: 0 success; 1 a checked property failed; 2 invalid input.
``majorize`` uses 0 MoreMixed, 1 LessMixed, 3 Equal, 4 Incomparable.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .axioms import Relation, majorizes, run_axiom_suite
from .entropy import renyi, von_neumann
from .errors import EntropyAxiomsError
from .large_numbers import (
    AUGMENTED_SPECTRUM,
    GROWTH,
    TypeClass,
    augmented_omega,
    build_omega,
    concentration_sample,
    convergence_table,
    klein_bound_check,
    l_operator_check,
    multinomial,
    sandwich_ok,
    semicontinuity_sequence,
    theorem1_bracket,
    verify_marginals,
)
from .states import (
    RationalSpectrum,
    dumps,
    from_rational_spectrum,
    load,
    qlb,
    random_density,
    spectrum,
)

MAJORIZE_EXIT = {
    Relation.MORE_MIXED: 0,
    Relation.LESS_MIXED: 1,
    Relation.EQUAL: 3,
    Relation.INCOMPARABLE: 4,
}
RANK_FLOOR = 1e-12
L_OPERATOR_TOL = 1e-8
MARGINAL_EXACT_TOL = 1e-10


class UsageError(Exception):
    pass


@dataclass
class Section:
    """A table (``columns`` + ``rows``) or, with ``columns=None``, key/value pairs."""

    name: str
    rows: list
    columns: list[str] | None = None


@dataclass
class Result:
    sections: list[Section]
    exit_code: int = 0
    raw: str | None = None  # pre-rendered output (state files)


def fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _csv_cell(x) -> str:
    s = fmt_number(x)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _json_value(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float) and math.isinf(x):
        return json.dumps(fmt_number(x))
    if isinstance(x, (int, float)):
        return fmt_number(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    return json.dumps(str(x))


def render_csv(result: Result) -> str:
    out = []
    for i, sec in enumerate(result.sections):
        if i:
            out.append("")
        if sec.columns is None:
            out.append("key,value")
            out.extend(f"{_csv_cell(k)},{_csv_cell(v)}" for k, v in sec.rows)
        else:
            out.append(",".join(sec.columns))
            out.extend(",".join(_csv_cell(v) for v in row) for row in sec.rows)
    return "\n".join(out) + "\n"


def _json_section(sec: Section, indent: str) -> str:
    if sec.columns is None:
        items = [f"{indent}  {json.dumps(k)}: {_json_value(v)}" for k, v in sec.rows]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    recs = []
    for row in sec.rows:
        body = ", ".join(f"{json.dumps(c)}: {_json_value(v)}" for c, v in zip(sec.columns, row))
        recs.append(f"{indent}  {{{body}}}")
    return "[\n" + ",\n".join(recs) + "\n" + indent + "]"


def render_json(result: Result) -> str:
    if len(result.sections) == 1:
        return _json_section(result.sections[0], "") + "\n"
    items = [f"  {json.dumps(s.name)}: {_json_section(s, '  ')}" for s in result.sections]
    return "{\n" + ",\n".join(items) + "\n}\n"


# -- argument helpers ---------------------------------------------------------------


def parse_spectrum(text: str) -> RationalSpectrum:
    try:
        return RationalSpectrum.parse(text)
    except EntropyAxiomsError as exc:
        raise UsageError(str(exc)) from exc


def _load_state(path):
    try:
        return load(path)
    except OSError as exc:
        raise UsageError(f"cannot read state file {path}: {exc.strerror}") from exc
    except EntropyAxiomsError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _positive(name, value):
    if value < 1:
        raise UsageError(f"{name} must be a positive integer, got {value}")


# -- commands ------------------------------------------------------------------------


def cmd_entropy(args) -> Result:
    rho = _load_state(args.state_file)
    if args.alpha is not None and (args.alpha <= 0 or args.alpha == 1):
        raise UsageError("--alpha must be > 0 and != 1")
    spec = spectrum(rho)
    rows = [("von_neumann", von_neumann(rho, args.kb))]
    if args.alpha is not None:
        rows.append(("alpha", float(args.alpha)))
        rows.append(("renyi", renyi(rho, args.alpha, args.kb)))
    rows.append(("dim", rho.dim))
    rows.append(("rank", int((spec > RANK_FLOOR).sum())))
    rows.append(("sectors", ";".join(rho.sectors)))
    summary = Section("summary", rows)
    table = Section("spectrum", [(i, float(x)) for i, x in enumerate(spec)], ["index", "eigenvalue"])
    return Result([summary, table])


def cmd_converge(args) -> Result:
    s = parse_spectrum(args.spectrum)
    if args.nmax < s.common_denominator:
        raise UsageError(f"--nmax must be at least the common denominator {s.common_denominator}")
    rows = convergence_table(s, args.nmax, args.kb)
    ok = all(sandwich_ok(r, 1e-12 * max(args.kb, 1.0)) for r in rows)
    table = [(r.n, r.rate, r.target, r.gap, r.bound) for r in rows]
    return Result([Section("rows", table, ["n", "rate", "target", "gap", "bound"])], 0 if ok else 1)


def cmd_omega(args) -> Result:
    if args.augmented:
        if args.spectrum is not None and parse_spectrum(args.spectrum) != AUGMENTED_SPECTRUM:
            raise UsageError("--augmented is defined for the spectrum 2/3,1/3 only")
        if args.n is not None and args.n != 3:
            raise UsageError("--augmented is defined for n = 3 only")
        s, n = AUGMENTED_SPECTRUM, 3
        omega = augmented_omega(args.alpha_phase)
        count = None
    else:
        if args.spectrum is None or args.n is None:
            raise UsageError("--spectrum and --n are required (or use --augmented)")
        s, n = parse_spectrum(args.spectrum), args.n
        _positive("--n", n)
        tc = TypeClass.of(s, n)
        count = multinomial(tc)
        omega = build_omega(s, n, args.dim_cap)
    rho = from_rational_spectrum(s)
    dev = verify_marginals(omega, s, n, rho)
    lhs, rhs = l_operator_check(omega, s, n, rho)
    s_omega, n_svn = klein_bound_check(omega, s, n, args.kb, rho)
    rank = int((spectrum(omega) > RANK_FLOOR).sum())
    rows = [
        ("spectrum", str(s)),
        ("n", n),
        ("augmented", bool(args.augmented)),
        ("rank", rank),
    ]
    if count is not None:
        rows.append(("multinomial", count))
    rows += [
        ("entropy_omega", s_omega),
        ("n_times_entropy_rho", n_svn),
        ("klein_margin", n_svn - s_omega),
        ("marginal_deviation", dev),
        ("l_operator_lhs", lhs),
        ("l_operator_rhs", rhs),
        ("l_operator_residual", abs(lhs - rhs)),
    ]
    ok = dev <= MARGINAL_EXACT_TOL and abs(lhs - rhs) <= L_OPERATOR_TOL and (count is None or rank == count)
    return Result([Section("omega", rows)], 0 if ok else 1)


def cmd_majorize(args) -> Result:
    a = spectrum(_load_state(args.state_a))
    b = spectrum(_load_state(args.state_b))
    verdict = majorizes(a, b, args.tol)
    pa, pb = verdict.partial_sums
    table = [(k + 1, float(x), float(y), float(x - y)) for k, (x, y) in enumerate(zip(pa, pb))]
    summary = Section(
        "verdict",
        [("relation", verdict.relation.value), ("max_partial_sum_gap", verdict.max_partial_sum_gap)],
    )
    return Result(
        [summary, Section("partial_sums", table, ["k", "partial_a", "partial_b", "difference"])],
        MAJORIZE_EXIT[verdict.relation],
    )


def cmd_axioms(args) -> Result:
    _positive("--trials", args.trials)
    _positive("--schur-trials", args.schur_trials)
    reports = run_axiom_suite(args.trials, args.seed, args.kb, args.schur_trials)
    rows = [(r.axiom, r.trials, r.max_violation, r.pass_) for r in reports]
    ok = all(r.pass_ for r in reports)
    return Result([Section("reports", rows, ["axiom", "trials", "max_violation", "pass"])], 0 if ok else 1)


def cmd_bracket(args) -> Result:
    if args.N < 2:
        raise UsageError("--N must be >= 2")
    _positive("--nmax", args.nmax)
    rows, ok = [], True
    ln_n = math.log(args.N)
    for n in range(1, args.nmax + 1):
        r = theorem1_bracket(args.N, n)
        err = abs(r.rate - ln_n)
        bound = math.log(2.0) / n
        ok &= r.lhs_ok and r.rhs_ok and err <= bound
        rows.append((r.N, r.n, r.m, r.lhs_ok, r.rhs_ok, args.kb * r.rate, args.kb * ln_n, args.kb * err, args.kb * bound))
    cols = ["N", "n", "m", "lhs_ok", "rhs_ok", "rate", "ln_N", "error", "bound"]
    return Result([Section("rows", rows, cols)], 0 if ok else 1)


def cmd_semicont(args) -> Result:
    s = parse_spectrum(args.spectrum)
    start = math.ceil(1 / s.entries[0])
    if args.Nmax < start:
        raise UsageError(f"--Nmax must be at least ceil(1/r_1) = {start}")
    rows = semicontinuity_sequence(s, range(start, args.Nmax + 1), GROWTH[args.growth], args.kb)
    table = [(r.N, r.trace_distance, r.entropy, r.excess) for r in rows]
    return Result([Section("rows", table, ["N", "trace_distance", "entropy", "excess"])])


def cmd_concentrate(args) -> Result:
    s = parse_spectrum(args.spectrum)
    _positive("--n", args.n)
    _positive("--trials", args.trials)
    if args.c < 0:
        raise UsageError("--c must be non-negative")
    frac = concentration_sample(s, args.n, args.trials, args.c, args.seed)
    rows = [
        ("spectrum", str(s)),
        ("n", args.n),
        ("c", float(args.c)),
        ("trials", args.trials),
        ("seed", args.seed),
        ("fraction", frac),
    ]
    return Result([Section("concentration", rows)])


def cmd_state(args) -> Result:
    if args.kind == "qlb":
        _positive("--N", args.N)
        if args.N > args.dim_cap:
            raise UsageError(f"--N exceeds the dimension cap {args.dim_cap}")
        rho = qlb(args.N, args.sector)
    elif args.kind == "rational":
        if args.spectrum is None:
            raise UsageError("--spectrum is required")
        rho = from_rational_spectrum(parse_spectrum(args.spectrum), args.sector)
    else:
        _positive("--dim", args.dim)
        rank = args.dim if args.rank is None else args.rank
        if not 1 <= rank <= args.dim:
            raise UsageError("--rank must be in 1..--dim")
        rho = random_density(args.dim, rank, args.seed)
    return Result([], raw=dumps(rho))


# -- parser --------------------------------------------------------------------------


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return value


def _kb(text: str) -> float:
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("kb must be a positive finite number")
    return value


def _dim_cap(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("dim-cap must be >= 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb", type=_kb, default=1.0, help="entropy unit constant (default 1, nats)")
    common.add_argument("--seed", type=_seed, default=0, help="64-bit PRNG seed (default 0)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--dim-cap", type=_dim_cap, default=4096, help="largest matrix dimension (default 4096)")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="entropy-axioms",
        description="Axiomatic entropy experiments: type classes, simulation states, majorization.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="entropies of a state file")
    p.add_argument("state_file")
    p.add_argument("--alpha", type=float, default=None, help="also report the Renyi entropy of this order")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("converge", parents=[common], help="type-class entropy rate vs von Neumann")
    p.add_argument("--spectrum", required=True, help='exact rationals, e.g. "2/3,1/3"')
    p.add_argument("--nmax", type=int, default=3000)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("omega", parents=[common], help="simulation state and its checks")
    p.add_argument("--spectrum", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--augmented", action="store_true", help="rank-4 state for 2/3,1/3 with n = 3")
    p.add_argument("--alpha-phase", type=float, default=0.0)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("majorize", parents=[common], help="compare two states in the mixing order")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_majorize)

    p = sub.add_parser("axioms", parents=[common], help="seeded checks of axioms A-D and Schur scans")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--schur-trials", type=int, default=10_000)
    p.set_defaults(func=cmd_axioms, default_format="json")

    p = sub.add_parser("bracket", parents=[common], help="2^m <= N^n < 2^(m+1) in exact integers")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--nmax", type=int, default=200)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("semicont", parents=[common], help="entropy along a trace-norm convergent sequence")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--Nmax", type=int, default=64)
    p.add_argument("--growth", choices=sorted(GROWTH), default="corrected")
    p.set_defaults(func=cmd_semicont)

    p = sub.add_parser("concentrate", parents=[common], help="symbol counts inside the large-numbers window")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_concentrate)

    p = sub.add_parser("state", parents=[common], help="write a state file (JSON)")
    p.add_argument("kind", choices=["qlb", "rational", "random"])
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--spectrum", default=None)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--sector", default="0")
    p.set_defaults(func=cmd_state)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except (UsageError, EntropyAxiomsError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    fmt = args.format or getattr(args, "default_format", "csv")
    if result.raw is not None:
        text = result.raw
    else:
        text = render_json(result) if fmt == "json" else render_csv(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return result.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
