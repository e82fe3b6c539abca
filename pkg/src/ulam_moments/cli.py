"""Command-line front end.

Verbs: table, verify, mc, genfun, elliptic, bounds, polya. CSV is the
primary output (headers always, rationals as "p/q", floats at 17
significant digits); --format json switches to a {"verb", "rows"} object.
Exit codes: 0 success, 1 domain error, 2 verification failure, 64
malformed flags.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from . import elliptic_engine as ell
from . import exact_core, genfun, perm_oracle, walk_lab

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse's default error exit code collides with the verification
    failure code, so malformed flags get their own."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(header: list[str], rows: list[list], args) -> None:
    if args.format == "json":
        payload = {
            "verb": args.verb,
            "rows": [
                {h: (_fmt(v) if isinstance(v, (Fraction, float)) else v)
                 for h, v in zip(header, row)}
                for row in rows
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- verbs


def _cmd_table(args) -> int:
    if args.A:
        rows = []
        for N in range(args.nmax + 1):
            for j in range(args.jmax + 1):
                rows.append([N, j, exact_core.a_array(N, j)])
        _emit(["N", "j", "A"], rows, args)
        return EXIT_OK
    if args.moments:
        rows = []
        for n in range(1, args.nmax + 1):
            for k in range(1, n + 1):
                rows.append(
                    [n, k, exact_core.first_moment(n, k),
                     exact_core.second_moment(n, k)]
                )
        _emit(["n", "k", "first_moment", "second_moment"], rows, args)
        return EXIT_OK
    print("error: choose a table with --A or --moments", file=sys.stderr)
    return EXIT_USAGE


def _cmd_mc(args) -> int:
    est, err = walk_lab.a_monte_carlo(
        args.N, args.j, args.samples, args.seed, workers=args.workers
    )
    exact = exact_core.a_array(args.N, args.j)
    z = (est - exact) / err if err > 0 else 0.0
    _emit(
        ["N", "j", "samples", "seed", "estimate", "stderr", "exact", "z"],
        [[args.N, args.j, args.samples, args.seed, est, err, exact, z]],
        args,
    )
    return EXIT_OK


def _cmd_genfun(args) -> int:
    trunc = genfun.SeriesTruncation(n_max=args.nmax, j_max=args.jmax)
    ser = genfun.alpha_series(args.w, args.x, trunc)
    con = genfun.alpha_contour(args.w, args.x)
    _emit(
        ["w", "x", "alpha_series", "alpha_contour", "tail_bound", "abs_diff"],
        [[args.w, args.x, ser, con, trunc.tail_bound, abs(ser - con)]],
        args,
    )
    return EXIT_OK


def _cmd_elliptic(args) -> int:
    x, w = args.x, args.w
    a1 = ell.a1_closed(x, w)
    a2_ref = ell.a2_quadrature(x, w)
    rows = [[x, w, a1, a2_ref, a1 + a2_ref, "closed", 0.0]]
    a2_chk = ell.a2_checkpoint(x, w)
    rows.append([x, w, a1, a2_chk, a1 + a2_chk, "checkpoint", abs(a2_chk - a2_ref)])
    if w > 0:
        a2_pi, _, _ = ell.a2_pi_combination(x, w)
        rows.append(
            [x, w, a1, a2_pi, a1 + a2_pi, "pi_combination", abs(a2_pi - a2_ref)]
        )
    if args.dump_reduction:
        red = ell.legendre_reduce(x, w)
        payload = {
            "moebius": list(red.moebius),
            "modulus_k": red.modulus_k,
            "xi_constant": red.xi_constant,
            "det": red.det,
            "pf_constant": red.pf_constant,
            "pf_terms": [list(t) for t in red.pf_terms],
            "raw_pf_terms": [list(t) for t in red.raw_pf_terms],
        }
        text = json.dumps(payload, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    _emit(["x", "w", "a1", "a2", "alpha", "method", "residual"], rows, args)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    if args.mode == "bracket":
        b = bounds_mod.bonferroni_bracket(
            args.n, args.k, args.r, args.R_even, args.R_odd
        )
        _emit(
            ["n", "k", "r", "R_even", "R_odd", "lower", "upper", "exact"],
            [[b.n, b.k, b.r, b.R_even, b.R_odd, b.lower, b.upper, b.exact]],
            args,
        )
        return EXIT_OK
    if args.mode == "ratio":
        pairs = []
        for chunk in args.pairs.split(","):
            n_s, k_s = chunk.split(":")
            pairs.append((int(n_s), int(k_s)))
        rows = [[r.n, r.k, r.ratio] for r in bounds_mod.ratio_table(pairs)]
        _emit(["n", "k", "ratio"], rows, args)
        return EXIT_OK
    if args.mode == "chebyshev":
        bound, (xs, ws) = bounds_mod.chebyshev_a_bound(args.N, args.j)
        exact = exact_core.a_array(args.N, args.j)
        _emit(
            ["N", "j", "bound", "x_star", "w_star", "exact_A"],
            [[args.N, args.j, bound, xs, ws, exact]],
            args,
        )
        return EXIT_OK
    # stirling
    approx_log, delta = bounds_mod.stirling_log_first_moment(args.n, args.k)
    exact_log = math.log(float(exact_core.first_moment(args.n, args.k)))
    _emit(
        ["n", "k", "approx_log", "delta", "exact_log"],
        [[args.n, args.k, approx_log, delta, exact_log]],
        args,
    )
    return EXIT_OK


def _cmd_polya(args) -> int:
    partial = walk_lab.polya_series(args.z, args.terms)
    reference = (2 / math.pi) * ell.elliptic_K(args.z)
    _emit(
        ["z", "terms", "partial_sum", "elliptic_value", "abs_diff"],
        [[args.z, args.terms, partial, reference, abs(partial - reference)]],
        args,
    )
    return EXIT_OK


# ---------------------------------------------------------- verify suites


def _check_exact_spot_values() -> None:
    assert exact_core.a_array(1, 0) == 4
    assert exact_core.a_array(1, 1) == 10
    assert exact_core.a_array(1, 2) == 18
    assert exact_core.a_array(2, 0) == 36
    assert exact_core.a_array(0, 7) == 1
    assert exact_core.a_array_direct(2, 2) == exact_core.a_array(2, 2) == 300
    assert exact_core.second_moment(2, 1) == 4
    assert exact_core.second_moment(3, 2) == Fraction(19, 6)
    assert exact_core.second_moment(4, 2) == Fraction(67, 6)


def _check_exact_identities() -> None:
    assert exact_core.check_square_identity(3, 4)
    z = Fraction(3, 2)
    for r in range(5):
        want = exact_core.falling_factorial(z, r) / math.factorial(r)
        assert exact_core.elementary_from_power_sums(r, z) == want, r


def _check_perm_distribution() -> None:
    dist = perm_oracle.z_distribution(3, 2)
    assert dist.counts == {0: 1, 1: 2, 2: 2, 3: 1}
    assert perm_oracle.moment(dist, 2) == exact_core.second_moment(3, 2)
    d42 = perm_oracle.z_distribution(4, 2)
    assert perm_oracle.moment(d42, 2) == exact_core.second_moment(4, 2)
    assert perm_oracle.prob_at_least(4, 2, 1) >= perm_oracle.prob_at_least(4, 2, 2)


def _check_walk_array() -> None:
    for N in range(3):
        for j in range(3):
            assert walk_lab.a_from_walk_exact(N, j) == exact_core.a_array(N, j)
    for N in range(3):
        enum = walk_lab.enumerate_walks(N)
        assert Fraction(enum.returned_count, enum.total) == walk_lab.return_probability(N)


def _check_walk_mc() -> None:
    one = walk_lab.a_monte_carlo(2, 1, 20000, 7)
    two = walk_lab.a_monte_carlo(2, 1, 20000, 7)
    assert one == two
    par = walk_lab.a_monte_carlo(2, 1, 20000, 7, workers=3)
    assert one == par
    assert abs(walk_lab.polya_series(0.4, 300) - (2 / math.pi) * ell.elliptic_K(0.4)) < 1e-10


def _check_kappa() -> None:
    x = 0.07
    assert abs(genfun.kappa2(x, x) - 1 / math.sqrt(1 - 4 * x)) < 1e-14
    assert genfun.kappa(0.0, 0.1, 0.2) == genfun.kappa2(0.1, 0.2)
    assert abs(genfun.kappa1(0.1, 0.2) - 1 / 0.7) < 1e-14


def _check_alpha_routes() -> None:
    for w, x in ((0.1, 0.05), (0.3, 0.1)):
        ser = genfun.alpha_series(w, x)
        con = genfun.alpha_contour(w, x)
        assert abs(ser - con) < 1e-9, (w, x, ser, con)


def _check_roots() -> None:
    x, w = 0.1, 0.2
    c1, c2, d1, d2 = ell.q1_roots(x).roots
    a1, a2, b1, b2 = ell.q2_roots(x, w).roots
    assert abs(c1 * d2 - 1) < 1e-12 and abs(c2 * d1 - 1) < 1e-12
    assert abs(a1 * b2 - 1) < 1e-12 and abs(a2 * b1 - 1) < 1e-12
    assert 0 < a1 < c1 < c2 < a2 < 1 < b1 < d1 < d2 < b2
    for r in (c1, c2, d1, d2):
        assert abs(ell.q1_eval(x, r)) < 1e-11


def _check_a1_variants() -> None:
    for x, w in ((0.1, 0.2), (0.15, 0.3)):
        vals = (ell.a1_residue(x, w), ell.a1_closed(x, w), ell.a1_reduced(x, w))
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(vals[i] - vals[j]) <= 1e-11 * abs(vals[i])


def _check_closed_route() -> None:
    for w, x in ((0.2, 0.1), (0.1, 0.05)):
        closed = ell.alpha_closed(w, x)
        con = genfun.alpha_contour(w, x)
        assert abs(closed - con) < 1e-9, (w, x, closed, con)
    x, w = 0.1, 0.2
    ref = ell.a2_quadrature(x, w)
    assert abs(ell.a2_checkpoint(x, w) - ref) < 1e-10
    val, _, terms = ell.a2_pi_combination(x, w)
    assert abs(val - ref) < 1e-8
    assert len(terms) <= 4 and all(abs(lam) < 1 for _, lam in terms)


def _check_elliptic_k() -> None:
    k = 0.6
    term = 1.0
    acc = 0.0
    for m in range(0, 400):
        if m > 0:
            term *= ((2 * m - 1) / (2 * m)) ** 2 * k * k
        acc += term
        if term < 1e-18:
            break
    series = (math.pi / 2) * acc
    assert abs(ell.elliptic_K(k) - series) < 1e-12


def _check_bonferroni() -> None:
    b = bounds_mod.bonferroni_bracket(4, 2, 1, 2, 1)
    assert b.upper == 3
    assert b.lower == Fraction(-13, 12)
    assert b.exact == Fraction(23, 24)
    assert b.lower <= b.exact <= b.upper


def _check_ratio_and_stirling() -> None:
    row = bounds_mod.ratio_table([(4, 2)])[0]
    assert abs(row.ratio - 67 / 54) < 1e-14
    approx_log, _ = bounds_mod.stirling_log_first_moment(2500, 50)
    exact_log = math.log(float(exact_core.first_moment(2500, 50)))
    assert abs(approx_log - exact_log) <= 0.02 * abs(exact_log)


def _check_chebyshev() -> None:
    bound, _ = bounds_mod.chebyshev_a_bound(1, 1)
    assert bound >= 10 - 1e-9
    bound20, _ = bounds_mod.chebyshev_a_bound(2, 0)
    assert bound20 >= exact_core.a_array(2, 0) - 1e-9


SUITES: dict[str, list[tuple[str, callable]]] = {
    "exact_core": [
        ("spot_values", _check_exact_spot_values),
        ("identities", _check_exact_identities),
    ],
    "perm_oracle": [("distribution", _check_perm_distribution)],
    "walk_lab": [
        ("walk_equals_array", _check_walk_array),
        ("mc_determinism", _check_walk_mc),
    ],
    "genfun": [
        ("kappa", _check_kappa),
        ("alpha_routes", _check_alpha_routes),
    ],
    "elliptic_engine": [
        ("roots", _check_roots),
        ("a1_variants", _check_a1_variants),
        ("closed_route", _check_closed_route),
        ("elliptic_k", _check_elliptic_k),
    ],
    "bounds": [
        ("bonferroni", _check_bonferroni),
        ("ratio_stirling", _check_ratio_and_stirling),
        ("chebyshev", _check_chebyshev),
    ],
}


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    failed = False
    for name in names:
        for check_name, fn in SUITES[name]:
            try:
                fn()
                status = "ok"
            except Exception as exc:  # noqa: BLE001 - report, don't crash
                status = f"FAIL: {type(exc).__name__}"
                failed = True
                print(f"verify {name}.{check_name}: {exc}", file=sys.stderr)
            rows.append([name, check_name, status])
    _emit(["suite", "check", "status"], rows, args)
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> _Parser:
    parser = _Parser(prog="ulam-moments")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("table", help="exact tables (A array or moments)")
    p.add_argument("--A", action="store_true", help="emit the A(N,j) table")
    p.add_argument("--moments", action="store_true", help="emit moment table")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--jmax", type=int, default=4)
    common(p)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("verify", help="run module invariant suites")
    p.add_argument(
        "--suite", choices=tuple(SUITES) + ("all",), default="all"
    )
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo estimate of A(N,j)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("genfun", help="series and contour alpha routes")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--nmax", type=int, default=genfun.DEFAULT_N_MAX)
    p.add_argument("--jmax", type=int, default=genfun.DEFAULT_J_MAX)
    common(p)
    p.set_defaults(func=_cmd_genfun)

    p = sub.add_parser("elliptic", help="closed-form alpha evaluators")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument(
        "--dump-reduction", action="store_true",
        help="emit the Moebius reduction as JSON instead of CSV rows",
    )
    common(p)
    p.set_defaults(func=_cmd_elliptic)

    p = sub.add_parser("bounds", help="brackets, ratios, Stirling, Chebyshev")
    p.add_argument(
        "--mode", choices=("bracket", "ratio", "chebyshev", "stirling"),
        required=True,
    )
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--R-even", dest="R_even", type=int, default=None)
    p.add_argument("--R-odd", dest="R_odd", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--pairs", type=str, default=None,
                   help="comma list of n:k pairs for --mode ratio")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("polya", help="return-probability series partial sums")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--terms", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_polya)

    return parser


def _validate_bounds_args(args, parser: _Parser) -> None:
    needed = {
        "bracket": ("n", "k", "r", "R_even", "R_odd"),
        "ratio": ("pairs",),
        "chebyshev": ("N", "j"),
        "stirling": ("n", "k"),
    }[args.mode]
    missing = [f"--{name.replace('_', '-')}" for name in needed
               if getattr(args, name) is None]
    if missing:
        parser.error(f"bounds --mode {args.mode} requires {', '.join(missing)}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "bounds":
        _validate_bounds_args(args, parser)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
