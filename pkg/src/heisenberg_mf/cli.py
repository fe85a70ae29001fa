"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
disagreement between independent routes.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from typing import Callable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from . import oracles, repnum, symfunc, young
from .meanfield import analysis, evaluate, exact
from .meanfield.evaluate import CurvePoint
from .meanfield.qpoly import QPoly

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MAX_EXACT_CURVE_N = 12
MAX_VERIFY_N = 8
CSV_HEADER = tuple(f.name for f in fields(CurvePoint))
REFERENCE_TAU = 2.0


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return str(x) if isinstance(x, int) else format(float(x), ".12g")


def write_curve_csv(points: Sequence[CurvePoint], stream) -> None:
    stream.write(",".join(CSV_HEADER) + "\n")
    for p in sorted(points, key=lambda p: (p.tau, p.n)):
        stream.write(",".join(_fmt(v) for v in astuple(p)) + "\n")


def read_curve_csv(stream) -> list[CurvePoint]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise UsageError(f"expected header {','.join(CSV_HEADER)}")
    points = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise UsageError(f"line {lineno}: expected {len(CSV_HEADER)} fields")
        try:
            n = int(row[0])
            rest = [float(x) for x in row[1:]]
        except ValueError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
        points.append(CurvePoint(n, *rest))
    if not points:
        raise UsageError("no data rows")
    return points


def _tau_grid(tau_min: float, tau_max: float, steps: int) -> list[float]:
    if steps < 1:
        raise UsageError("steps must be at least 1")
    if tau_min < 0 or tau_min > tau_max:
        raise UsageError("need 0 <= tau-min <= tau-max")
    if tau_min == tau_max:
        if steps != 1:
            raise UsageError("tau-min equals tau-max, so steps must be 1")
        return [tau_min]
    if steps == 1:
        raise UsageError("a range needs at least 2 steps")
    return [float(x) for x in np.linspace(tau_min, tau_max, steps)]


def _open_out(path: str | None):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


# curve


def cmd_curve(args) -> int:
    if args.n < 2:
        raise UsageError("n must be at least 2")
    if args.exact and args.n > MAX_EXACT_CURVE_N:
        raise UsageError(f"exact mode supports n <= {MAX_EXACT_CURVE_N}")
    taus = _tau_grid(args.tau_min, args.tau_max, args.steps)
    mode = "exact" if args.exact else "float"
    points = evaluate.curve(args.n, taus, mode=mode, threads=evaluate.thread_count(args.threads))
    out = _open_out(args.out)
    try:
        write_curve_csv(points, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# verify


@dataclass
class SuiteResult:
    name: str
    checks: int
    failure: str | None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure is None


def _qpoly_mismatch(expected: QPoly, got: QPoly) -> str | None:
    exps = sorted(set(expected.coeffs) | set(got.coeffs))
    for e in exps:
        if expected.coefficient(e) != got.coefficient(e):
            return f"exponent {e}: expected {expected.coefficient(e)}, got {got.coefficient(e)}"
    return None


def suite_triple_route(max_n: int, inject: bool = False) -> SuiteResult:
    checks = 0
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            brute = oracles.brute_force_weighted(n, k)
            if inject and (n, k) == (min(3, max_n), 1):
                brute = brute + QPoly.monomial(0, 1)
            for label, got in (
                ("phi", exact.weighted_cycle_expectation_exact(n, k)),
                ("spectral", exact.weighted_cycle_expectation_spectral(n, k)),
            ):
                checks += 1
                diff = _qpoly_mismatch(brute, got)
                if diff:
                    return SuiteResult("triple-route", checks, f"n={n} k={k} route={label}: {diff}")
    return SuiteResult("triple-route", checks, None)


def suite_fourier(max_n: int) -> SuiteResult:
    checks = 0
    for n in range(1, max_n + 1):
        two_alpha = symfunc.two_power_alpha(n)
        for lam in young.partitions_list(n):
            checks += 1
            expected = math.factorial(n) * (lam[0] - (lam[1] if len(lam) > 1 else 0) + 1) if len(lam) <= 2 else 0
            got = oracles.fourier_sum(two_alpha, lam)
            if got != expected:
                return SuiteResult("fourier", checks, f"n={n} lam={lam} 2^alpha: expected {expected}, got {got}")
            for k in range(1, n + 1):
                checks += 1
                expected = math.factorial(n) * repnum.a_coeff(lam, k)
                got = oracles.fourier_sum(symfunc.weighted_cycle_count(n, k), lam)
                if got != expected:
                    return SuiteResult("fourier", checks, f"n={n} k={k} lam={lam}: expected {expected}, got {got}")
    return SuiteResult("fourier", checks, None)


QUANTUM_BETAS = (0.1, 0.5, 1.0, 2.0)
QUANTUM_TOL = 1e-8


def suite_quantum(max_n: int) -> SuiteResult:
    checks = 0
    for n in range(2, min(max_n, 6) + 1):
        m2 = exact.magnetisation_sq_exact(n)
        z = exact.partition_function_exact(n)
        for beta in QUANTUM_BETAS:
            q = oracles.quantum_observables(n, beta)
            m2_ref = m2.at_t(beta / 2)
            ratio = q.Z_q / z.at_t(beta / 2)
            const = oracles.quantum_constant(n, beta)
            checks += 2
            if abs(q.m2_q - m2_ref) > QUANTUM_TOL * abs(m2_ref):
                return SuiteResult("quantum", checks, f"n={n} beta={beta} m2: expected {m2_ref}, got {q.m2_q}")
            if abs(ratio - const) > QUANTUM_TOL * const:
                return SuiteResult("quantum", checks, f"n={n} beta={beta} Z ratio: expected {const}, got {ratio}")
    return SuiteResult("quantum", checks, None)


def _two_row_schur_sum(m: int, v: int) -> symfunc.SymPoly:
    total = symfunc.zero(v)
    for a, b in young.two_row_partitions(m):
        total = total + symfunc.schur(young.two_row(a, b), v) * (a - b + 1)
    return total


def suite_symfunc(max_n: int) -> SuiteResult:
    checks = 0
    for n in range(1, max_n + 1):
        v = n
        checks += 1
        if symfunc.frobenius_ch(symfunc.two_power_alpha(n), v) != _two_row_schur_sum(n, v):
            return SuiteResult("symfunc", checks, f"n={n}: ch(2^alpha) differs from the two-row Schur sum")
        for k in range(1, n + 1):
            checks += 1
            lhs = symfunc.frobenius_ch(symfunc.weighted_cycle_count(n, k), v)
            rhs = symfunc.power_sum(k, v) * _two_row_schur_sum(n - k, v) * Fraction(2, k)
            if lhs != rhs:
                return SuiteResult("symfunc", checks, f"n={n} k={k}: ch(alpha_k 2^alpha) mismatch")
        checks += 1
        pieri = symfunc.zero(v)
        for i in range(n + 1):
            pieri = pieri + symfunc.schur(young.two_row(i, 0), v) * symfunc.schur(young.two_row(n - i, 0), v)
        monomial = symfunc.from_monomial_basis(
            {lam: math.prod(x + 1 for x in lam) for lam in young.partitions_list(n)}, v
        )
        if pieri != monomial:
            return SuiteResult("symfunc", checks, f"n={n}: Pieri identity fails")
    return SuiteResult("symfunc", checks, None)


def suite_border_strips(max_n: int) -> SuiteResult:
    checks = 0
    for m in range(0, max_n + 1):
        for mu in young.partitions_list(m):
            for k in range(1, max_n + 1):
                checks += 1
                if sorted(young.border_strips(mu, k)) != sorted(young.border_strips_direct(mu, k)):
                    return SuiteResult("border-strips", checks, f"mu={mu} k={k}: wrap and direct routes differ")
    return SuiteResult("border-strips", checks, None)


def run_verify(max_n: int, level: str, inject: bool = False, echo: Callable[[str], None] = print) -> int:
    suites: list[tuple[str, Callable[[], SuiteResult]]] = [
        ("triple-route", lambda: suite_triple_route(max_n, inject)),
        ("fourier", lambda: suite_fourier(max_n)),
        ("quantum", lambda: suite_quantum(max_n)),
        ("symfunc", lambda: suite_symfunc(max_n if level == "full" else min(max_n, 6))),
    ]
    if level == "full":
        suites.append(("border-strips", lambda: suite_border_strips(max_n)))
    results = []
    for _, run in suites:
        start = time.perf_counter()
        result = run()
        result.seconds = time.perf_counter() - start
        results.append(result)
    echo(f"{'suite':<15}{'status':<8}{'checks':>8}{'seconds':>10}")
    for r in results:
        echo(f"{r.name:<15}{'PASS' if r.passed else 'FAIL':<8}{r.checks:>8}{r.seconds:>10.2f}")
    failed = [r for r in results if not r.passed]
    for r in failed:
        echo(f"first counterexample in {r.name}: {r.failure}")
    if not failed and max_n >= 3:
        echo(f"E(alpha_1 2^alpha) at n=3: {exact.weighted_cycle_expectation_exact(3, 1)}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args) -> int:
    if not 1 <= args.max_n <= MAX_VERIFY_N:
        raise UsageError(f"max-n must be <= {MAX_VERIFY_N} (and positive)")
    return run_verify(args.max_n, args.level, inject=args.inject_failure)


# simulate


def formula_values(n: int, t: float, k_max: int) -> dict[str, float]:
    ref = {"Z": float(evaluate.partition_function(n, t, mode="float"))}
    for k in range(1, k_max + 1):
        ref[f"E(alpha_{k} 2^alpha)"] = float(evaluate.weighted_cycle_expectation(n, k, t, mode="float"))
    ref["m2"] = evaluate.magnetisation_sq(n, t, mode="float")
    # chi_[n-1,1] = fix - 1
    ref["fix"] = 1.0 + float(evaluate.expected_character((n - 1, 1), t, mode="float"))
    return ref


def cmd_simulate(args) -> int:
    if args.n < 2 or args.n > oracles.MAX_MC_N:
        raise UsageError(f"n must lie in [2, {oracles.MAX_MC_N}]")
    if args.samples < oracles.MIN_SAMPLES:
        raise UsageError(f"samples must be at least {oracles.MIN_SAMPLES}")
    if args.tau < 0:
        raise UsageError("tau must be nonnegative")
    k_max = min(args.k_max, args.n)
    if k_max < 1:
        raise UsageError("k-max must be positive")
    t = args.tau / args.n
    report = oracles.mc_interchange(
        args.n, t, args.samples, args.seed, k_max=k_max, threads=evaluate.thread_count(args.threads)
    )
    ref = formula_values(args.n, t, k_max)
    print(f"n={args.n} tau={_fmt(args.tau)} t={_fmt(t)} samples={args.samples} seed={args.seed}")
    print(f"{'observable':<22}{'estimate':>16}{'std_error':>14}{'formula':>16}{'z':>8}")
    for name, est in report.items():
        print(
            f"{name:<22}{est.mean:>16.8g}{est.std_error:>14.4g}{ref[name]:>16.8g}"
            f"{est.z_score(ref[name]):>8.2f}"
        )
    return EXIT_OK


# transition


def _parse_n_list(text: str) -> list[int]:
    try:
        ns = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"bad n-list {text!r}") from None
    if len(ns) < 2 or ns[0] < 2:
        raise UsageError("n-list needs at least two values, each >= 2")
    return ns


def transition_scan(ns: Sequence[int], taus: Sequence[float], threads: int = 1):
    """Curve points for every ``(n, tau)`` plus per-tau classification rows."""
    jobs = [(n, tau) for n in ns for tau in taus]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(lambda job: evaluate.curve_point(*job), jobs))
    else:
        points = [evaluate.curve_point(n, tau) for n, tau in jobs]
    table = np.array([p.m2_over_n2 for p in points]).reshape(len(ns), len(taus))
    return points, analysis.transition_rows(ns, taus, table)


def cmd_transition(args) -> int:
    ns = _parse_n_list(args.n_list)
    taus = _tau_grid(args.tau_min, args.tau_max, args.steps)
    if taus[0] <= 0:
        raise UsageError("tau-min must be positive for a transition scan")
    points, rows = transition_scan(ns, taus, evaluate.thread_count(args.threads))
    out = _open_out(args.out)
    try:
        write_curve_csv(points, out)
    finally:
        if out is not sys.stdout:
            out.close()
    report = sys.stdout if args.out not in (None, "-") else sys.stderr
    print("tau," + ",".join(f"n={n}" for n in ns) + ",exponent,behaviour", file=report)
    for r in rows:
        print(
            ",".join([_fmt(r.tau)] + [_fmt(v) for v in r.m2_over_n2] + [f"{r.exponent:.4f}", r.behaviour]),
            file=report,
        )
    tau_hat = analysis.crossing_tau(rows)
    print(f"tau_hat={'none' if math.isnan(tau_hat) else f'{tau_hat:.4f}'}", file=report)
    return EXIT_OK


# svg

SVG_W, SVG_H = 720, 440
MARGIN = dict(left=70, right=130, top=30, bottom=55)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


def render_svg(points: Sequence[CurvePoint]) -> str:
    xs = [p.tau for p in points] + [REFERENCE_TAU]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_hi = max(p.m2_over_n2 for p in points) * 1.05 or 1.0
    y_lo = 0.0
    plot_w = SVG_W - MARGIN["left"] - MARGIN["right"]
    plot_h = SVG_H - MARGIN["top"] - MARGIN["bottom"]

    def sx(x: float) -> float:
        return MARGIN["left"] + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return MARGIN["top"] + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    bottom, left = MARGIN["top"] + plot_h, MARGIN["left"]
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_W}" height="{SVG_H}" '
        f'viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{left + plot_w}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{MARGIN["top"]}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    for x in _ticks(x_lo, x_hi):
        parts.append(f'<line x1="{sx(x):.2f}" y1="{bottom}" x2="{sx(x):.2f}" y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{sx(x):.2f}" y="{bottom + 18}" text-anchor="middle">{x:.3g}</text>')
    for y in _ticks(y_lo, y_hi):
        parts.append(f'<line x1="{left - 5}" y1="{sy(y):.2f}" x2="{left}" y2="{sy(y):.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{sy(y) + 4:.2f}" text-anchor="end">{y:.3g}</text>')
    parts.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{SVG_H - 12}" text-anchor="middle">tau = t n</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN["top"] + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN["top"] + plot_h / 2:.2f})">m2 / n^2</text>'
    )
    ref_x = sx(REFERENCE_TAU)
    parts.append(
        f'<line class="reference" x1="{ref_x:.2f}" y1="{MARGIN["top"]}" x2="{ref_x:.2f}" y2="{bottom}" '
        f'stroke="gray" stroke-dasharray="4 3"/>'
    )
    series: dict[int, list[CurvePoint]] = {}
    for p in sorted(points, key=lambda p: (p.n, p.tau)):
        series.setdefault(p.n, []).append(p)
    for idx, (n, pts) in enumerate(sorted(series.items())):
        color = PALETTE[idx % len(PALETTE)]
        coords = " ".join(f"{sx(p.tau):.2f},{sy(p.m2_over_n2):.2f}" for p in pts)
        parts.append(f'<polyline data-n="{n}" points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if len(pts) == 1:
            parts.append(f'<circle cx="{sx(pts[0].tau):.2f}" cy="{sy(pts[0].m2_over_n2):.2f}" r="3.5" fill="{color}"/>')
        ly = MARGIN["top"] + 14 + 18 * idx
        lx = left + plot_w + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f"<text x=\"{lx + 26}\" y=\"{ly}\">{escape(f'n = {n}')}</text>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_svg(args) -> int:
    try:
        with open(args.input, newline="") as fh:
            points = read_curve_csv(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    text = render_svg(points)
    out = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenberg-mf",
        description="Mean-field quantum Heisenberg ferromagnet: exact and large-n curves, checks, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="tabulate Z and m^2 over a tau grid as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau-min", type=float, required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.add_argument("--exact", action="store_true", help="exact rational evaluation (small n)")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify", help="run the exact verification suites")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo interchange estimates against the formulas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("transition", help="scan m^2/n^2 across n and tau")
    p.add_argument("--n-list", required=True, help="comma-separated, e.g. 250,500,1000")
    p.add_argument("--tau-min", type=float, required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--out", default=None, help="output CSV (default stdout; summary then goes to stderr)")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("svg", help="plot a curve CSV as a standalone SVG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_svg)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        # route disagreements and non-convergence both land here
        print(f"{parser.prog} {args.command}: numeric disagreement: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
