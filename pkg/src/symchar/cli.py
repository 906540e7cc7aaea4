"""Command-line front end.

    symchar orbits 3 2
    symchar eval 3 0 1 -- 1 2
    symchar image 5 0 1 1 28 --format csv -o points.csv
    symchar render 19 1 1 1 1 1 14 --range 7 --unit-res 30 -o out.png
    symchar verify translation --n 4 --d 3
    symchar reduce 47 1 2 44
    symchar table 3 2 --check-unitary
    symchar walk 24 3 8
    symchar solve 7 0 5 12

Exit codes: 0 success / all checks passed, 1 verification failure,
2 usage error, 3 evaluation budget exceeded.  Errors go to stderr as a
single JSON line.  Floats are printed with 11 decimal places.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import asymptotic, identities, render, table
from .errors import BudgetExceeded, NoUnitPivot, SymcharError
from .evaluate import (
    DEFAULT_BUDGET,
    dot_counts,
    image,
    permanent_oracle,
    supercharacter,
)
from .modring import solve_bilinear_congruence
from .orbits import canonicalize, enumerate_orbits, orbit_size, stabilizer_order


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt_float(v: float) -> str:
    r = round(v, 11)
    return f"{0.0 if r == 0 else r:.11f}"


def fmt_complex(z: complex) -> str:
    return f"{fmt_float(z.real)}{'+' if z.imag >= 0 or round(z.imag, 11) == 0 else '-'}{fmt_float(abs(z.imag))}i"


def _output_path(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("SYMCHAR_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        # The tool owns the layout under the redirect dir, so create it.
        path = os.path.join(base, path)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    return path


@dataclass(frozen=True)
class JobSpec:
    """Validated invocation parameters shared by the orbit commands."""

    n: int
    entries: tuple[int, ...]
    budget: int
    workers: int
    out: str | None = None
    fmt: str = "csv"

    def rep(self):
        return canonicalize(self.entries, self.n)


def _jobspec(args, entries) -> JobSpec:
    if args.n <= 0:
        raise UsageError(f"modulus must be positive, got {args.n}")
    if not entries:
        raise UsageError("orbit entries required")
    budget = getattr(args, "budget", DEFAULT_BUDGET)
    if budget <= 0:
        raise UsageError("budget must be positive")
    workers = getattr(args, "workers", 1)
    if workers <= 0:
        raise UsageError("workers must be positive")
    job = JobSpec(
        args.n,
        tuple(entries),
        budget,
        workers,
        _output_path(getattr(args, "out", None)),
        getattr(args, "format", "csv"),
    )
    rep = job.rep()
    if rep.entries != job.entries:
        print(
            json.dumps({"notice": "canonicalized", "input": list(job.entries), "orbit": list(rep.entries)}),
            file=sys.stderr,
        )
    return job


def _write_or_print(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_orbits(args) -> int:
    if args.n <= 0 or args.d <= 0:
        raise UsageError("n and d must be positive")
    for rep in enumerate_orbits(args.n, args.d):
        print(f"{' '.join(map(str, rep.entries))}  size={orbit_size(rep)}  stab={stabilizer_order(rep)}")
    return 0


def cmd_eval(args) -> int:
    rest = list(args.rest)
    if rest.count("--") != 1:
        raise UsageError("expected: eval N X... -- Y...")
    split = rest.index("--")
    try:
        xs = [int(v) for v in rest[:split]]
        ys = [int(v) for v in rest[split + 1 :]]
    except ValueError as exc:
        raise UsageError(f"non-integer entry: {exc}") from None
    job = _jobspec(args, xs)
    if len(ys) != len(xs):
        raise UsageError(f"y has {len(ys)} entries, expected {len(xs)}")
    rep = job.rep()
    cv = dot_counts(rep, ys)
    print(f"orbit {' '.join(map(str, rep.entries))}  counts {json.dumps(list(cv.counts), separators=(',', ':'))}")
    print(f"value {fmt_complex(cv.value())}")
    if args.oracle:
        print(f"permanent-oracle {fmt_complex(permanent_oracle(rep, ys))}")
    return 0


def cmd_image(args) -> int:
    job = _jobspec(args, args.entries)
    cloud = image(job.rep(), budget=job.budget, full_group=args.full_group, workers=job.workers)
    _write_or_print(render.export_points(cloud.values, job.fmt), job.out)
    return 0


def cmd_render(args) -> int:
    job = _jobspec(args, args.entries)
    if job.out is None:
        raise UsageError("render requires -o FILE")
    try:
        spec = render.BitmapSpec(args.range, args.unit_res)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cloud = image(job.rep(), budget=job.budget, workers=job.workers)
    img = render.render_bitmap(cloud.values, spec, workers=job.workers)
    render.write_png(img, job.out)
    print(f"wrote {job.out} ({spec.side}x{spec.side}, {len(cloud.values)} points)")
    return 0


def cmd_reduce(args) -> int:
    job = _jobspec(args, args.entries)
    matrix = asymptotic.orbit_matrix(job.rep())
    try:
        if args.reducer:
            rows = json.loads(args.reducer)
            cert = asymptotic.certificate_from_rows(matrix, rows)
        else:
            cert = asymptotic.row_reduce_mod_n(matrix)
    except NoUnitPivot as exc:
        print(exc.certificate.to_json())
        print(json.dumps({"error": "no_unit_pivot", "detail": str(exc)}), file=sys.stderr)
        return 1
    print(cert.to_json())
    if args.expect_b:
        with open(args.expect_b) as fh:
            expect = tuple(tuple(v % job.n for v in row) for row in json.load(fh))
        if cert.reduced != expect:
            print(
                json.dumps({"error": "reduced_form_mismatch", "expected": [list(r) for r in expect]}),
                file=sys.stderr,
            )
            return 1
    if cert.complete:
        exponents = asymptotic.torus_map(cert)
        print(exponents.to_json())
        if args.grid:
            cloud = asymptotic.sample_torus_map(exponents, args.grid, budget=job.budget)
            _write_or_print(render.export_points(cloud.values, job.fmt), job.out)
    return 0


def cmd_table(args) -> int:
    if args.n <= 0 or args.d <= 0:
        raise UsageError("n and d must be positive")
    tab = table.build_table(args.n, args.d, max_orbits=args.max_orbits, workers=args.workers)
    if args.check_unitary:
        uni = table.build_unitary(tab)
        print(
            json.dumps(
                {
                    "n": args.n,
                    "d": args.d,
                    "orbits": tab.count,
                    "residual_symmetry": uni.residual_symmetry,
                    "residual_unitary": uni.residual_unitary,
                }
            )
        )
        ok = uni.residual_symmetry <= 1e-9 and uni.residual_unitary <= 1e-8
        return 0 if ok else 1
    _write_or_print(tab.to_json(), _output_path(args.out))
    return 0


def cmd_walk(args) -> int:
    report = identities.walk_reduction_check(args.n, args.d, args.a, budget=args.budget)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_solve(args) -> int:
    sol = solve_bilinear_congruence(args.a, args.b, args.d, args.n, method="brute" if args.brute else "crt")
    print(json.dumps({"j": sol.j, "k": sol.k, "method": sol.method}))
    return 0


def _emit(reports) -> int:
    ok = True
    for rep in reports:
        print(rep.to_json())
        ok = ok and rep.passed
    return 0 if ok else 1


def cmd_verify(args) -> int:
    n, d = args.n, args.d
    if n <= 0 or d <= 0:
        raise UsageError("--n and --d must be positive")
    check = args.check
    if check == "conjugate":
        return _emit(identities.sweep_conjugate(n, d))
    if check == "translation":
        return _emit(identities.sweep_translation(n, d))
    if check == "constancy":
        return _emit(identities.sweep_constancy(n, d))
    if check == "dihedral":
        return _emit(identities.sweep_dihedral(n, d, budget=args.budget))
    if check == "spikes":
        return _emit(identities.sweep_spikes(n, d))
    if check == "full-union":
        order = identities.full_union_symmetry(n, d, budget=args.budget)
        print(json.dumps({"check": "full-union", "n": n, "d": d, "order": order, "passed": True}))
        return 0
    if check == "walk":
        if args.a is None:
            raise UsageError("verify walk needs --a")
        report = identities.walk_reduction_check(n, d, args.a, budget=args.budget)
        print(report.to_json())
        return 0 if report.passed else 1
    if check == "hypocycloid":
        report = asymptotic.hypocycloid_orbit_check(n, d, budget=args.budget, workers=args.workers)
        print(report.to_json())
        return 0 if report.passed else 1
    if check == "permanent":
        import random

        rng = random.Random(args.seed)
        bad = 0
        total = 0
        for rep in enumerate_orbits(n, d):
            for _ in range(args.samples):
                y = [rng.randrange(n) for _ in range(d)]
                total += 1
                if abs(supercharacter(rep, y) - permanent_oracle(rep, y)) > 1e-9:
                    bad += 1
        print(json.dumps({"check": "permanent", "n": n, "d": d, "samples": total, "failures": bad}))
        return 0 if bad == 0 else 1
    if check == "unitary":
        tab = table.build_table(n, d, workers=args.workers)
        uni = table.build_unitary(tab)
        ok = uni.residual_symmetry <= 1e-9 and uni.residual_unitary <= 1e-8
        print(
            json.dumps(
                {
                    "check": "unitary",
                    "n": n,
                    "d": d,
                    "residual_symmetry": uni.residual_symmetry,
                    "residual_unitary": uni.residual_unitary,
                    "passed": ok,
                }
            )
        )
        return 0 if ok else 1
    raise UsageError(f"unknown check {check!r}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="symchar", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, budget=True, workers=True):
        if budget:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max superclass evaluations")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="parallel block evaluation")

    p = sub.add_parser("orbits", help="list canonical orbit representatives")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("eval", help="evaluate sigma_X(y): eval N X... -- Y...")
    p.add_argument("n", type=int)
    p.add_argument("rest", nargs=argparse.REMAINDER)
    p.add_argument("--oracle", action="store_true", help="also print the permanent-based value")
    add_common(p, workers=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("image", help="deduplicated value set of sigma_X")
    p.add_argument("n", type=int)
    p.add_argument("entries", type=int, nargs="+")
    p.add_argument("--full-group", action="store_true", help="sweep all n^d points, not superclass reps")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--out")
    add_common(p)
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("render", help="render the image of sigma_X to PNG")
    p.add_argument("n", type=int)
    p.add_argument("entries", type=int, nargs="+")
    p.add_argument("--range", type=float, required=True, help="plot half-width")
    p.add_argument("--unit-res", type=int, required=True, help="pixels per unit")
    p.add_argument("-o", "--out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("reduce", help="row-reduce the orbit matrix over Z/nZ")
    p.add_argument("n", type=int)
    p.add_argument("entries", type=int, nargs="+")
    p.add_argument("--reducer", help="JSON rows of a reducer matrix to validate instead of eliminating")
    p.add_argument("--expect-b", help="JSON file with the expected reduced matrix; mismatch exits 1")
    p.add_argument("--grid", type=int, help="also sample the torus map on this grid")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--out")
    add_common(p, workers=False)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("table", help="supercharacter table at (n, d)")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--check-unitary", action="store_true", help="print normalization residuals instead of the table")
    p.add_argument("--max-orbits", type=int, default=2000)
    p.add_argument("-o", "--out")
    add_common(p, budget=False)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("walk", help="restricted-walk modulus reduction check")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("a", type=int)
    add_common(p, workers=False)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("solve", help="solve a*j + b*k + d*j*k = gcd(n,d) mod n")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--brute", action="store_true", help="exhaustive scan (lexicographically smallest pair)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run an identity sweep, one JSON line per check")
    p.add_argument(
        "check",
        choices=[
            "conjugate",
            "translation",
            "constancy",
            "dihedral",
            "spikes",
            "full-union",
            "walk",
            "hypocycloid",
            "permanent",
            "unitary",
        ],
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=int, help="walk step (verify walk)")
    p.add_argument("--samples", type=int, default=10, help="random y per orbit (verify permanent)")
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "detail": str(exc)}), file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(
            json.dumps({"error": "budget_exceeded", "required": exc.required, "budget": exc.budget}),
            file=sys.stderr,
        )
        return 3
    except SymcharError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1
    except ValueError as exc:
        print(json.dumps({"error": "usage", "detail": str(exc)}), file=sys.stderr)
        return 2
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as exc:
        print(json.dumps({"error": "io", "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
