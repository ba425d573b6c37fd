"""Command-line interface.

Subcommands: ``kl`` (single evaluation), ``sample`` (draws), ``logdensity``
(pointwise log-density), ``match`` (vMF concentration matching), ``sweep``
(hybrid error sweep), ``bench`` (robustness grid / latent-step timing) and
``selftest`` (invariant battery).  Output formats: plain (default), csv,
json; identical values in every format.  Files are written atomically
(temp file + rename).  The environment variable ``SPCAUCHY_SEED`` provides
the default seed.  Exit codes: 0 success, 1 selftest failure or reference
disagreement, 2 invalid arguments.  Column schemas are documented in
docs/formats.md and under each subcommand's ``--help``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import bench as bench_mod
from . import klcore, oracles, sphere, vmf
from .distribution import SpCauchy, log_density, sample
from .errors import ReferenceDisagreement, SpCauchyError

_FORMATS = ("plain", "csv", "json")


# ---------------------------------------------------------------------------
# emission helpers
# ---------------------------------------------------------------------------


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".spcauchy-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_records(records: list[dict], fmt: str) -> str:
    """Records share field names across csv and json; plain is key=value."""
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(records[0].keys())
        for rec in records:
            writer.writerow([_fmt(v) for v in rec.values()])
        return buf.getvalue()
    lines = [" ".join(f"{k}={_fmt(v)}" for k, v in rec.items()) for rec in records]
    return "\n".join(lines) + "\n"


def _float_text(values: np.ndarray) -> np.ndarray:
    # 17 significant digits round-trip a float64 bit-exactly and format at
    # C speed, which matters when emitting millions of sample rows
    return np.char.mod("%.17g", np.asarray(values, dtype=float))


def _render_matrix(rows: np.ndarray, fmt: str) -> str:
    if fmt == "json":
        body = ",\n".join("[" + ",".join(r) + "]" for r in _float_text(rows))
        return "[" + body + "]\n"
    return "\n".join(",".join(r) for r in _float_text(rows)) + "\n"


def _render_vector(values, fmt: str) -> str:
    text = _float_text(values)
    if fmt == "json":
        return "[" + ",".join(text) + "]\n"
    return "\n".join(text) + "\n"


def _output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        _atomic_write(path, text)


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("SPCAUCHY_SEED")
    return int(env) if env else 0


def _parse_mu(spec: str, d: int) -> np.ndarray:
    if spec == "north":
        mu = np.zeros(d)
        mu[0] = 1.0
        return mu
    try:
        parts = [float(p) for p in spec.replace(";", ",").split(",")]
    except ValueError:
        raise SpCauchyError(f"mu-spec must be 'north' or {d} comma-separated reals") from None
    if len(parts) != d:
        raise SpCauchyError(f"mu-spec has {len(parts)} components, expected {d}")
    return sphere.normalize(np.asarray(parts))


def _read_points(path: str, d: int) -> np.ndarray:
    fh = sys.stdin if path == "-" else open(path)
    try:
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rows.append([float(p) for p in line.replace(",", " ").split()])
    finally:
        if fh is not sys.stdin:
            fh.close()
    pts = np.asarray(rows, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != d:
        raise SpCauchyError(f"expected rows of {d} coordinates, got shape {pts.shape}")
    return pts


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_kl(args) -> int:
    try:
        if args.method == "reference":
            value = oracles.kl_reference(args.d, args.rho)
            rec = {
                "method": "reference",
                "d": args.d,
                "rho": args.rho,
                "value_or_time": value,
                "terms_or_nodes": 512,
                "converged": True,
            }
        else:
            res = klcore.evaluate_kl(
                args.d,
                args.rho,
                args.method,
                nodes=args.nodes,
                rel_tol=args.rel_tol,
                max_terms=args.max_terms,
            )
            rec = {
                "method": res.method.value,
                "d": args.d,
                "rho": args.rho,
                "value_or_time": res.value,
                "terms_or_nodes": res.terms_or_nodes,
                "converged": res.converged,
            }
    except ReferenceDisagreement as exc:
        print(f"reference disagreement: {exc}", file=sys.stderr)
        return 1
    except SpCauchyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    _output(_render_records([rec], args.format), args.output)
    return 0


def _cmd_sample(args) -> int:
    try:
        mu = _parse_mu(args.mu, args.d)
        dist = SpCauchy(mu, args.rho)
        rng = np.random.default_rng(_default_seed(args.seed))
        draws = sample(dist, rng, args.n)
    except SpCauchyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    _output(_render_matrix(np.atleast_2d(draws), args.format), args.output)
    return 0


def _cmd_logdensity(args) -> int:
    try:
        mu = _parse_mu(args.mu, args.d)
        dist = SpCauchy(mu, args.rho)
        if args.x is not None:
            pts = np.asarray([[float(p) for p in args.x.split(",")]])
            if pts.shape[1] != args.d:
                raise SpCauchyError(f"--x has {pts.shape[1]} components, expected {args.d}")
        else:
            pts = _read_points(args.input, args.d)
        norms = np.linalg.norm(pts, axis=1, keepdims=True)
        if np.any(norms <= 1e-300):
            raise SpCauchyError("input rows must be nonzero vectors")
        values = log_density(dist, pts / norms)
    except SpCauchyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    _output(_render_vector(np.atleast_1d(values), args.format), args.output)
    return 0


def _cmd_match(args) -> int:
    if (args.rho is None) == (args.kappa is None):
        print("invalid input: provide exactly one of --rho or --kappa", file=sys.stderr)
        return 2
    try:
        pair = vmf.matched_pair(args.d, rho=args.rho, kappa=args.kappa)
    except SpCauchyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    rec = {"d": pair.d, "rho": pair.rho, "kappa": pair.kappa}
    _output(_render_records([rec], args.format), args.output)
    return 0


def _cmd_sweep(args) -> int:
    if not args.error:
        print("invalid input: only --error sweeps are available", file=sys.stderr)
        return 2
    try:
        points = bench_mod.run_error_sweep(args.dmin, args.dmax, dense_points=args.points)
    except SpCauchyError as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 1
    records = [
        {
            "method": "hybrid_vs_reference",
            "d": p.d,
            "rho": klcore.rho_of_z(p.argmax_z),
            "value_or_time": p.max_abs_kl_error,
            "max_abs_kl_error": p.max_abs_kl_error,
            "argmax_z": p.argmax_z,
        }
        for p in points
    ]
    _output(_render_records(records, args.format), args.output)
    return 0


def _bench_records_to_dicts(records) -> list[dict]:
    return [
        {
            "method": r.method,
            "d": r.d,
            "rho": r.rho_or_kappa,
            "value_or_time": r.total_seconds,
            "forward_seconds": r.forward_seconds,
            "backward_or_grad_seconds": r.backward_or_grad_seconds,
            "total_seconds": r.total_seconds,
            "succeeded": r.succeeded,
            "failure_kind": r.failure_kind,
        }
        for r in records
    ]


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        if args.grid is not None:
            if args.grid != "appendixB":
                print("invalid input: the only named grid is 'appendixB'", file=sys.stderr)
                return 2
            records = bench_mod.run_robustness_grid(methods=methods, seed=_default_seed(args.seed))
        else:
            config = bench_mod.BenchConfig(
                dims=tuple(int(v) for v in args.dims.split(",")),
                batch=args.batch,
                warmup_iters=args.warmup,
                measured_iters=args.iters,
                seed=_default_seed(args.seed),
            )
            records = []
            for m in methods:
                records.extend(bench_mod.run_latent_step_bench(config, m))
    except SpCauchyError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    _output(_render_records(_bench_records_to_dicts(records), args.format), args.output)
    return 0


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def _selftest_checks():
    north3 = np.array([1.0, 0.0, 0.0])

    def agreement():
        worst = 0.0
        for d in (2, 3, 5, 8, 32):
            for rho in (0.0, 0.25, 0.5, 0.9):
                s = klcore.kl_series(d, rho).value
                q = klcore.kl_quadrature(d, rho).value
                worst = max(worst, abs(s - q) / max(1.0, abs(s)))
        return worst < 1e-9, f"max series/quadrature rel gap {worst:.2e}"

    def closed_forms():
        worst = 0.0
        for d in (2, 3, 4, 5):
            for rho in (0.1, 0.5, 0.9):
                c = klcore.kl_closed_low_d(d, rho).value
                q = klcore.kl_quadrature(d, rho).value
                worst = max(worst, abs(c - q))
        return worst < 1e-9, f"max closed/quadrature abs gap {worst:.2e}"

    def zero_at_zero():
        vals = [
            klcore.evaluate_kl(5, 0.0, m).value
            for m in ("series", "quadrature", "hybrid", "combined")
        ]
        return all(v == 0.0 for v in vals), f"values at rho=0: {vals}"

    def nonnegative():
        ok = True
        for d in (2, 3, 8, 64, 512):
            for rho in (0.1, 0.5, 0.9, 0.99):
                for m in ("series", "quadrature", "combined", "hybrid"):
                    res = klcore.evaluate_kl(d, rho, m)
                    if m == "series" and not res.converged:
                        continue  # a truncated series undershoots by design
                    ok = ok and res.value >= -1e-9
        return ok, "converged exact evaluators nonnegative on the spot grid"

    def brackets():
        ok = True
        for d in (2, 3, 8, 64):
            for z in np.linspace(0.0, 0.995, 40):
                iv = klcore.h_bracket(d, float(z))
                h = klcore.h_core(d, float(z))
                ok = ok and iv.lo - 1e-12 <= h <= iv.hi + 1e-12
        return ok, "H inside its envelopes on the spot grid"

    def h_monotone():
        ok = True
        for d in (2, 5, 32):
            hs = [klcore.h_core(d, float(z)) for z in np.linspace(0.0, 0.99, 60)]
            ok = ok and all(b < a for a, b in zip(hs, hs[1:]))
        return ok, "H strictly decreasing on the spot grid"

    def match_round_trip():
        worst = 0.0
        for d in (2, 9, 64):
            for kappa in (1e-6, 1.0, 10.0, 1e6):
                back = vmf.kappa_of_rho(d, vmf.rho_match(d, kappa))
                worst = max(worst, abs(back - kappa) / kappa)
        return worst < 1e-9, f"worst kappa round-trip rel err {worst:.2e}"

    def sampler():
        rng = np.random.default_rng(7)
        dist = SpCauchy(north3, 0.7)
        draws = sample(dist, rng, 512)
        norms = np.linalg.norm(draws, axis=1)
        again = sample(SpCauchy(north3, 0.7), np.random.default_rng(7), 512)
        return (
            bool(np.all(np.abs(norms - 1.0) < 1e-12) and np.array_equal(draws, again)),
            "unit norms and seed determinism",
        )

    def moebius_fixed_points():
        x = sphere.normalize(np.array([0.3, -0.5, 0.81]))
        ok = np.array_equal(sphere.moebius_transform(x, north3, 0.0), x)
        at_mu = sphere.moebius_transform(north3, north3, 0.77)
        at_anti = sphere.moebius_transform(-north3, north3, 0.77)
        ok = ok and np.allclose(at_mu, north3, atol=1e-12)
        ok = ok and np.allclose(at_anti, -north3, atol=1e-12)
        return bool(ok), "identity at rho=0 and fixed points at +/-mu"

    def digamma_values():
        ok = abs(klcore.digamma(1.0) + 0.5772156649015329) < 1e-12
        ok = ok and abs(klcore.digamma(2.0) - klcore.digamma(1.0) - 1.0) < 1e-12
        return ok, "digamma reference values"

    def slerp():
        a = np.array([1.0, 0.0])
        b = np.array([0.0, 1.0])
        mid = sphere.geodesic_interpolate(a, b, 0.5)
        return bool(np.allclose(mid, np.sqrt(0.5), atol=1e-12)), "quarter-circle midpoint"

    return [
        ("evaluator agreement", agreement),
        ("closed forms", closed_forms),
        ("zero at rho=0", zero_at_zero),
        ("nonnegativity", nonnegative),
        ("bracket containment", brackets),
        ("H monotonicity", h_monotone),
        ("matching round trip", match_round_trip),
        ("sampler", sampler),
        ("moebius fixed points", moebius_fixed_points),
        ("digamma", digamma_values),
        ("slerp", slerp),
    ]


def _cmd_selftest(args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            ok, detail = check()
        except Exception as exc:  # noqa: BLE001 - a crash is a failing check
            ok, detail = False, f"raised {exc!r}"
        status = "ok" if ok else "FAIL"
        print(f"[{status}] {name}: {detail}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} selftest check(s) failed", file=sys.stderr)
        return 1
    print("all selftest checks passed")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_format_args(p: argparse.ArgumentParser, columns: str) -> None:
    p.add_argument("--format", choices=_FORMATS, default="plain", help="output format")
    p.add_argument("-o", "--output", default=None, help="output path (atomic write); default stdout")
    p.epilog = f"columns: {columns} (see docs/formats.md)"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spcauchy",
        description="Spherical Cauchy distributions: sampling, densities, KL evaluators.",
        epilog="SPCAUCHY_SEED sets the default seed. Exit codes: 0 ok, 1 selftest/reference failure, 2 bad input.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kl", help="evaluate KL(spCauchy(mu, rho) || uniform)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument(
        "--method",
        default="combined",
        choices=sorted({*klcore._METHOD_ALIASES, "reference"}),
    )
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--rel-tol", type=float, default=1e-14)
    p.add_argument("--max-terms", type=int, default=100_000)
    _add_format_args(p, "method,d,rho,value_or_time,terms_or_nodes,converged")
    p.set_defaults(func=_cmd_kl)

    p = sub.add_parser("sample", help="draw reparameterized samples")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--mu", default="north", help="'north' or d comma-separated reals")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    _add_format_args(p, "one sample per row, d coordinates")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("logdensity", help="log-density w.r.t. the uniform measure")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--mu", default="north")
    p.add_argument("--x", default=None, help="single point, comma-separated")
    p.add_argument("--input", default="-", help="file of rows (or '-' for stdin)")
    _add_format_args(p, "one log-density per input row")
    p.set_defaults(func=_cmd_logdensity)

    p = sub.add_parser("match", help="vMF curvature matching map")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    _add_format_args(p, "d,rho,kappa")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("sweep", help="hybrid-rule error sweep over z")
    p.add_argument("--error", action="store_true", help="sweep |reference - hybrid|")
    p.add_argument("--dmin", type=int, default=2)
    p.add_argument("--dmax", type=int, default=64)
    p.add_argument("--points", type=int, default=1000)
    _add_format_args(p, "method,d,rho,value_or_time,max_abs_kl_error,argmax_z")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bench", help="robustness grid or latent-step timing")
    p.add_argument("--grid", default=None, help="named robustness grid: appendixB")
    p.add_argument("--methods", default="series,quadrature,combined,hybrid")
    p.add_argument("--dims", default=",".join(str(d) for d in bench_mod.LATENT_SWEEP_DIMS))
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--warmup", type=int, default=10)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    _add_format_args(
        p,
        "method,d,rho,value_or_time,forward_seconds,backward_or_grad_seconds,"
        "total_seconds,succeeded,failure_kind",
    )
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("selftest", help="run the invariant battery; exit 1 on violation")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
