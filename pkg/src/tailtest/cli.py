"""Command-line front end.

Subcommands: test (tail statistic + p-value), null-table (tabulated CDF of
the null law), power (rejection-rate study against an alternative), ks
(Kolmogorov/Smirnov baseline), mc-calibrate (Monte Carlo vs exact CDF).

Exit codes: 0 success, 1 input error, 2 convergence failure. JSON output is
byte-deterministic for fixed inputs and seed except for the timestamp field.
"""

import argparse
import csv
import datetime
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from . import __version__, backend
from .asymptotic import G_inf_grid, G_inf_series, LimitSpec
from .baseline_ks import kolmogorov_statistic, ks_p, smirnov_statistic
from .ecdf import average_ecdfs
from .errors import ConvergenceError, InputError, InvalidModelError, TailTestError
from .inversion import InversionSettings
from .kernels import mc_transform
from .mc_oracle import McSettings, sample_null
from .models import TableCdf, parse_distribution
from .null_dist import (Method, NullSpec, PValuePolicy, cumulant,
                        gamma_closed_form_cdf, null_cdf_grid, p_value)
from .statistic import Sample, TailSide, a_statistic, validate_unit_interval


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def ingest_sample(path: str, column: str | None = None) -> Sample:
    """Read a sample: one value per line ('#' comments, blanks skipped), or
    a named column of a CSV file when `column` is given."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            if column is not None:
                return _ingest_csv_column(fh, path, column)
            values = []
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    values.append(float(line))
                except ValueError:
                    raise InputError(
                        f"{path}:{lineno}: cannot parse {line!r} as a number")
    except OSError as exc:
        raise InputError(f"cannot read sample file {path}: {exc}")
    if not values:
        raise InputError(f"sample file {path} contains no values")
    return Sample(values)


def _ingest_csv_column(fh, path, column):
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or column not in reader.fieldnames:
        raise InputError(f"{path}: no column named {column!r}")
    values = []
    for row_no, row in enumerate(reader, start=2):
        cell = (row.get(column) or "").strip()
        if not cell:
            continue
        try:
            values.append(float(cell))
        except ValueError:
            raise InputError(f"{path}:{row_no}: cannot parse {cell!r} as a number")
    if not values:
        raise InputError(f"{path}: column {column!r} contains no values")
    return Sample(values)


def load_table_cdf(path: str) -> TableCdf:
    """CSV with columns x,F (header optional): knots of a table CDF."""
    xs, fs = [], []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = [p.strip() for p in line.split(",")]
                if len(parts) != 2:
                    raise InputError(f"{path}:{lineno}: expected two columns x,F")
                try:
                    x, f = float(parts[0]), float(parts[1])
                except ValueError:
                    if lineno == 1:
                        continue  # header row
                    raise InputError(f"{path}:{lineno}: cannot parse {line!r}")
                xs.append(x)
                fs.append(f)
    except OSError as exc:
        raise InputError(f"cannot read table CDF {path}: {exc}")
    return TableCdf(xs, fs)


def load_averaged_ecdf(paths: list[str]):
    samples = [ingest_sample(p.strip()) for p in paths if p.strip()]
    if not samples:
        raise InputError("ecdf: needs at least one sample path")
    try:
        return average_ecdfs(samples)
    except ValueError as exc:
        raise InputError(str(exc))


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class SideReport:
    side: str
    value: float | None  # None encodes the infinite flag in JSON
    infinite: bool
    clamped_count: int
    p: float
    method: str
    p_error_estimate: float


@dataclass
class TestReport:
    sample_path: str
    input_digest: str
    n: int
    distribution: str
    a: float
    alpha: float
    sides: list
    combined_p: float | None
    seed: int
    version: str
    timestamp: str

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TestReport":
        data = dict(data)
        data["sides"] = [SideReport(**s) for s in data["sides"]]
        return cls(**data)

    def to_text(self) -> str:
        lines = [
            f"sample      : {self.sample_path} (n={self.n}, "
            f"sha256={self.input_digest[:12]})",
            f"distribution: {self.distribution}",
            f"a           : {self.a:g}   alpha = a/n = {self.alpha:.6g}",
        ]
        for s in self.sides:
            val = "infinite" if s.infinite else f"{s.value:.10g}"
            lines.append(f"A^{s.side[0].upper()}         : {val}"
                         + (f"   ({s.clamped_count} clamped)" if s.clamped_count else ""))
            lines.append(f"p ({s.side:5s})   : {s.p:.6g}   "
                         f"[{s.method}, err<={s.p_error_estimate:.2g}]")
        if self.combined_p is not None:
            lines.append(f"p (combined): {self.combined_p:.6g}   "
                         "[Bonferroni over both sides]")
        lines.append(f"version     : {self.version}")
        return "\n".join(lines)


def _emit(report_dict: dict, output: str, stream) -> None:
    if output == "json":
        json.dump(report_dict, stream, indent=2, sort_keys=True)
        stream.write("\n")
    else:
        raise AssertionError("text emission handled by callers")


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# test subcommand
# ---------------------------------------------------------------------------

def run_test(sample_path: str, dist_spec: str, a: float = 1.0,
             side: str = "right", method: str = "auto",
             output: str = "text", column: str | None = None,
             clamp_eps: float | None = None, seed: int = 0,
             mc_replicates: int = 200_000,
             settings: InversionSettings | None = None) -> TestReport:
    """Compose ingestion, the statistic, and the p-value dispatch."""
    sample = ingest_sample(sample_path, column=column)
    model = parse_distribution(dist_spec)
    spec = NullSpec(a=a, n=sample.n)
    policy = PValuePolicy(method=method, mc_replicates=mc_replicates, mc_seed=seed)
    sides = {"right": [TailSide.RIGHT], "left": [TailSide.LEFT],
             "both": [TailSide.RIGHT, TailSide.LEFT]}.get(side)
    if sides is None:
        raise InputError(f"side must be right, left, or both, got {side!r}")

    side_reports = []
    for ts in sides:
        stat = a_statistic(sample, model, a, ts, clamp_eps=clamp_eps)
        rep = p_value(stat.value, spec, settings=settings, policy=policy)
        side_reports.append(SideReport(
            side=ts.value,
            value=None if stat.is_infinite else stat.value,
            infinite=stat.is_infinite,
            clamped_count=stat.clamped_count,
            p=rep.p,
            method=rep.method.value,
            p_error_estimate=rep.error_estimate,
        ))
    combined = None
    if len(side_reports) == 2:
        # convenience combination, not a sharp two-sided law
        combined = min(1.0, 2.0 * min(s.p for s in side_reports))
    return TestReport(
        sample_path=sample_path,
        input_digest=_file_digest(sample_path),
        n=sample.n,
        distribution=model.label,
        a=a,
        alpha=spec.alpha,
        sides=side_reports,
        combined_p=combined,
        seed=seed,
        version=__version__,
        timestamp=_now(),
    )


# ---------------------------------------------------------------------------
# null-table subcommand
# ---------------------------------------------------------------------------

def null_table(a: float | None, n: int | None, alpha: float | None,
               sigmas, settings: InversionSettings | None = None) -> list[dict]:
    """Tabulate the null CDF on a sigma grid.

    Either (a, n) for the finite law or alpha alone for the limit law.
    """
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.size == 0:
        raise InputError("sigma grid is empty")
    rows = []
    if alpha is not None:
        if a is not None or n is not None:
            raise InputError("give either --alpha or (--a, --n), not both")
        vals, rep = G_inf_grid(sigmas, LimitSpec(alpha), settings)
        for s, g in zip(sigmas, vals):
            rows.append({"sigma": float(s), "G": float(g),
                         "method": Method.ASYMPTOTIC_INTEGRAL.value,
                         "error_estimate": rep.error_bound})
        return rows
    if a is None or n is None:
        raise InputError("need --alpha, or both --a and --n")
    spec = NullSpec(a=a, n=n)
    if a == 1.0:
        for s in sigmas:
            rows.append({"sigma": float(s), "G": gamma_closed_form_cdf(float(s), n),
                         "method": Method.GAMMA_CLOSED_FORM.value,
                         "error_estimate": 1e-14})
        return rows
    vals, rep = null_cdf_grid(sigmas, spec, settings)
    for s, g in zip(sigmas, vals):
        rows.append({"sigma": float(s), "G": float(g),
                     "method": Method.INVERSION.value,
                     "error_estimate": rep.error_bound})
    return rows


def parse_sigma_grid(text: str) -> np.ndarray:
    """Grid spec: comma list '1,3,7' or range 'lo:hi:count'."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if count < 1 or not hi > lo:
                raise ValueError
            return np.linspace(lo, hi, count)
        return np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise InputError(f"cannot parse sigma grid {text!r}; "
                         "use 'v1,v2,...' or 'lo:hi:count'")


# ---------------------------------------------------------------------------
# power subcommand
# ---------------------------------------------------------------------------

def null_quantile(q: float, spec: NullSpec,
                  settings: InversionSettings | None = None) -> float:
    """Inverse of the null CDF by bracketing + root finding."""
    if spec.a == 1.0:
        def cdf(s):
            return gamma_closed_form_cdf(s, spec.n)
    else:
        def cdf(s):
            vals, _ = null_cdf_grid(np.array([s]), spec, settings)
            return float(vals[0])

    mean = cumulant(1, spec)
    spread = math.sqrt(cumulant(2, spec))
    hi = mean + 4.0 * spread
    while cdf(hi) < q:
        hi = mean + 2.0 * (hi - mean)
        if hi > mean + 1e6 * spread:
            raise ConvergenceError(f"cannot bracket the {q} quantile")
    return brentq(lambda s: cdf(s) - q, 1e-12, hi, xtol=1e-10)


def ks_critical(level: float) -> float:
    """lambda with P(D > lambda) = level."""
    return brentq(lambda lam: ks_p(lam) - level, 0.05, 10.0, xtol=1e-12)


_POWER_CHUNK = 256


def power_study(null_dist: str, alt_dist: str, n: int, a_list, replicates: int,
                seed: int, side: str = "right", level: float = 0.05,
                settings: InversionSettings | None = None) -> list[dict]:
    """Rejection rates of the tail tests (one row per a) and the KS baseline
    when data come from `alt_dist` but are tested against `null_dist`."""
    if replicates < 1:
        raise InputError("replicates must be positive")
    if n < 1:
        raise InputError("n must be positive")
    if side not in ("right", "left"):
        raise InputError(f"power side must be right or left, got {side!r}")
    a_list = [float(a) for a in a_list]
    if not a_list or any(a <= 0.0 for a in a_list):
        raise InputError("a-list must contain positive exponents")
    null_model = parse_distribution(null_dist)
    alt_model = parse_distribution(alt_dist)

    crit = {a: null_quantile(1.0 - level, NullSpec(a=a, n=n), settings)
            for a in a_list}
    lam_crit = ks_critical(level)

    sizes = []
    remaining = replicates
    while remaining > 0:
        take = min(_POWER_CHUNK, remaining)
        sizes.append(take)
        remaining -= take

    def one_chunk(args):
        index, count = args
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(index,))))
        x = alt_model.sample(rng, (count, n))
        u = validate_unit_interval(np.asarray(null_model.evaluate(x), dtype=float))
        if side == "left":
            u = 1.0 - u
        rejections = {}
        boundary = (u >= 1.0).any(axis=1)
        clean = ~boundary
        for a in a_list:
            stats = np.full(count, np.inf)
            if clean.any():
                stats[clean] = mc_transform(np.ascontiguousarray(u[clean]), a, n)
            rejections[a] = int(np.sum(stats > crit[a]))
        u_sorted = np.sort(u if side == "right" else 1.0 - u, axis=1)
        hi_steps = np.arange(1, n + 1) / n
        lo_steps = np.arange(0, n) / n
        d = np.maximum(np.max(hi_steps - u_sorted, axis=1),
                       np.max(u_sorted - lo_steps, axis=1))
        rejections["ks"] = int(np.sum(math.sqrt(n) * d > lam_crit))
        return rejections

    workers = backend.max_threads()
    if workers <= 1 or len(sizes) == 1:
        parts = [one_chunk(ic) for ic in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one_chunk, enumerate(sizes)))

    rows = []
    for a in a_list:
        rej = sum(p[a] for p in parts)
        rate = rej / replicates
        rows.append({"test": f"tail_{side}", "a": a, "rejections": rej,
                     "replicates": replicates, "power": rate,
                     "mc_se": math.sqrt(max(rate * (1.0 - rate), 1e-12)
                                        / replicates)})
    rej = sum(p["ks"] for p in parts)
    rate = rej / replicates
    rows.append({"test": "ks", "a": "", "rejections": rej,
                 "replicates": replicates, "power": rate,
                 "mc_se": math.sqrt(max(rate * (1.0 - rate), 1e-12) / replicates)})
    return rows


# ---------------------------------------------------------------------------
# ks subcommand
# ---------------------------------------------------------------------------

def ks_test(sample_path_a: str, sample_path_b: str | None = None,
            dist_spec: str | None = None, column: str | None = None) -> dict:
    """Two-sample (two paths) or one-sample (path + distribution) KS test."""
    if (sample_path_b is None) == (dist_spec is None):
        raise InputError("give exactly one of: a second sample, or --dist")
    sample_a = ingest_sample(sample_path_a, column=column)
    if sample_path_b is not None:
        res = smirnov_statistic(sample_a, ingest_sample(sample_path_b,
                                                        column=column)).with_p()
        kind = "two-sample"
    else:
        res = kolmogorov_statistic(sample_a, parse_distribution(dist_spec)).with_p()
        kind = "one-sample"
    return {
        "kind": kind,
        "D": res.D,
        "lambda": res.lam,
        "p": res.p,
        "n_a": res.n_a,
        "n_b": res.n_b,
        "small_sample_warning": res.small_sample_warning,
        "version": __version__,
        "timestamp": _now(),
    }


# ---------------------------------------------------------------------------
# mc-calibrate subcommand
# ---------------------------------------------------------------------------

def mc_calibrate(a: float, n: int, replicates: int, seed: int,
                 settings: InversionSettings | None = None) -> dict:
    """Compare the Monte Carlo null sample with the exact CDF (DKW check)."""
    from scipy.interpolate import PchipInterpolator

    spec = NullSpec(a=a, n=n)
    draws = np.sort(sample_null(spec, McSettings(replicates=replicates, seed=seed)))
    # dense exact CDF + monotone interpolation; interpolation error is
    # orders of magnitude below the DKW band
    grid = np.linspace(0.0, float(draws[-1]) * 1.001 + 1e-9, 4001)
    if a == 1.0:
        exact = np.array([gamma_closed_form_cdf(s, n) for s in grid])
    else:
        exact, _ = null_cdf_grid(grid, spec, settings)
    cdf_at = PchipInterpolator(grid, exact)
    f = cdf_at(draws)
    steps_hi = np.arange(1, replicates + 1) / replicates
    steps_lo = np.arange(0, replicates) / replicates
    sup = float(max(np.max(np.abs(steps_hi - f)), np.max(np.abs(f - steps_lo))))
    band = math.sqrt(math.log(2.0 / 0.01) / (2.0 * replicates))
    return {
        "a": a,
        "n": n,
        "replicates": replicates,
        "seed": seed,
        "sup_distance": sup,
        "dkw_band_1pct": band,
        "within_band": bool(sup <= band),
        "version": __version__,
        "timestamp": _now(),
    }


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tailtest",
        description="Tail-sensitive goodness-of-fit testing "
                    "(defaults: a=1, side=right, method=auto).")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test a sample against a theoretical CDF")
    t.add_argument("sample", help="sample file (one value per line, or CSV)")
    t.add_argument("--dist", required=True,
                   help="uniform(lo,hi) | normal(mu,sigma) | exponential(rate) "
                        "| table:<csv> | ecdf:<paths>")
    t.add_argument("--a", type=float, default=1.0,
                   help="tail exponent (default 1; larger = more tail weight)")
    t.add_argument("--side", choices=["right", "left", "both"], default="right")
    t.add_argument("--method", choices=["auto", "exact", "asymptotic", "mc"],
                   default="auto")
    t.add_argument("--output", choices=["text", "json"], default="text")
    t.add_argument("--column", help="CSV column name to read")
    t.add_argument("--clamp-eps", type=float, default=None,
                   help="clamp transformed values above 1-eps instead of "
                        "reporting an infinite statistic")
    t.add_argument("--seed", type=int, default=0, help="RNG seed (mc method)")
    t.add_argument("--mc-replicates", type=int, default=200_000)

    nt = sub.add_parser("null-table", help="tabulate the null CDF on a grid")
    nt.add_argument("--a", type=float)
    nt.add_argument("--n", type=int)
    nt.add_argument("--alpha", type=float,
                    help="limit law with alpha = a/n fixed (instead of --a/--n)")
    nt.add_argument("--sigma", required=True,
                    help="grid: 'v1,v2,...' or 'lo:hi:count'")
    nt.add_argument("--out", help="output CSV path (default stdout)")

    p = sub.add_parser("power", help="rejection-rate study at level 0.05")
    p.add_argument("--null-dist", required=True)
    p.add_argument("--alt-dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a-list", default="1,2,4,8",
                   help="comma-separated tail exponents (default 1,2,4,8)")
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--side", choices=["right", "left"], default="right")
    p.add_argument("--out", help="output CSV path (default stdout)")

    k = sub.add_parser("ks", help="Kolmogorov/Smirnov baseline test")
    k.add_argument("sample_a")
    k.add_argument("sample_b", nargs="?", default=None)
    k.add_argument("--dist", help="theoretical CDF for the one-sample test")
    k.add_argument("--column", help="CSV column name to read")
    k.add_argument("--output", choices=["text", "json"], default="text")

    m = sub.add_parser("mc-calibrate",
                       help="compare Monte Carlo draws with the exact CDF")
    m.add_argument("--a", type=float, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--replicates", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--output", choices=["text", "json"], default="text")
    return ap


def _write_csv(rows: list[dict], out_path: str | None) -> None:
    def dump(fh):
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()),
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            dump(fh)
    else:
        dump(sys.stdout)


def _cmd_test(args) -> int:
    report = run_test(args.sample, args.dist, a=args.a, side=args.side,
                      method=args.method, output=args.output,
                      column=args.column, clamp_eps=args.clamp_eps,
                      seed=args.seed, mc_replicates=args.mc_replicates)
    if args.output == "json":
        _emit(report.to_dict(), "json", sys.stdout)
    else:
        print(report.to_text())
    return 0


def _cmd_null_table(args) -> int:
    rows = null_table(args.a, args.n, args.alpha, parse_sigma_grid(args.sigma))
    _write_csv(rows, args.out)
    return 0


def _cmd_power(args) -> int:
    try:
        a_list = [float(x) for x in args.a_list.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse --a-list {args.a_list!r}")
    rows = power_study(args.null_dist, args.alt_dist, args.n, a_list,
                       args.replicates, args.seed, side=args.side)
    _write_csv(rows, args.out)
    return 0


def _cmd_ks(args) -> int:
    result = ks_test(args.sample_a, args.sample_b, args.dist, column=args.column)
    if args.output == "json":
        _emit(result, "json", sys.stdout)
    else:
        print(f"kind   : {result['kind']}")
        print(f"D      : {result['D']:.10g}")
        print(f"lambda : {result['lambda']:.10g}")
        print(f"p      : {result['p']:.6g}")
        if result["small_sample_warning"]:
            print("warning: n < 20, asymptotic p may be inaccurate")
    return 0


def _cmd_mc_calibrate(args) -> int:
    result = mc_calibrate(args.a, args.n, args.replicates, args.seed)
    if args.output == "json":
        _emit(result, "json", sys.stdout)
    else:
        for key in ("a", "n", "replicates", "seed", "sup_distance",
                    "dkw_band_1pct", "within_band"):
            print(f"{key:15s}: {result[key]}")
    return 0


_COMMANDS = {
    "test": _cmd_test,
    "null-table": _cmd_null_table,
    "power": _cmd_power,
    "ks": _cmd_ks,
    "mc-calibrate": _cmd_mc_calibrate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InputError, InvalidModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 2
    except TailTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
