"""Command-line interface.

Every command is a pure function of its input files, flags and seed; outputs
are written atomically (temp file + rename) so failed runs leave nothing
behind. Exit codes: 0 ok, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import concordance, diffs, distcorr, ingest, iot, netstats, plfit, series, synth
from .centrality import ccdf, influence_vector, top_k
from .errors import DataError
from .periods import Window


def _atomic_write(path: str | Path, lines: list[str]) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=".ionet-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(lines: list[str], out: str | None) -> None:
    if out:
        _atomic_write(out, lines)
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _load_table(path: str | None):
    return concordance.load_concordance(path) if path else concordance.default_table()


def _resolve_filter(name: str, filter_file: str | None):
    filters = concordance.default_filters()
    if filter_file:
        filters.update(concordance.load_filters(filter_file))
    if name not in filters:
        raise DataError(f"unknown filter {name!r}; have {sorted(filters)}")
    return filters[name]


def _fmt(v: float) -> str:
    return "" if isinstance(v, float) and np.isnan(v) else repr(v)


def cmd_build(args) -> None:
    records = ingest.parse_ledger(args.ledger)
    table = _load_table(args.concordance)
    if args.clean:
        relabel = args.granularity == "cpa"
        records, _ = concordance.split_raw_clean(records, table, relabel=relabel)
    matrices = iot.build_matrices(
        records, table, args.granularity, args.period, args.weight
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for m in matrices:
        iot.write_matrix_csv(m, outdir / f"iot_{args.weight}_{m.period}.csv")
    print(f"wrote {len(matrices)} matrices to {outdir}")


def cmd_netstats(args) -> None:
    m = iot.read_matrix_csv(args.matrix, kind=args.kind)
    if args.truncate is not None:
        m = iot.truncate(m, args.truncate, args.direction)
    report = netstats.network_stats(m)
    header = "period,kind," + ",".join(netstats.CSV_FIELDS)
    row = ",".join([m.period, m.kind] + [_fmt(v) for v in report.as_row()])
    _emit([header, row], args.out)


def cmd_density_sweep(args) -> None:
    m = iot.read_matrix_csv(args.matrix, kind=args.kind)
    start, stop, step = (float(v) for v in args.thresholds.split(":"))
    n_steps = int(round((stop - start) / step))
    lines = ["threshold,density"]
    for k in range(n_steps + 1):
        t = start + k * step
        report = netstats.network_stats(iot.truncate(m, t, args.direction))
        lines.append(f"{t:.6g},{_fmt(report.density)}")
    _emit(lines, args.out)


def cmd_centrality(args) -> None:
    m = iot.read_matrix_csv(args.matrix, kind=args.kind)
    for name in args.exclude or []:
        m = concordance.apply_filter(m, _resolve_filter(name, args.filter_file))
    shares = iot.to_shares(m, "input")
    v = influence_vector(shares, args.alpha)
    lines = ["sector,influence"]
    for code, value, _ in top_k(v, args.top):
        lines.append(f"{code},{value:.4f}")
    _emit(lines, args.out)
    if args.ccdf:
        xs, ps = ccdf(v.values)
        _atomic_write(
            args.ccdf,
            ["x,ccdf"] + [f"{float(x)!r},{float(p)!r}" for x, p in zip(xs, ps)],
        )


def _read_values(path: str) -> np.ndarray:
    vals = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            token = line.strip().split(",")[-1]
            if not token or token == "value":
                continue
            vals.append(float(token))
    return np.array(vals)


def cmd_plfit(args) -> None:
    x = _read_values(args.values)
    if args.quantile_truncate is not None:
        positive = x[x > 0]
        thr = float(np.quantile(positive, args.quantile_truncate))
        x = positive[positive >= thr]
    fit = plfit.fit_power_law(x, args.reps, args.seed, jobs=args.jobs)
    header = "year,weight,filter,gamma,xmin,loglik,ks,p,n_tail,reps,seed"
    row = ",".join(
        [
            args.year or "",
            args.weight or "",
            args.filter or "",
            f"{fit.gamma!r}",
            f"{fit.xmin!r}",
            f"{fit.loglik!r}",
            f"{fit.ks_stat!r}",
            f"{fit.p_value!r}",
            str(fit.n_tail),
            str(fit.bootstrap_reps),
            str(fit.seed),
        ]
    )
    _emit([header, row], args.out)


def cmd_corr(args) -> None:
    a = iot.read_matrix_csv(args.a, kind=args.kind)
    b = iot.read_matrix_csv(args.b, kind=args.kind)
    if args.mode == "edges":
        coeff = series.edge_correlation(
            a, b, args.transform, include_diagonal=not args.no_diagonal
        )
        desc = f"edges,{args.transform}"
    else:
        if args.growth:
            pa = iot.read_matrix_csv(args.prior_a, kind=args.kind)
            pb = iot.read_matrix_csv(args.prior_b, kind=args.kind)
            coeff = series.node_correlation(
                (pa, a), (pb, b), args.side, "growth-vs-prior-matrix"
            )
            desc = f"nodes,{args.side}-growth"
        else:
            coeff = series.node_correlation(a, b, args.side, "levels")
            desc = f"nodes,{args.side}"
    _emit(["mode,transform,coefficient", f"{desc},{_fmt(coeff)}"], args.out)


def _window_from_arg(spec: str | None) -> Window | None:
    if not spec:
        return None
    lo, hi = spec.split(":")
    return Window(exclude=((lo, hi),))


def cmd_benchmark(args) -> None:
    records = ingest.parse_ledger(args.payments)
    macros = {s.name: series.TimeSeries(s.frequency, s.observations)
              for s in ingest.parse_macro_series(args.macro)}
    rows: dict[str, series.TimeSeries] = {}
    for freq, tag in (("annual", "yearly"), ("monthly", "monthly")):
        value = series.aggregate_ledger(records, "value", freq)
        count = series.aggregate_ledger(records, "count", freq)
        rows[f"{tag}_value"] = value
        rows[f"{tag}_count"] = count
        rows[f"{tag}_avg"] = series.average_value(value, count)
    window = _window_from_arg(args.exclude_window)
    table = series.benchmark_table(
        rows,
        macros,
        method=args.method,
        window=window,
        growth=args.growth,
        share_year=args.share_year,
        share_row="yearly_value" if args.share_year else None,
    )
    _emit(table.to_csv_lines(), args.out)


def cmd_distcorr(args) -> None:
    monthly = [
        iot.read_matrix_csv(p, kind=args.kind, period=p.stem.rsplit("_", 1)[-1])
        for p in sorted(Path(args.monthly_dir).glob("*.csv"))
    ]
    if not monthly:
        raise DataError(f"no matrix CSVs in {args.monthly_dir}")
    annual = iot.read_matrix_csv(args.annual, kind=args.kind)
    dist = distcorr.shortest_paths(
        annual, args.threshold, symmetrize=not args.directed
    )
    bins = distcorr.growth_corr_by_distance(
        monthly, dist, args.side, args.method, pooled=args.pooled
    )
    lines = ["threshold,side,weight,method,distance,mean_corr,n_pairs,n_undefined"]
    for b in bins:
        lines.append(
            f"{args.threshold},{args.side},{args.kind},{args.method},"
            f"{b.distance},{_fmt(b.mean_corr)},{b.n_pairs},{b.n_undefined}"
        )
    _emit(lines, args.out)


def cmd_diff(args) -> None:
    a = iot.read_matrix_csv(args.a, kind=args.kind)
    b = iot.read_matrix_csv(args.b, kind=args.kind)
    policy = "include" if args.include_zero else "drop-one-sided"
    if args.metric == "proportional":
        xs = diffs.proportional_diff(a, b, policy)
    else:
        xs = diffs.scaled_pct_diff(a, b, policy, scale_floor=args.scale_floor)
    lines = []
    if args.quantiles:
        qs = diffs.quantiles(xs, [0.25, 0.50, 0.75, 1.0])
        lines.append("q25,q50,q75,q100")
        lines.append(",".join(f"{float(q)!r}" for q in qs))
    if args.hist:
        finite = xs[np.isfinite(xs)]
        edges, counts = diffs.log10_histogram(finite[finite > 0], args.hist)
        lines.append("bin_left,bin_right,count")
        for i, c in enumerate(counts):
            lines.append(f"{float(edges[i])!r},{float(edges[i + 1])!r},{c}")
    if not lines:
        lines = ["n,metric", f"{xs.size},{args.metric}"]
    _emit(lines, args.out)


def cmd_synth(args) -> None:
    if args.size_dist == "uniform":
        dist = "uniform"
    else:
        name, _, exponent = args.size_dist.partition(":")
        dist = (name, float(exponent or 1.4))
    records = synth.gen_economy(
        seed=args.seed,
        n_sectors=args.sectors,
        months=args.months,
        size_distribution=dist,
        link_density=args.density,
        unclassified_share=args.unclassified_share,
        sdc="suppress-counts-below-50" if args.sdc else "off",
        start=args.start,
    )
    ingest.write_ledger(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ionet",
        description="Input-output transaction networks from payment ledgers",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="ledger -> flow matrix CSVs per period")
    b.add_argument("--ledger", required=True)
    b.add_argument("--concordance", help="sic_prefix,cpa_code CSV (default: shipped table)")
    grp = b.add_mutually_exclusive_group()
    grp.add_argument("--clean", action="store_true", default=True)
    grp.add_argument("--raw", dest="clean", action="store_false")
    b.add_argument("--granularity", choices=["cpa", "sic5"], default="cpa")
    b.add_argument("--period", choices=["monthly", "annual"], default="annual")
    b.add_argument("--weight", choices=["value", "count"], default="value")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    n = sub.add_parser("netstats", help="aggregate network statistics of a matrix")
    n.add_argument("--matrix", required=True)
    n.add_argument("--kind", default="value")
    n.add_argument("--truncate", type=float)
    n.add_argument("--direction", choices=["input", "output"], default="input")
    n.add_argument("--out")
    n.set_defaults(func=cmd_netstats)

    d = sub.add_parser("density-sweep", help="density at a grid of truncation thresholds")
    d.add_argument("--matrix", required=True)
    d.add_argument("--kind", default="value")
    d.add_argument("--thresholds", default="0:0.05:0.0025", help="start:stop:step")
    d.add_argument("--direction", choices=["input", "output"], default="input")
    d.add_argument("--out")
    d.set_defaults(func=cmd_density_sweep)

    c = sub.add_parser("centrality", help="influence-vector ranking and CCDF")
    c.add_argument("--matrix", required=True)
    c.add_argument("--kind", default="value")
    c.add_argument("--alpha", type=float, default=0.5)
    c.add_argument("--exclude", action="append", help="named sector filter (repeatable)")
    c.add_argument("--filter-file", help="extra name,prefix1;prefix2;... filters")
    c.add_argument("--top", type=int, default=10)
    c.add_argument("--ccdf", help="write CCDF plot data to this path")
    c.add_argument("--out")
    c.set_defaults(func=cmd_centrality)

    f = sub.add_parser("plfit", help="power-law tail fit with bootstrap p-value")
    f.add_argument("--values", required=True, help="one value per line (or last CSV column)")
    f.add_argument("--reps", type=int, default=500)
    f.add_argument("--seed", type=int, required=True)
    f.add_argument("--quantile-truncate", type=float)
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--year")
    f.add_argument("--weight")
    f.add_argument("--filter")
    f.add_argument("--out")
    f.set_defaults(func=cmd_plfit)

    r = sub.add_parser("corr", help="edge- or node-level correlation of two matrices")
    r.add_argument("mode", choices=["edges", "nodes"])
    r.add_argument("--a", required=True)
    r.add_argument("--b", required=True)
    r.add_argument("--kind", default="value")
    r.add_argument(
        "--transform",
        choices=["raw", "log10-positive", "input-share", "output-share"],
        default="raw",
    )
    r.add_argument("--no-diagonal", action="store_true")
    r.add_argument("--side", choices=["input", "output"], default="input")
    r.add_argument("--growth", action="store_true")
    r.add_argument("--prior-a", help="previous-period matrix for --growth")
    r.add_argument("--prior-b")
    r.add_argument("--out")
    r.set_defaults(func=cmd_corr)

    m = sub.add_parser("benchmark", help="correlation grid against macro aggregates")
    m.add_argument("--payments", required=True, help="ledger CSV")
    m.add_argument("--macro", required=True, help="series,period,value CSV")
    m.add_argument("--exclude-window", help="e.g. 2020-03:2022-12")
    m.add_argument("--growth", action="store_true")
    m.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    m.add_argument("--share-year")
    m.add_argument("--out")
    m.set_defaults(func=cmd_benchmark)

    g = sub.add_parser("distcorr", help="growth correlations by network distance")
    g.add_argument("--monthly-dir", required=True)
    g.add_argument("--annual", required=True)
    g.add_argument("--kind", default="value")
    g.add_argument("--threshold", type=float, required=True)
    g.add_argument("--side", choices=["input", "output"], default="input")
    g.add_argument("--method", choices=["spearman", "pearson"], default="spearman")
    g.add_argument("--directed", action="store_true")
    g.add_argument("--pooled", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_distcorr)

    q = sub.add_parser("diff", help="edge-level differences between two matrices")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--kind", default="value")
    q.add_argument("--metric", choices=["proportional", "scaledpct"], default="proportional")
    q.add_argument("--include-zero", action="store_true")
    q.add_argument("--scale-floor", type=float)
    q.add_argument("--quantiles", action="store_true")
    q.add_argument("--hist", type=int, help="number of log10 bins")
    q.add_argument("--out")
    q.set_defaults(func=cmd_diff)

    s = sub.add_parser("synth", help="generate a synthetic test ledger")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--sectors", type=int, default=50)
    s.add_argument("--months", type=int, default=12)
    s.add_argument("--start", default="2017-01")
    s.add_argument("--density", type=float, default=0.3)
    s.add_argument("--size-dist", default="pareto:1.4")
    s.add_argument("--unclassified-share", type=float, default=0.0)
    s.add_argument("--sdc", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DataError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
