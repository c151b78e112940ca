"""Command-line interface.

Exit status: 0 on success, 1 on input errors, 2 when an optimizer did not
converge.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .approx import CANONICAL_SPECS, classify
from .bankio import FilterBank, load_bank, save_bank
from .exceptions import BankFormatError, DegenerateError, ScaleSpaceError
from .fit import Method
from .kernels import Family, IdealizedSpec, ideal_filter
from .measures import WeightSpec, l1_norm, spread
from .normalize import normalize_for_family
from .pipeline import PipelineConfig, default_assignment, load_assignment, run_pipeline
from .render import render_ppm
from .report import ReportTable

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2



def _assignment(args, bank):
    if getattr(args, "assign", None):
        return load_assignment(args.assign)
    return default_assignment(bank)


def cmd_gen(args) -> int:
    if args.family == "all":
        entries = []
        for idx, spec in CANONICAL_SPECS.items():
            entries.append((f"family{idx}", ideal_filter(spec, args.radius, args.radius)))
        save_bank(FilterBank(entries), args.output)
        return EXIT_OK
    family = Family(int(args.family))
    sy = args.sigma_y if args.sigma_y is not None else args.sigma_x
    spec = IdealizedSpec(family, (args.sigma_x, sy), args.gamma)
    name = args.name or f"family{int(family)}"
    save_bank(FilterBank([(name, ideal_filter(spec, args.radius, args.radius))]), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    bank = load_bank(args.bank)
    cols = ["filter", "l1", "m_x", "m_y", "v_xx", "v_xy", "v_yy"]
    table = ReportTable("Spread measures" + (" (weighted)" if args.weighted else ""), cols,
                        precision=args.precision)
    assign = _assignment(args, bank) if args.weighted else {}
    for name, grid in bank:
        if args.weighted:
            fam = Family(assign[name])
            if fam in (Family.Sharpen, Family.DxyMixed):
                continue
            grid = normalize_for_family(grid, fam).grid
            s = spread(grid, WeightSpec.for_family(fam, args.sigma0))
        else:
            s = spread(grid)
        table.add_row([name, l1_norm(grid), s.mean[0], s.mean[1], s.cov[0, 0], s.cov[0, 1], s.cov[1, 1]])
    sys.stdout.write(table.to_csv() if args.csv else table.to_markdown())
    return EXIT_OK


def cmd_normalize(args) -> int:
    bank = load_bank(args.bank)
    assign = _assignment(args, bank)
    entries = [(name, normalize_for_family(grid, assign[name]).grid) for name, grid in bank]
    save_bank(FilterBank(entries, args.bank), args.output)
    return EXIT_OK


def cmd_fit(args) -> int:
    bank = load_bank(args.bank)
    method = Method(args.method).value
    config = PipelineConfig(assign=_assignment(args, bank), methods=(method,), sigma0=args.sigma0,
                            precision=args.precision, threads=args.threads, render=not args.no_render,
                            upscale=args.upscale)
    res = run_pipeline(bank, config, args.output)
    for e in res.errors:
        print(e, file=sys.stderr)
    return EXIT_OK if res.all_converged else EXIT_NONCONVERGED


def cmd_report(args) -> int:
    bank = load_bank(args.bank)
    config = PipelineConfig(assign=_assignment(args, bank), sigma0=args.sigma0, precision=args.precision,
                            threads=args.threads, render=not args.no_render, upscale=args.upscale)
    res = run_pipeline(bank, config, args.output)
    for e in res.errors:
        print(e, file=sys.stderr)
    return EXIT_OK if res.all_converged else EXIT_NONCONVERGED


def cmd_render(args) -> int:
    bank = load_bank(args.bank)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for name, grid in bank:
        render_ppm(grid, out / f"{name}.ppm", args.upscale)
    return EXIT_OK


def cmd_approx(args) -> int:
    bank = load_bank(args.bank)
    ref = load_bank(args.reference)
    reference = {i + 1: g for i, (_, g) in enumerate(ref)}
    ref_names = {i + 1: n for i, (n, _) in enumerate(ref)}
    rows = []
    for name, grid in bank:
        m = classify(grid, reference)
        rows.append([name, m.family_index, ref_names[m.family_index], repr(m.a), repr(m.b), repr(m.residual_l2)])
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["filter", "family_index", "reference", "a", "b", "residual_l2"])
        w.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scspfit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write an idealized filter (or the 9 canonical ones) as a bank")
    g.add_argument("--family", required=True, help="family 1-9, or 'all'")
    g.add_argument("--sigma-x", type=float, default=1.0)
    g.add_argument("--sigma-y", type=float, default=None)
    g.add_argument("--gamma", type=float, default=None)
    g.add_argument("--radius", type=int, default=3)
    g.add_argument("--name", default=None)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    def common(sp, fits=False):
        sp.add_argument("bank")
        sp.add_argument("--assign", default=None, help="JSON or 'name family' lines")
        sp.add_argument("--sigma0", type=float, default=1.0)
        sp.add_argument("--precision", type=int, default=3)
        if fits:
            sp.add_argument("--threads", type=int, default=1)
            sp.add_argument("--upscale", type=int, default=10)
            sp.add_argument("--no-render", action="store_true")

    a = sub.add_parser("analyze", help="print norms and spread measures")
    common(a)
    a.add_argument("--weighted", action="store_true")
    a.add_argument("--csv", action="store_true")
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("normalize", help="write the normalized bank")
    common(n)
    n.add_argument("-o", "--output", required=True)
    n.set_defaults(func=cmd_normalize)

    f = sub.add_parser("fit", help="fit idealized models with one method")
    common(f, fits=True)
    f.add_argument("--method", required=True, choices=[m.value for m in Method])
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(func=cmd_fit)

    r = sub.add_parser("report", help="run every stage and method, writing all tables and images")
    common(r, fits=True)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_report)

    rd = sub.add_parser("render", help="render every filter as a PPM image")
    rd.add_argument("bank")
    rd.add_argument("-o", "--output", required=True)
    rd.add_argument("--upscale", type=int, default=10)
    rd.set_defaults(func=cmd_render)

    ap = sub.add_parser("approx", help="classify filters against a reference bank by affine fit")
    ap.add_argument("bank")
    ap.add_argument("--reference", required=True)
    ap.add_argument("-o", "--output", required=True)
    ap.set_defaults(func=cmd_approx)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (BankFormatError, OSError, KeyError, ValueError, DegenerateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScaleSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
