"""End-to-end analysis of a filter bank: spreads, normalization, weighted
spreads, model fits, tables and images."""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .bankio import FilterBank
from .exceptions import ScaleSpaceError
from .fit import DEFAULT_BOUNDS, FitResult, Method, fit
from .kernels import Family, ideal_filter
from .measures import WeightSpec, l1_norm, respond_to_monomial, spread
from .normalize import NormalizedFilter, NormKind, normalize_for_family
from .optim import Bounds1D
from .render import render_ppm
from .report import ReportTable

log = logging.getLogger(__name__)

SCALE_METHODS = ("A", "B", "C1", "C2", "D1", "D2")
SHARPEN_METHODS = ("S7L1", "S7L2")
THREADS_ENV = "SCALESPACE_FIT_THREADS"
MONOMIALS = ((0, 0), (1, 0), (0, 1), (1, 1))


def load_assignment(path) -> dict[str, int]:
    """Read a name -> family mapping, either JSON or ``name family`` lines."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for k, raw in enumerate(text.splitlines(), 1):
            raw = raw.split("#", 1)[0].strip()
            if not raw:
                continue
            parts = raw.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{k}: expected '<name> <family>'")
            data[parts[0]] = parts[1]
    if not isinstance(data, dict):
        raise ValueError(f"{path}: assignment must map filter names to families")
    return {str(k): int(Family(int(v))) for k, v in data.items()}


def default_assignment(bank: FilterBank) -> dict[str, int]:
    """Bank order taken as the family order 1, 2, ..."""
    if len(bank) > len(Family):
        raise ValueError("cannot infer family roles for more than 9 filters; pass an assignment")
    return {name: i + 1 for i, name in enumerate(bank.names)}


def resolve_threads(requested: int = 1) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    return max(1, int(requested))


@dataclass
class PipelineConfig:
    assign: dict[str, int]
    methods: tuple[str, ...] = SCALE_METHODS + SHARPEN_METHODS
    sigma0: float = 1.0
    precision: int = 3
    bounds: Bounds1D = DEFAULT_BOUNDS
    threads: int = 1
    upscale: int = 10
    render: bool = True


@dataclass
class PipelineResult:
    tables: dict[str, ReportTable] = field(default_factory=dict)
    normalized: dict[str, NormalizedFilter] = field(default_factory=dict)
    fits: dict[tuple[str, str], FitResult] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.fits.values())


def _applicable(method: str, family: Family) -> bool:
    if method in SHARPEN_METHODS:
        return family is Family.Sharpen
    if family is Family.Sharpen:
        return False
    if method in ("A", "B"):
        return family is not Family.DxyMixed
    return True


def _spread_cells(s):
    return [s.mean[0], s.mean[1], s.cov[0, 0], s.cov[0, 1], s.cov[1, 1]]


def run_pipeline(bank: FilterBank, config: PipelineConfig, out_dir=None) -> PipelineResult:
    res = PipelineResult()
    prec = config.precision
    fam = {}
    for name in bank.names:
        if name not in config.assign:
            res.errors.append(f"{name}: no family assignment; skipped")
            continue
        fam[name] = Family(config.assign[name])
    names = [n for n in bank.names if n in fam]
    spread_cols = ["m_x", "m_y", "v_xx", "v_xy", "v_yy"]

    t = ReportTable("Norms and spread measures of |h|", ["filter", "l1"] + spread_cols, precision=prec)
    r = ReportTable("Responses to shift-adjusted monomials",
                    ["filter", "resp_1", "resp_x", "resp_y", "resp_xy"], precision=prec)
    for name in names:
        h = bank[name]
        s = spread(h)
        t.add_row([name, l1_norm(h)] + _spread_cells(s))
        r.add_row([name] + [respond_to_monomial(h, a, b, s.mean) for a, b in MONOMIALS])
    res.tables["spreads"] = t
    res.tables["monomial_responses"] = r

    nr = ReportTable("Responses of normalized filters",
                     ["filter", "scale", "resp_1", "resp_x", "resp_y", "resp_xy"],
                     precision=prec)
    dc = ReportTable("DC-compensated filters", ["filter", "C", "l1_norm"] + spread_cols, precision=prec)
    for name in names:
        try:
            n = normalize_for_family(bank[name], fam[name])
        except (ScaleSpaceError, ValueError) as exc:
            res.errors.append(f"{name}: normalization failed: {exc}")
            continue
        res.normalized[name] = n
        g = n.grid
        s = spread(g)
        nr.add_row([name, n.scale_applied]
                   + [respond_to_monomial(g, a, b, s.mean) for a, b in MONOMIALS])
        if n.kind is NormKind.DC_UNIT:
            dc.add_row([name, n.dc_constant, l1_norm(g)] + _spread_cells(s))
    res.tables["normalized_responses"] = nr
    res.tables["dc_compensation"] = dc

    ws = ReportTable(f"Weighted spread measures (sigma0 = {config.sigma0:g})", ["filter"] + spread_cols,
                     precision=prec)
    for name, n in res.normalized.items():
        if fam[name] in (Family.Sharpen, Family.DxyMixed):
            continue
        s = spread(n.grid, WeightSpec.for_family(fam[name], config.sigma0))
        ws.add_row([name] + _spread_cells(s))
    res.tables["weighted_spreads"] = ws

    jobs = [(name, m) for m in config.methods for name in res.normalized if _applicable(m, fam[name])]

    def run(job):
        name, m = job
        try:
            return job, fit(res.normalized[name], fam[name], m, config.sigma0, config.bounds), None
        except (ScaleSpaceError, ValueError) as exc:
            return job, None, f"{name}: method {m} failed: {exc}"

    threads = resolve_threads(config.threads)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(j) for j in jobs]
    for job, fr, err in sorted(outcomes, key=lambda o: jobs.index(o[0])):
        if err:
            res.errors.append(err)
        else:
            res.fits[job] = fr
            if not fr.converged:
                res.errors.append(f"{job[0]}: method {job[1]} did not converge")

    for m in config.methods:
        if m in SHARPEN_METHODS:
            continue
        tied = m in ("C2", "D2")
        cols = ["filter"] + (["sigma"] if tied else ["sigma_x", "sigma_y"]) + ["residual_l1", "residual_l2"]
        mt = ReportTable(f"Scale estimates, method {m}", cols, precision=prec)
        for name in names:
            fr = res.fits.get((name, m))
            if fr is None:
                continue
            sc = [fr.sigma_x] if tied else [fr.sigma_x, fr.sigma_y]
            mt.add_row([name] + sc + [fr.residual_l1, fr.residual_l2])
        res.tables[f"method_{m}"] = mt
    st = ReportTable("Sharpening model (sigma, gamma)", ["filter", "norm", "sigma", "gamma",
                                                         "residual_l1", "residual_l2"], precision=prec)
    for m in SHARPEN_METHODS:
        for name in names:
            fr = res.fits.get((name, m))
            if fr is not None:
                st.add_row([name, "l1" if m == "S7L1" else "l2", fr.sigma_x, fr.spec.gamma,
                            fr.residual_l1, fr.residual_l2])
    res.tables["sharpen"] = st

    ov_cols = ["filter"]
    for m in SCALE_METHODS:
        if m in config.methods:
            ov_cols += [f"{m}_sigma"] if m in ("C2", "D2") else [f"{m}_sigma_x", f"{m}_sigma_y"]
    ov = ReportTable("Overview of scale estimates", ov_cols, precision=prec)
    for name in names:
        row = [name]
        for m in SCALE_METHODS:
            if m not in config.methods:
                continue
            fr = res.fits.get((name, m))
            if fr is None and fam[name] is Family.Sharpen and m in ("C2", "D2"):
                fr = res.fits.get((name, "S7L1" if m == "C2" else "S7L2"))
            width = 1 if m in ("C2", "D2") else 2
            if fr is None:
                row += [None] * width
            else:
                row += [fr.sigma_x] if width == 1 else [fr.sigma_x, fr.sigma_y]
        ov.add_row(row)
    res.tables["overview"] = ov

    if out_dir is not None:
        write_outputs(res, bank, config, out_dir)
    return res


def fitted_specs_text(res: PipelineResult) -> str:
    lines = []
    for (name, m), fr in res.fits.items():
        key = f"{name}.{m}"
        lines.append(f"{key}.family = {int(fr.spec.family)}")
        lines.append(f"{key}.sigma_x = {fr.sigma_x:.17g}")
        lines.append(f"{key}.sigma_y = {fr.sigma_y:.17g}")
        if fr.spec.gamma is not None:
            lines.append(f"{key}.gamma = {fr.spec.gamma:.17g}")
        lines.append(f"{key}.residual_l1 = {fr.residual_l1:.17g}")
        lines.append(f"{key}.residual_l2 = {fr.residual_l2:.17g}")
        lines.append(f"{key}.objective_evals = {fr.objective_evals}")
        lines.append(f"{key}.converged = {str(fr.converged).lower()}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_outputs(res: PipelineResult, bank: FilterBank, config: PipelineConfig, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    md = []
    for key, table in res.tables.items():
        (out / f"{key}.csv").write_text(table.to_csv(), encoding="utf-8")
        md.append(table.to_markdown())
    (out / "tables.md").write_text("\n".join(md), encoding="utf-8")
    (out / "fitted_specs.txt").write_text(fitted_specs_text(res), encoding="utf-8")
    (out / "errors.txt").write_text("".join(e + "\n" for e in res.errors), encoding="utf-8")
    if not config.render:
        return
    for sub in ("learned", "normalized"):
        (out / sub).mkdir(exist_ok=True)
    for name, grid in bank:
        render_ppm(grid, out / "learned" / f"{name}.ppm", config.upscale)
    for name, n in res.normalized.items():
        render_ppm(n.grid, out / "normalized" / f"{name}.ppm", config.upscale)
    for (name, m), fr in res.fits.items():
        d = out / "idealized" / m
        d.mkdir(parents=True, exist_ok=True)
        g = bank[name]
        render_ppm(ideal_filter(fr.spec, g.radius_x, g.radius_y), d / f"{name}.ppm", config.upscale)
