"""Command-line driver: runs verification experiments and writes CSV/JSON reports.

Exit codes: 0 when every check passes, 1 when a check fails (the failing
check is named on stderr), 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import flow as flow_mod
from .geometry import functional_report, ricci_range, shape_field, ZonalHypersurface
from .spaceform import max_radius, sphere_invariants, xi
from .symfun import (
    IdentityViolation,
    combinatorial_identities,
    newton_eigs_alternating,
    newton_eigs_recursive,
    newton_stack,
    trace_residuals,
)
from .variation import (
    DeformationSpec,
    RicciPositivityError,
    ConvergenceError,
    evolution_residuals,
    numeric_second_variation,
    optimal_constant,
    sharpness_extrapolate,
)
from .zonal import ZonalFunction, make_grid, sphere_laplacian, zonal_harmonic

SUBCOMMANDS = ("identities", "sphere-check", "evolution", "second-variation", "sharpness", "flow")

DEFAULT_K = {
    "identities": [1],
    "sphere-check": list(range(1, 21)),
    "evolution": [1, 2, 5],
    "second-variation": [2, 5, 8],
    "sharpness": [2, 3, 5, 8, 12, 20, 30, 40],
    "flow": [3],
}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"config error in '{field_name}': {message}")
        self.field = field_name


@dataclass
class RunConfig:
    subcommand: str
    n: list = field(default_factory=lambda: [2, 3, 4, 5])
    c: list = field(default_factory=lambda: [-1.0, 0.0, 1.0])
    a: list = field(default_factory=lambda: [0.5, 1.0, 1.25])
    k: list | None = None
    r: list = field(default_factory=lambda: [1, 2, 3])
    C: list | None = None  # absolute constants; overrides C_frac
    C_frac: list = field(default_factory=lambda: [0.5, 0.9])  # fractions of the optimal constant
    N: int = 256
    t0: float | None = None
    J: int = 6
    h: float | None = None
    n_max: int = 30
    spectra: int = 200
    seed: int = 0
    out_dir: str = "umbilic-out"
    format: str = "csv"

    def validate(self):
        if self.subcommand not in SUBCOMMANDS + ("all",):
            raise ConfigError("subcommand", f"unknown subcommand {self.subcommand!r}")
        for name in ("n", "c", "a", "r", "C_frac"):
            if not isinstance(getattr(self, name), list) or not getattr(self, name):
                raise ConfigError(name, "must be a non-empty list")
        if self.k is not None and (not isinstance(self.k, list) or not self.k):
            raise ConfigError("k", "must be a non-empty list")
        if self.C is not None and (not isinstance(self.C, list) or not self.C):
            raise ConfigError("C", "must be a non-empty list")
        for n in self.n:
            if not isinstance(n, int) or n < 2:
                raise ConfigError("n", f"dimension must be an integer >= 2, got {n!r}")
        for k in self.k or []:
            if not isinstance(k, int) or k < 1:
                raise ConfigError("k", f"harmonic degree must be an integer >= 1, got {k!r}")
            if k > self.N - 8:
                raise ConfigError("k", f"k={k} needs N >= k + 8 (N={self.N})")
        for r in self.r:
            if not isinstance(r, int) or r < 1:
                raise ConfigError("r", f"r must be an integer >= 1, got {r!r}")
        if not any(r <= n - 1 for r in self.r for n in self.n):
            raise ConfigError("r", "no r in 1..n-1 for any n")
        for c in self.c:
            if not isinstance(c, (int, float)) or not math.isfinite(c):
                raise ConfigError("c", f"curvature must be finite, got {c!r}")
        for a in self.a:
            if not isinstance(a, (int, float)) or not a > 0:
                raise ConfigError("a", f"radius must be positive, got {a!r}")
            for c in self.c:
                if a >= max_radius(c):
                    raise ConfigError("a", f"radius {a} invalid for c={c} (must be < pi/sqrt(c))")
        for x in self.C_frac:
            if not isinstance(x, (int, float)) or not x > 0:
                raise ConfigError("C_frac", f"must be positive, got {x!r}")
        for x in self.C or []:
            if not isinstance(x, (int, float)) or not x > 0:
                raise ConfigError("C", f"must be positive, got {x!r}")
        if not isinstance(self.N, int) or self.N < 8:
            raise ConfigError("N", f"grid size must be an integer >= 8, got {self.N!r}")
        if not isinstance(self.J, int) or self.J < 2:
            raise ConfigError("J", f"must be an integer >= 2, got {self.J!r}")
        for name in ("t0", "h"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, (int, float)) or not v > 0):
                raise ConfigError(name, f"must be positive, got {v!r}")
        if self.t0 is not None:
            for a in self.a:
                if self.t0 > 0.1 * a:
                    raise ConfigError("t0", f"t0={self.t0} exceeds 0.1 a for a={a}")
        if not isinstance(self.n_max, int) or self.n_max < 2:
            raise ConfigError("n_max", f"must be an integer >= 2, got {self.n_max!r}")
        if not isinstance(self.spectra, int) or self.spectra < 1:
            raise ConfigError("spectra", f"must be a positive integer, got {self.spectra!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", f"must be 'csv' or 'json', got {self.format!r}")
        return self

    def ks(self, sub: str) -> list:
        return sorted(self.k) if self.k is not None else DEFAULT_K[sub]

    def spheres(self):
        for n in sorted(set(self.n)):
            for c in sorted(set(self.c)):
                for a in sorted(set(self.a)):
                    yield n, float(c), float(a)


# -- reporting ---------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer, str)):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


class Report:
    """Rows of one experiment plus the pass/fail ledger of its checks."""

    def __init__(self, name: str, header: list):
        self.name = name
        self.header = header
        self.rows = []
        self.failures = []
        self.passed = 0
        self.worst = 0.0

    def row(self, *values):
        self.rows.append(list(values))

    def check(self, ok: bool, label: str, residual: float | None = None):
        if residual is not None and math.isfinite(residual):
            self.worst = max(self.worst, abs(float(residual)))
        if ok:
            self.passed += 1
        else:
            self.failures.append(label)

    def write(self, out_dir: Path, fmt_name: str):
        if fmt_name == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            for r in self.rows:
                w.writerow([fmt(v) for v in r])
            (out_dir / f"{self.name}.csv").write_text(buf.getvalue())
        else:
            data = [dict(zip(self.header, (fmt(v) for v in r))) for r in self.rows]
            (out_dir / f"{self.name}.json").write_text(json.dumps(data, indent=1) + "\n")


def _pool_size() -> int:
    cap = os.environ.get("UMBILIC_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError("UMBILIC_THREADS", f"must be an integer, got {cap!r}")
    return n


def _parallel(fn, cells):
    cells = list(cells)
    workers = _pool_size()
    if workers == 1 or len(cells) < 2:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, cells))


# -- experiments ------------------------------------------------------------------


def run_identities(cfg: RunConfig) -> list[Report]:
    comb = Report("identities", ["identity", "n", "r", "lhs", "rhs", "residual"])
    for n in range(2, cfg.n_max + 1):
        try:
            rows = combinatorial_identities(n)
        except IdentityViolation as e:
            comb.check(False, f"binomial identity: {e}")
            continue
        for name, nn, r, lhs, rhs, res in rows:
            comb.row(name, nn, r, lhs, rhs, res)
            comb.check(res == 0, f"{name} (n={nn}, r={r})", res)

    trace = Report(
        "newton_traces",
        ["spectrum", "n", "r", "trace_P", "trace_AP", "trace_A2P", "definition_vs_recursion"],
    )
    rng = random.Random(cfg.seed)
    for s in range(cfg.spectra):
        n = rng.randint(1, 8)
        spec = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(n)]
        stack = newton_stack(spec)
        alt = newton_eigs_alternating(spec)
        rec = newton_eigs_recursive(spec)
        for r, (t1, t2, t3) in enumerate(trace_residuals(spec)):
            agree = list(stack.p_eigs[r]) == alt[r] == rec[r]
            trace.row(s, n, r, t1, t2, t3, agree)
            ok = t1 == 0 and t2 == 0 and t3 == 0 and agree
            trace.check(ok, f"Newton trace identities (spectrum {s}, r={r})", max(abs(t1), abs(t2), abs(t3)))
    return [comb, trace]


def _sphere_cell(cell):
    cfg, (n, c, a) = cell
    S = sphere_invariants(n, c, a)
    g = make_grid(n, cfg.N)
    surf = ZonalHypersurface(n, c, ZonalFunction(g, np.full(g.N, a)))
    sf = shape_field(surf)
    rs = [r for r in cfg.r if r <= n - 1]
    rep = functional_report(sf, rs)
    curv = max(abs(S.lam), math.sqrt(S.omega))
    h_err = float(np.max(np.abs(sf.H - n * S.lam))) / (n * curv)
    rmin, rmax = ricci_range(sf)
    ric = (n - 1) * S.omega
    ric_err = max(abs(rmin - ric), abs(rmax - ric)) / abs(ric)
    om_err = abs(S.omega - 1 / S.sn**2) * S.sn**2
    vol = rep.volume
    out = {
        "geo": [
            (n, c, a, 0, "umbilic-H", h_err, 1e-12),
            (n, c, a, 0, "ricci", ric_err, 1e-12),
            (n, c, a, 0, "omega", om_err, 1e-14),
            (n, c, a, 0, "traceless-A", rep.norm_Aring / vol / curv**2, 1e-18),
            (n, c, a, 0, "dev-H", rep.dev_H / vol / curv**2, 1e-18),
        ],
        "eig": [],
    }
    for r in rs:
        sc = (math.comb(n, r) * curv**r) ** 2
        out["geo"].append((n, c, a, r, "traceless-P", rep.per_r[r]["norm_Pring"] / vol / sc, 1e-18))
        out["geo"].append((n, c, a, r, "dev-sr", rep.per_r[r]["dev_sr"] / vol / sc, 1e-18))
    for k in cfg.ks("sphere-check"):
        f = zonal_harmonic(g, k)
        res = sphere_laplacian(f, S.sn).values + xi(S, k) * f.values
        out["eig"].append((n, c, a, k, float(np.max(np.abs(res))) / f.sup()))
    return out


def run_sphere_check(cfg: RunConfig) -> list[Report]:
    geo = Report("sphere_check", ["n", "c", "a", "r", "quantity", "value", "tolerance"])
    eig = Report("eigen_residuals", ["n", "c", "a", "k", "residual"])
    for out in _parallel(_sphere_cell, [(cfg, s) for s in cfg.spheres()]):
        for n, c, a, r, q, v, tol in out["geo"]:
            geo.row(n, c, a, r, q, v, tol)
            geo.check(v <= tol, f"sphere {q} (n={n}, c={c}, a={a}, r={r}): {v:.3e} > {tol:g}", v)
        for n, c, a, k, v in out["eig"]:
            eig.row(n, c, a, k, v)
            eig.check(v <= 1e-8, f"Laplace eigen-equation (n={n}, c={c}, a={a}, k={k}): {v:.3e}", v)
    return [geo, eig]


def _evolution_cell(cell):
    cfg, (n, c, a), k = cell
    S = sphere_invariants(n, c, a)
    g = make_grid(n, cfg.N)
    rs = [r for r in cfg.r if r <= n - 1]
    return (n, c, a, k), evolution_residuals(S, zonal_harmonic(g, k), rs, cfg.h)


def run_evolution(cfg: RunConfig) -> list[Report]:
    rep = Report(
        "evolution",
        ["n", "c", "a", "k", "r", "equation_id", "h", "residual", "order", "extrapolated_residual"],
    )
    cells = [(cfg, s, k) for s in cfg.spheres() for k in cfg.ks("evolution")]
    for (n, c, a, k), lines in _parallel(_evolution_cell, cells):
        for L in lines:
            for step, res in zip((L.h, L.h / 2), L.residuals):
                rep.row(n, c, a, k, L.r, L.equation_id, step, res, L.order, L.extrapolated_residual)
            ok = L.order >= 1.9 and L.extrapolated_residual <= 1e-6
            rep.check(
                ok,
                f"{L.equation_id} (n={n}, c={c}, a={a}, k={k}, r={L.r}): order {L.order:.3f}, "
                f"extrapolated residual {L.extrapolated_residual:.3e}",
                L.extrapolated_residual,
            )
    return [rep]


def _constants(cfg: RunConfig, n: int, r: int) -> list:
    if cfg.C is not None:
        return sorted(cfg.C)
    return [x * optimal_constant(n, r) for x in sorted(cfg.C_frac)]


def _second_variation_cell(cell):
    cfg, (n, c, a), k, r = cell
    S = sphere_invariants(n, c, a)
    spec = DeformationSpec(S, k, (r,) if r > 1 else (), N=cfg.N, t0=cfg.t0, J=cfg.J)
    kind = "F" if r == 1 else "G"
    out = []
    for C in _constants(cfg, n, r):
        try:
            out.append((C, numeric_second_variation(spec, kind, C, r), None))
        except ConvergenceError as e:
            out.append((C, None, str(e)))
    return (n, c, a, k, r, kind), out


def run_second_variation(cfg: RunConfig) -> list[Report]:
    rep = Report(
        "second_variation",
        ["n", "c", "a", "k", "r", "kind", "C", "t", "estimate", "extrapolated", "predicted", "rel_err", "order"],
    )
    cells = [
        (cfg, s, k, r)
        for s in cfg.spheres()
        for k in cfg.ks("second-variation")
        for r in sorted(set(cfg.r))
        if r <= s[0] - 1 and r <= 2
    ]
    for (n, c, a, k, r, kind), results in _parallel(_second_variation_cell, cells):
        for C, sv, err in results:
            label = "second variation of F" if kind == "F" else f"second variation of G (r={r})"
            where = f"(n={n}, c={c}, a={a}, k={k}, C={C:.6g})"
            if sv is None:
                rep.check(False, f"{label} {where}: {err}")
                continue
            for t, e in zip(sv.amplitudes, sv.estimates):
                rep.row(n, c, a, k, r, kind, C, t, e / sv.l2, sv.coefficient, sv.predicted, sv.rel_err, sv.order)
            rep.check(sv.rel_err <= 1e-3, f"{label} {where}: rel_err {sv.rel_err:.3e}", sv.rel_err)
            rep.check(sv.order >= 1.5, f"{label} {where}: order {sv.order:.3f}")
            same_sign = np.sign(sv.coefficient) == np.sign(sv.predicted)
            rep.check(bool(same_sign), f"{label} {where}: sign differs from the closed form")
    return [rep]


def _sharpness_cell(cell):
    cfg, (n, c, a), k = cell
    S = sphere_invariants(n, c, a)
    rs = tuple(r for r in cfg.r if 2 <= r <= n - 1)
    try:
        spec = DeformationSpec(S, k, rs, N=cfg.N, t0=cfg.t0, J=cfg.J)
        return (n, c, a, k), sharpness_extrapolate(spec), None
    except (RicciPositivityError, ValueError) as e:
        return (n, c, a, k), None, str(e)


def run_sharpness(cfg: RunConfig) -> list[Report]:
    rep = Report(
        "sharpness",
        ["n", "c", "a", "r", "k", "t", "ratio", "ratio_extrapolated", "predicted", "rel_err", "min_ricci"],
    )
    cells = [(cfg, s, k) for s in cfg.spheres() for k in cfg.ks("sharpness")]
    limits = {}
    for (n, c, a, k), res, err in _parallel(_sharpness_cell, cells):
        if res is None:
            rep.check(False, f"sharpness (n={n}, c={c}, a={a}, k={k}): {err}")
            continue
        rel = res.rel_err
        for key in res.ratios:
            r = 1 if key == "H" else key
            if r not in cfg.r:
                continue
            for t, ratio, ric in zip(res.amplitudes, res.ratios[key], res.min_ricci):
                rep.row(n, c, a, r, k, t, ratio, res.extrapolated[key], res.predicted[key], rel[key], ric)
            if k == 1:
                continue  # ratio is 0/0 at second order; only the closed form is defined
            tol = 1e-4 if k <= 12 else 1e-3
            where = f"(n={n}, c={c}, a={a}, r={r}, k={k})"
            rep.check(rel[key] <= tol, f"ratio limit {where}: rel_err {rel[key]:.3e}", rel[key])
            copt2 = optimal_constant(n, r) ** 2
            rep.check(res.extrapolated[key] < copt2, f"ratio limit below optimal constant {where}")
            limits.setdefault((n, r, k), []).append(res.extrapolated[key])
    for (n, r, k), vals in sorted(limits.items()):
        spread = (max(vals) - min(vals)) / abs(np.mean(vals))
        rep.check(spread <= 1e-4, f"c/a independence (n={n}, r={r}, k={k}): spread {spread:.3e}", spread)
    return [rep]


def _flow_cell(cell):
    cfg, (n, c, a), k = cell
    S = sphere_invariants(n, c, a)
    rows = []
    # parallel spheres under constant speed
    g = make_grid(n, cfg.N)
    s = 0.2 * a
    T = 0.5
    if a + s * T >= max_radius(c):
        T = 0.5 * (max_radius(c) - a) / s
    fc = ZonalFunction(g, np.full(g.N, s))
    st = flow_mod.integrate_normal_flow(S, fc, T, flow_mod.max_stable_dt(S, fc), keep="last")[-1]
    S_t = sphere_invariants(n, c, a + s * st.t)
    H = shape_field(st.surface()).H
    err = float(np.max(np.abs(H - S_t.H))) / max(abs(S_t.H), n * math.sqrt(S_t.omega))
    rows.append(("parallel-sphere-H", st.t, flow_mod.max_stable_dt(S, fc), err, err <= 1e-10, err))
    # temporal order of RK4 on a coarse grid
    gc = make_grid(n, 32)
    f = zonal_harmonic(gc, k) * (0.3 * a)
    dt = flow_mod.max_stable_dt(S, f)
    T = 0.5
    ends = [
        flow_mod.integrate_normal_flow(S, f, T, dt / m, keep="last")[-1].u.values for m in (1, 2, 4, 16)
    ]
    e1 = float(np.max(np.abs(ends[1] - ends[3])))
    e2 = float(np.max(np.abs(ends[2] - ends[3])))
    order = math.log2(e1 / e2) if e2 > 0 else math.inf
    rows.append(("rk4-order", T, dt / 2, order, order >= 3.8, None))
    # flow vs radial path
    f = zonal_harmonic(g, k)
    ts = [0.02 * a, 0.01 * a]
    d = []
    for t in ts:
        cmp = flow_mod.flow_vs_radial(S, f, t)
        d.append(abs(cmp.difference("F", 1.0)) / t**2)
        rows.append(("flow-vs-radial-F-over-t2", t, flow_mod.max_stable_dt(S, f), d[-1], True, None))
    slope = math.log2(d[0] / d[1]) if d[1] > 0 else math.inf
    rows.append(("flow-vs-radial-slope", ts[1], flow_mod.max_stable_dt(S, f), slope, slope >= 1, None))
    return (n, c, a, k), rows


def run_flow(cfg: RunConfig) -> list[Report]:
    rep = Report("flow", ["n", "c", "a", "k", "experiment", "t", "dt", "value", "passed"])
    cells = [(cfg, s, k) for s in cfg.spheres() for k in cfg.ks("flow")]
    for (n, c, a, k), rows in _parallel(_flow_cell, cells):
        for name, t, dt, val, ok, res in rows:
            rep.row(n, c, a, k, name, t, dt, val, ok)
            rep.check(ok, f"{name} (n={n}, c={c}, a={a}, k={k}): value {val:.6g}", res)
    return [rep]


RUNNERS = {
    "identities": run_identities,
    "sphere-check": run_sphere_check,
    "evolution": run_evolution,
    "second-variation": run_second_variation,
    "sharpness": run_sharpness,
    "flow": run_flow,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Run the configured subcommand, write reports and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        _pool_size()
    except ConfigError as e:
        print(str(e), file=stderr)
        return 2
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    subs = SUBCOMMANDS if cfg.subcommand == "all" else (cfg.subcommand,)
    reports = []
    for sub in subs:
        reports.extend(RUNNERS[sub](cfg))
    for rep in reports:
        rep.write(out, cfg.format)
    failures = [f for rep in reports for f in rep.failures]
    summary = {
        "subcommand": cfg.subcommand,
        "pass": not failures,
        "fail": len(failures),
        "checks": sum(rep.passed for rep in reports) + len(failures),
        "worst_residual": fmt(max((rep.worst for rep in reports), default=0.0)),
        "failed_checks": failures,
    }
    name = cfg.subcommand.replace("-", "_")
    text = json.dumps(summary, indent=1, sort_keys=True) + "\n"
    (out / f"{name}_summary.json").write_text(text)
    stdout.write(text)
    for f in failures:
        print(f"FAILED: {f}", file=stderr)
    return 1 if failures else 0


# -- argument parsing ----------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="umbilic", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--n", type=int, nargs="+", help="dimensions")
    common.add_argument("--c", type=float, nargs="+", help="ambient curvatures")
    common.add_argument("--a", type=float, nargs="+", help="geodesic radii")
    common.add_argument("--k", type=int, nargs="+", help="harmonic degrees")
    common.add_argument("--r", type=int, nargs="+", help="orders of the symmetric functions")
    common.add_argument("--C", type=float, nargs="+", help="absolute constants C")
    common.add_argument("--C-frac", dest="C_frac", type=float, nargs="+",
                        help="constants as fractions of the optimal constant")
    common.add_argument("--N", type=int, help="grid size")
    common.add_argument("--t0", type=float, help="largest deformation amplitude")
    common.add_argument("--J", type=int, help="number of amplitude halvings")
    common.add_argument("--h", type=float, help="finite-difference step")
    common.add_argument("--n-max", dest="n_max", type=int, help="largest n for binomial identities")
    common.add_argument("--spectra", type=int, help="number of random rational spectra")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--out-dir", dest="out_dir", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), help="row output format")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS + ("all",):
        sub.add_parser(name, parents=[common])
    return p


def config_from_args(argv=None) -> RunConfig:
    args = _parser().parse_args(argv)
    values = {}
    if args.config:
        try:
            values = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("config", str(e))
        if not isinstance(values, dict):
            raise ConfigError("config", "top level must be a JSON object")
    known = {f.name for f in fields(RunConfig)} - {"subcommand"}
    for key in values:
        if key not in known:
            raise ConfigError(key, "unknown field")
    for key in known:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(subcommand=args.subcommand)
    for key, v in values.items():
        if key in ("c", "a", "C", "C_frac") and isinstance(v, list):
            v = [float(x) if isinstance(x, int) and not isinstance(x, bool) else x for x in v]
        setattr(cfg, key, v)
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
