"""Command-line interface.

    topocrit curvature      momentum profiles of the curvature function
    topocrit exponents      critical exponents gamma, nu and the scaling law
    topocrit correlation    real-space correlation series
    topocrit crg            RG flow field and detected phase boundaries
    topocrit invariant      winding / mapping-degree invariant
    topocrit phase-diagram  invariant over an (alpha, beta) grid

Outputs are deterministic: fixed row ordering, 17-significant-digit floats,
and a header comment echoing the full configuration.  Grid points where the
gap closes are emitted as NaN with a warning and exit code 2 unless
--strict, which aborts instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, correlation, criticality, crg, invariants
from . import geometry, walk1d, walk2d
from .errors import TopocritError, ZeroGap
from .models import WALK_1D, WALK_2D
from .output import write_csv, write_json
from .walk1d import WalkParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ZEROGAP = 2

WALKS = {"walk1d": WALK_1D, "walk2d": WALK_2D}


def _fail(msg: str) -> int:
    print("error: %s" % msg, file=sys.stderr)
    return EXIT_USAGE


def _parse_alphas(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated floats")


def _parse_window(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'lo,hi'")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="topocrit",
        description="Curvature-function criticality toolkit for two-band "
                    "walks and Dirac models.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, models=("walk1d", "walk2d")):
        p.add_argument("--model", choices=models, default=None,
                       help="model (default: walk1d)")
        p.add_argument("--alpha", type=_parse_alphas, default=None,
                       help="coin angle(s), comma separated")
        p.add_argument("--beta", type=float, default=None,
                       help="second coin angle (default: 0 for walk1d, "
                            "pi/2 for walk2d)")
        p.add_argument("--grid", type=int, default=None, help="grid size N")
        p.add_argument("--out", type=str, default=None, help="output path")
        p.add_argument("--config", type=str, default=None,
                       help="JSON file with defaults; flags override")
        p.add_argument("--strict", action="store_true", default=None,
                       help="abort on gap-closing grid points")

    p = sub.add_parser("curvature", help="curvature profile CSV")
    common(p, models=("walk1d", "walk2d", "dirac1d", "dirac2d"))
    p.add_argument("--mass", type=float, default=None,
                   help="Dirac mass (dirac models; default 1.0)")
    p.add_argument("--kmax", type=float, default=None,
                   help="momentum half-range for Dirac models (default 10)")

    p = sub.add_parser("exponents", help="critical exponents JSON")
    common(p)
    p.add_argument("--window", type=_parse_window, default=None,
                   help="log-spaced window 'lo,hi' (default 1e-3,1e-1)")
    p.add_argument("--points", type=int, default=None,
                   help="window points (default 20)")
    p.add_argument("--kc", type=float, default=None,
                   help="1D peak momentum, 0 or pi (default 0)")

    p = sub.add_parser("correlation", help="correlation series CSV")
    common(p)
    p.add_argument("--rmax", type=int, default=None,
                   help="largest displacement (default 40)")

    p = sub.add_parser("crg", help="RG flow field CSV + critical lines JSON")
    common(p)
    p.add_argument("--threshold", type=float, default=None,
                   help="line-detection rate threshold (default 30)")

    p = sub.add_parser("invariant", help="topological invariant JSON")
    common(p)

    p = sub.add_parser("phase-diagram", help="invariant over an angle grid")
    common(p)
    p.add_argument("--inner-grid", type=int, default=None,
                   help="BZ grid per invariant (default 512 / 96)")
    return ap


def _merge_config(args: argparse.Namespace) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise FileNotFoundError("config file %s not found" % path)
        cfg = json.loads(path.read_text())
        if not isinstance(cfg, dict):
            raise ValueError("config file must hold a JSON object")
    merged = dict(cfg)
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None:
            merged[key.replace("_", "-")] = val
    return merged


def _defaults(merged: dict, command: str) -> dict:
    model = merged.get("model", "walk1d")
    beta_default = np.pi / 2.0 if model == "walk2d" else 0.0
    out = {
        "model": model,
        "alpha": merged.get("alpha", [0.3]),
        "beta": merged.get("beta", beta_default),
        "strict": bool(merged.get("strict", False)),
        "out": merged.get("out", "topocrit_%s" % command),
    }
    if isinstance(out["alpha"], (int, float)):
        out["alpha"] = [float(out["alpha"])]
    passthrough = ("grid", "window", "points", "kc", "rmax", "threshold",
                   "mass", "kmax", "inner-grid")
    for key in passthrough:
        if key in merged:
            out[key] = merged[key]
    return out


def _config_echo(cfg: dict) -> dict:
    echo = {}
    for k, v in cfg.items():
        if isinstance(v, tuple):
            v = list(v)
        echo[k] = v
    return echo


def _outpath(base: str, suffix: str, tag: str = "") -> str:
    p = Path(base)
    stem = p.stem if p.suffix else p.name
    return str(p.with_name(stem + tag + suffix))


def cmd_curvature(cfg: dict) -> int:
    model = cfg["model"]
    n = int(cfg.get("grid", 1024))
    alphas = cfg["alpha"]
    beta = float(cfg["beta"])
    mass = float(cfg.get("mass", 1.0))
    kmax = float(cfg.get("kmax", 10.0))
    status = EXIT_OK
    for idx, alpha in enumerate(alphas):
        tag = "" if len(alphas) == 1 else "_a%d" % idx
        path = _outpath(cfg["out"], ".csv", tag)
        echo = _config_echo({**cfg, "alpha": alpha})
        rows = []
        had_nan = False
        if model == "walk1d":
            p = WalkParams(alpha, beta)
            k = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            e = walk1d.energy_1d(k, p)
            with np.errstate(all="ignore"):
                f = walk1d._curvature_raw_1d(k, alpha, beta)
            f = np.where(np.isfinite(f), f, np.nan)
            had_nan = bool(np.isnan(f).any())
            rows = [(float(k[i]), float(f[i]), float(e[i])) for i in range(n)]
            cols = ("k", "F", "E_upper")
        elif model == "walk2d":
            p = WalkParams(alpha, beta)
            kx = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            ky = -kx
            e = walk2d.energy_grid_2d(kx, ky, p)
            with np.errstate(all="ignore"):
                f = walk2d._curvature_raw_2d(kx, ky, alpha, beta)
            f = np.where(np.isfinite(f), f, np.nan)
            had_nan = bool(np.isnan(f).any())
            rows = [(float(kx[i]), float(ky[i]), float(f[i]), float(e[i]))
                    for i in range(n)]
            cols = ("kx", "ky", "F", "E_upper")
        elif model == "dirac1d":
            k = np.linspace(-kmax, kmax, n)
            f = np.empty(n)
            e = np.empty(n)
            for i, kk in enumerate(k):
                try:
                    f[i] = geometry.berry_connection_1d(float(kk), mass)
                except ZeroGap:
                    f[i] = np.nan
                    had_nan = True
                e[i] = np.hypot(mass, kk)
            rows = [(float(k[i]), float(f[i]), float(e[i])) for i in range(n)]
            cols = ("k", "F", "E_upper")
        elif model == "dirac2d":
            k = np.linspace(-kmax, kmax, n)
            f = np.empty(n)
            e = np.empty(n)
            for i, kk in enumerate(k):
                try:
                    f[i] = geometry.berry_curvature_2d_dirac(float(kk), 0.0, mass)
                except ZeroGap:
                    f[i] = np.nan
                    had_nan = True
                e[i] = np.sqrt(mass * mass + kk * kk)
            rows = [(float(k[i]), 0.0, float(f[i]), float(e[i])) for i in range(n)]
            cols = ("kx", "ky", "F", "E_upper")
        else:
            return _fail("unknown model %r" % model)
        if had_nan:
            if cfg["strict"]:
                print("error: gap closes inside the requested grid (strict)",
                      file=sys.stderr)
                return EXIT_ZEROGAP
            print("warning: gap closes inside the grid; NaN rows emitted",
                  file=sys.stderr)
            status = EXIT_ZEROGAP
        write_csv(path, __version__, echo, cols, rows)
        print(path)
    return status


def cmd_exponents(cfg: dict) -> int:
    window = tuple(cfg.get("window", (1e-3, 1e-1)))
    if window[0] >= window[1] or window[0] <= 0:
        return _fail("malformed window: need 0 < lo < hi, got %r" % (window,))
    n_points = int(cfg.get("points", 20))
    model_name = cfg["model"]
    model = WALKS[model_name]
    beta = float(cfg["beta"])
    if model_name == "walk1d":
        k_c = float(cfg.get("kc", 0.0))
    else:
        k_c = model.slice_peak()
    fit = criticality.extract_exponents(model, beta, k_c, window=window,
                                        n_points=n_points)
    payload = {
        "alpha_c": fit.alpha_c,
        "gamma": fit.gamma,
        "nu": fit.nu,
        "errors": {"gamma": fit.gamma_stderr, "nu": fit.nu_stderr},
        "scaling_law_residual": fit.scaling_law_residual,
        "window": [fit.window[0], fit.window[1]],
        "dimension": fit.dimension,
    }
    path = _outpath(cfg["out"], ".json")
    write_json(path, __version__, _config_echo(cfg), payload)
    print(path)
    return EXIT_OK


def cmd_correlation(cfg: dict) -> int:
    model_name = cfg["model"]
    beta = float(cfg["beta"])
    r_max = int(cfg.get("rmax", 40))
    status = EXIT_OK
    for idx, alpha in enumerate(cfg["alpha"]):
        tag = "" if len(cfg["alpha"]) == 1 else "_a%d" % idx
        p = WalkParams(alpha, beta)
        if model_name == "walk1d":
            n = int(cfg.get("grid", correlation.DEFAULT_N_1D))
            series = correlation.wannier_correlation_1d(p, r_max, n)
        else:
            n = int(cfg.get("grid", correlation.DEFAULT_N_2D))
            series = correlation.wannier_correlation_2d(p, r_max, n)
        rows = [(int(r), float(v)) for r, v in
                zip(series.displacements, series.values)]
        path = _outpath(cfg["out"], ".csv", tag)
        write_csv(path, __version__, _config_echo({**cfg, "alpha": alpha}),
                  ("R", "F_tilde"), rows)
        print(path)
    return status


def cmd_crg(cfg: dict) -> int:
    model = WALKS[cfg["model"]]
    grid = int(cfg.get("grid", 128))
    threshold = float(cfg.get("threshold", crg.DETECT_RATE_THRESHOLD))
    field = crg.flow_field(model, grid=grid)
    base = cfg["out"]
    echo = _config_echo(cfg)
    for idx, hsp in enumerate(field.hsps):
        key = crg._hsp_key(hsp)
        rows = []
        for i in range(grid):
            for j in range(grid):
                rows.append((float(field.alphas[i]), float(field.betas[j]),
                             float(field.dalpha[key][i, j]),
                             float(field.dbeta[key][i, j]),
                             float(field.log_rate[key][i, j]),
                             bool(field.diverged[key][i, j])))
        path = _outpath(base, ".csv", "_hsp%d" % idx)
        write_csv(path, __version__, {**echo, "hsp": list(key)},
                  ("alpha", "beta", "dalpha_dl", "dbeta_dl", "log_rate",
                   "diverged"), rows)
        print(path)
    lines = crg.detect_critical_lines(field, rate_threshold=threshold)
    payload = {"critical_lines": [
        {"hsp": list(line.hsp),
         "vertices": [[float(a), float(b)] for a, b in line.vertices]}
        for line in lines]}
    jpath = _outpath(base, ".json")
    write_json(jpath, __version__, echo, payload)
    print(jpath)
    return EXIT_OK


def cmd_invariant(cfg: dict) -> int:
    model_name = cfg["model"]
    beta = float(cfg["beta"])
    alpha = cfg["alpha"][0]
    p = WalkParams(alpha, beta)
    if model_name == "walk1d":
        n = int(cfg.get("grid", invariants.DEFAULT_N_1D))
        res = invariants.winding_number_1d(p, n)
    else:
        n = int(cfg.get("grid", invariants.DEFAULT_N_2D))
        res = invariants.chern_number_2d(p, n)
    payload = {"raw": res.raw, "rounded": res.rounded,
               "defect": res.defect, "N": res.grid}
    path = _outpath(cfg["out"], ".json")
    write_json(path, __version__, _config_echo(cfg), payload)
    print(path)
    return EXIT_OK


def cmd_phase_diagram(cfg: dict) -> int:
    model_name = cfg["model"]
    grid = int(cfg.get("grid", 33))
    if model_name == "walk1d":
        inner = int(cfg.get("inner-grid", 512))
    else:
        inner = int(cfg.get("inner-grid", 96))
    axes = np.linspace(-np.pi, np.pi, grid)
    rows = []
    had_nan = False
    for a in axes:
        for b in axes:
            p = WalkParams(float(a), float(b))
            try:
                if model_name == "walk1d":
                    res = invariants.winding_number_1d(p, inner)
                else:
                    res = invariants.chern_number_2d(p, inner)
                rows.append((float(a), float(b), res.raw, res.rounded))
            except TopocritError:
                had_nan = True
                rows.append((float(a), float(b), float("nan"), float("nan")))
    if had_nan and cfg["strict"]:
        print("error: invariant undefined at some grid points (strict)",
              file=sys.stderr)
        return EXIT_ZEROGAP
    path = _outpath(cfg["out"], ".csv")
    write_csv(path, __version__, _config_echo(cfg),
              ("alpha", "beta", "raw", "rounded"), rows)
    print(path)
    if had_nan:
        print("warning: NaN rows at gap-closing parameters", file=sys.stderr)
        return EXIT_ZEROGAP
    return EXIT_OK


COMMANDS = {
    "curvature": cmd_curvature,
    "exponents": cmd_exponents,
    "correlation": cmd_correlation,
    "crg": cmd_crg,
    "invariant": cmd_invariant,
    "phase-diagram": cmd_phase_diagram,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        merged = _merge_config(args)
        cfg = _defaults(merged, args.command)
        return COMMANDS[args.command](cfg)
    except (TopocritError, FileNotFoundError, ValueError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
