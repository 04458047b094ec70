"""Command-line front end: stiffness sweeps, profiles, limits, conversions, Lakes ratios, verification."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import oracle
from .closed_form import limit_stiffnesses, solve
from .materials import (
    DegenerateMaterialError,
    IllPosedCurvatureError,
    MaterialScales,
    cosserat_classic,
    gamma_tilde,
    homogenize,
    lakes_omega,
    load_params,
    scales_from_mapping,
    to_mindlin_reduced,
    to_mindlin_relaxed,
    to_mindlin_second_gradient,
)
from .solution import MODELS, BendingProblem, UnsupportedVariantError, check_model

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_RANGE = "1e-2:1e2:121"
DIGITS = 17


class UsageError(Exception):
    pass


def preset_names() -> list[str]:
    return sorted(preset_index())


def preset_index() -> dict[str, dict]:
    text = resources.files("artifact").joinpath("presets/index.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_preset(name: str) -> tuple[MaterialScales, float]:
    if name not in preset_index():
        raise UsageError(f"unknown preset {name!r}")
    text = resources.files("artifact").joinpath(f"presets/{name}.json").read_text(encoding="utf-8")
    return scales_from_mapping(json.loads(text))


def resolve_params(source: str | None, model: str | None) -> tuple[MaterialScales, float]:
    """A file path, a bundled preset name, or the first preset of ``model``."""
    if source is None:
        if model is None:
            raise UsageError("--params is required")
        for name, meta in sorted(preset_index().items()):
            if meta["model"] == model:
                return load_preset(name)
        raise UsageError(f"no preset for model {model!r}; pass --params")
    path = Path(source)
    if path.exists():
        return load_params(path)
    return load_preset(source)


def parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"--lc-range must be lo:hi:n, got {text!r}") from exc
    if not (lo > 0.0 and hi > 0.0 and n >= 2):
        raise UsageError("--lc-range needs positive bounds and at least 2 points")
    return np.logspace(math.log10(lo), math.log10(hi), n)


@dataclass(frozen=True)
class RunConfig:
    model: str | None
    variant: str | None
    scales: MaterialScales
    h: float
    ratios: np.ndarray
    grid: int
    fmt: str
    fields: tuple[str, ...] | None = None

    def problem(self, Lc: float | None = None) -> BendingProblem:
        s = self.scales if Lc is None else self.scales.with_(Lc=Lc)
        return BendingProblem(self.model, s, self.h, 1.0, self.variant)


def fmt(x: float) -> str:
    if isinstance(x, str):
        return x
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(float(f"{x:.{DIGITS}g}") + 0.0)


def render(header: list[str], rows: list[list], form: str) -> str:
    if form == "json":
        return "".join(json.dumps(dict(zip(header, [r if isinstance(r, str) else float(r) for r in row]))) + "\n" for row in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def cmd_stiffness(cfg: RunConfig) -> tuple[str, int]:
    header = ["Lc_over_h", "Mc_norm", "Mm_norm", "Wtot_norm", "Deff"]
    rows = []
    for r in cfg.ratios:
        sol = solve(cfg.problem(r * cfg.h))
        rows.append([r, sol.Mc_norm, sol.Mm_norm, sol.Wtot_norm, sol.Deff])
    return render(header, rows, cfg.fmt), EXIT_OK


def cmd_profile(cfg: RunConfig) -> tuple[str, int]:
    sol0 = solve(cfg.problem())
    names = list(cfg.fields) if cfg.fields else [k for k in sol0.profiles if k != "v"]
    for n in names:
        if n not in sol0.profiles:
            raise UsageError(f"field {n!r} not defined for model {cfg.model!r}")
    x = sol0.grid(cfg.grid)
    header = ["x2_over_h"]
    cols = [x / cfg.h]
    # the two limit curves bracket the requested lengths
    runs = [("Lc0", 1e-12 * cfg.h)] + [(f"Lc_over_h={fmt(r)}", r * cfg.h) for r in cfg.ratios]
    lim = limit_stiffnesses(cfg.model, cfg.scales, cfg.h, cfg.variant)
    if lim.bounded:
        runs.append(("Lcinf", 1e8 * cfg.h))
    for tag, Lc in runs:
        sol = solve(cfg.problem(Lc))
        for n in names:
            header.append(f"{n}@{tag}")
            cols.append(np.asarray(sol.profiles[n](x), dtype=float))
    rows = [list(r) for r in zip(*cols)]
    return render(header, rows, cfg.fmt), EXIT_OK


def cmd_limits(cfg: RunConfig) -> tuple[str, int]:
    models = [cfg.model] if cfg.model else list(MODELS)
    header = ["model", "variant", "D_macro", "D_zero", "D_inf", "plateau"]
    rows = []
    for m in models:
        variant = check_model(m, cfg.variant if cfg.model else None)
        try:
            lim = limit_stiffnesses(m, cfg.scales, cfg.h, variant)
        except (DegenerateMaterialError, IllPosedCurvatureError, ValueError) as exc:
            rows.append([m, variant or "", "nan", "nan", "nan", f"error: {exc}"])
            continue
        D_macro = homogenize(cfg.scales).plate_modulus * cfg.h**3 / 12.0
        rows.append([m, variant or "", D_macro, lim.D_zero, lim.D_inf, lim.label_inf])
    return render(header, rows, cfg.fmt), EXIT_OK


def cmd_convert(cfg: RunConfig) -> tuple[str, int]:
    s = cfg.scales
    tables = []
    if s.micro is not None:
        tables.append(("relaxed", to_mindlin_relaxed(s).as_dict()))
        tables.append(("micromorphic", to_mindlin_reduced(s).as_dict()))
    sg = to_mindlin_second_gradient(s.mu, s.Lc, s.a1, s.a2, s.a3)
    tables.append(("second-gradient", {f"a_hat{i}": getattr(sg, f"a{i}") for i in range(1, 6)}))
    cc = cosserat_classic(s)
    tables.append(("cosserat", {"alpha": cc.alpha, "beta": cc.beta, "gamma": cc.gamma}))
    which = cfg.model
    rows = [[name, key, val] for name, d in tables for key, val in d.items() if which in (None, name)]
    if not rows:
        raise UsageError(f"no conversion table for model {which!r}")
    return render(["table", "coefficient", "value"], rows, cfg.fmt), EXIT_OK


def cmd_lakes(cfg: RunConfig, gamma: float | None) -> tuple[str, int]:
    mac = homogenize(cfg.scales)
    g = gamma_tilde(cfg.scales) if gamma is None else gamma
    res = lakes_omega(mac, g, cfg.h)
    return render(["gamma_tilde", "ell_b", "Omega"], [[g, res.ell_b, res.omega]], cfg.fmt), EXIT_OK


def cmd_verify(cfg: RunConfig | None, presets: bool, out, grid: int = 801) -> int:
    if presets:
        jobs = []
        for name, meta in sorted(preset_index().items()):
            s, h = load_preset(name)
            jobs.append(BendingProblem(meta["model"], s, h, 1.0, meta["variant"]))
    else:
        jobs = [cfg.problem()]
    ok = True
    for p in jobs:
        rep = oracle.verify_model(p, grids=_grids(grid))
        for line in rep.json_lines():
            out.write(line + "\n")
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def _grids(n: int) -> tuple[int, int, int]:
    fine = n if n % 2 == 1 else n + 1
    coarse = (fine - 1) // 4 + 1
    if coarse < oracle.N_MIN:
        raise UsageError(f"--grid must be at least {4 * (oracle.N_MIN - 1) + 1} for verification")
    return coarse, (fine - 1) // 2 + 1, fine


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, model_required=True):
        sp.add_argument("--model", choices=MODELS, required=model_required)
        sp.add_argument("--variant")
        sp.add_argument("--params", help="parameter JSON file or bundled preset name")
        sp.add_argument("--out", help="output path, default stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("stiffness", help="moments, energy and stiffness over an Lc/h sweep")
    common(sp)
    sp.add_argument("--lc-range", default=DEFAULT_RANGE)
    sp = sub.add_parser("profile", help="through-thickness fields")
    common(sp)
    sp.add_argument("--lc-range", default="1e-1:1e1:3")
    sp.add_argument("--grid", type=int, default=201)
    sp.add_argument("--fields", help="comma separated field names")
    sp = sub.add_parser("limits", help="stiffness plateaus")
    common(sp, model_required=False)
    sp = sub.add_parser("convert", help="coefficient conversion tables")
    common(sp, model_required=False)
    sp = sub.add_parser("lakes", help="Lakes rigidity ratio")
    common(sp, model_required=False)
    sp.add_argument("--gamma-tilde", type=float)
    sp = sub.add_parser("verify", help="oracle verification as JSON lines")
    common(sp, model_required=False)
    sp.add_argument("--grid", type=int, default=801)
    sp = sub.add_parser("presets", help="list bundled parameter sets")
    sp.add_argument("--out")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _dispatch(args)
    except (UsageError, UnsupportedVariantError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateMaterialError, IllPosedCurvatureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    out = open(args.out, "w", encoding="utf-8", newline="") if getattr(args, "out", None) else sys.stdout
    try:
        if args.command == "presets":
            for name, meta in sorted(preset_index().items()):
                out.write(f"{name}\t{meta['model']}\t{meta['variant'] or ''}\t{meta['note']}\n")
            return EXIT_OK
        model = args.model
        variant = check_model(model, args.variant) if model else args.variant
        if args.command == "verify" and model is None and args.params is None:
            return cmd_verify(None, True, out, args.grid)
        scales, h = resolve_params(args.params, model if args.command != "lakes" else model or "cosserat")
        ratios = parse_range(args.lc_range) if hasattr(args, "lc_range") else np.array([scales.Lc / h])
        fields = tuple(f.strip() for f in args.fields.split(",")) if getattr(args, "fields", None) else None
        cfg = RunConfig(model, variant, scales, h, ratios, getattr(args, "grid", 201), args.format, fields)
        if args.command == "verify":
            if model is None:
                raise UsageError("--model is required with --params")
            return cmd_verify(cfg, False, out, cfg.grid)
        if args.command == "stiffness":
            text, code = cmd_stiffness(cfg)
        elif args.command == "profile":
            if not 3 <= cfg.grid <= 100001:
                raise UsageError("--grid must lie in [3, 100001]")
            text, code = cmd_profile(cfg)
        elif args.command == "limits":
            text, code = cmd_limits(cfg)
        elif args.command == "convert":
            text, code = cmd_convert(cfg)
        else:
            text, code = cmd_lakes(cfg, args.gamma_tilde)
        out.write(text)
        return code
    finally:
        if out is not sys.stdout:
            out.close()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
