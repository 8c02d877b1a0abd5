"""multitime command line: generate | verify | stats | figure.

Exit codes: 0 all pass, 1 verification failure, 2 I/O error, 3 bad configuration.
"""
from __future__ import annotations

import argparse
import math
import sys

from .figures import atomic_write, figure_files, rows_to_csv, worldlines_csv
from .statistics import Cell, boson_packing, fermion_capacity, measurement_mc
from .verify import CHECKS, run_suite
from .worldlines import Grid, ParticleSpec, debroglie_lattice, generate

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_CONFIG = 0, 1, 2, 3

DEFAULTS = {
    "class": "spinless",
    "mass": 1.0,
    "speed": 0.5,
    "samples": 256,
    "periods": 1,
    "step": 1e-3,
    "order": 4,
    "seed": 0,
    "out": None,
    "which": "fig1",
    "mode": "fermion",
    "n": 100,
    "trials": 1_000_000,
    "window": math.pi / 8,
    "positions": 8,
    "checks": None,
    "delta": 0.0,
}
_TYPES = {"mass": float, "speed": float, "samples": int, "periods": int, "step": float, "order": int,
          "seed": int, "n": int, "trials": int, "window": float, "positions": int, "delta": float}


class ConfigError(Exception):
    pass


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in DEFAULTS:
                raise ConfigError(f"{path}:{lineno}: unknown key {k!r}")
            out[k] = v
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            cfg.update(read_config_file(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    for k in DEFAULTS:
        v = getattr(args, k if k != "class" else "cls", None)
        if v is not None:
            cfg[k] = v
    for k, typ in _TYPES.items():
        try:
            cfg[k] = typ(cfg[k])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {k}: {cfg[k]!r}") from exc
    for k in ("mass", "samples", "periods", "step", "trials", "window", "positions"):
        if not cfg[k] > 0:
            raise ConfigError(f"{k} must be positive")
    if cfg["speed"] < 0 or cfg["n"] < 0 or cfg["delta"] < 0:
        raise ConfigError("speed, n and delta must be non-negative")
    if cfg["order"] not in (2, 4):
        raise ConfigError("order must be 2 or 4")
    if cfg["class"] not in ("spinless", "photon", "boson", "fermion"):
        raise ConfigError(f"unknown class {cfg['class']!r}")
    return cfg


def spec_from(cfg: dict, cls: str | None = None) -> ParticleSpec:
    cls = cls or cfg["class"]
    try:
        if cls == "photon":
            return ParticleSpec("photon", 0.0, (0.0, 0.0, 1.0))
        direction = (0.0, 0.0, cfg["speed"]) if cls == "boson" else (cfg["speed"], 0.0, 0.0)
        return ParticleSpec(cls, cfg["mass"], direction)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write(path: str, text: str) -> None:
    atomic_write(path, text)


def cmd_generate(cfg: dict) -> int:
    spec = spec_from(cfg)
    ws = generate(spec, Grid(cfg["samples"], cfg["periods"]))
    out = cfg["out"] or "worldlines.csv"
    _write(out, worldlines_csv(ws))
    print(f"class={spec.cls} rows={sum(len(ws[k].proper_time) for k in ws.kinds())} -> {out}")
    print(f"period={ws.period:.17g} wavelength={ws.wavelength:.17g}")
    if spec.cls in ("spinless", "boson", "fermion") and spec.speed > 0:
        lat, _, _ = debroglie_lattice(spec, 2)
        print(f"lattice dx={lat.dx:.17g} dt={lat.dt:.17g}")
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    names = cfg["checks"]
    if names is not None:
        names = [n.strip() for n in str(names).split(",") if n.strip()]
        if not names:
            raise ConfigError("empty check selection")
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    reports = run_suite(names, step=cfg["step"], order=cfg["order"], delta=cfg["delta"])
    for r in reports:
        print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_figure(cfg: dict) -> int:
    which = cfg["which"]
    cls = {"fig1": "spinless", "fig2": "fermion", "fig3": "boson"}.get(which)
    if cls is None:
        raise ConfigError(f"unknown figure {which!r}")
    spec = spec_from(cfg, cls)
    try:
        csv_text, svg_text = figure_files(which, spec, Grid(cfg["samples"], cfg["periods"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    base = cfg["out"] or which
    _write(base + ".csv", csv_text)
    _write(base + ".svg", svg_text)
    print(f"{which} -> {base}.csv {base}.svg")
    return EXIT_OK


def cmd_stats(cfg: dict) -> int:
    mode = cfg["mode"]
    out = cfg["out"] or f"stats_{mode}.csv"
    if mode == "fermion":
        spec = ParticleSpec("fermion", cfg["mass"])
        res = fermion_capacity(Cell.compton(spec.m0), spec)
        print(f"placed={res.placed} capacity_reached={str(res.capacity_reached).lower()}")
        rows = [[i, "+x3" if h.orientation > 0 else "-x3", *h.center, "crossing" if hit else "free"]
                for i, (h, hit, _) in enumerate(res.attempts)]
        text = rows_to_csv(["attempt", "orientation", "cx", "cy", "cz", "outcome"], rows)
    elif mode == "boson":
        spec = ParticleSpec("boson", cfg["mass"], (0.0, 0.0, cfg["speed"]))
        res = boson_packing(cfg["n"], Cell.compton(spec.m0), spec)
        print(f"placed={res.placed} intersections={len(res.intersections)} "
              f"capacity_reached={str(res.capacity_reached).lower()}")
        rows = [[i, j, d] for (i, j), d in sorted(res.distances.items())]
        text = rows_to_csv(["i", "j", "min_distance"], rows)
    elif mode == "measure":
        spec = spec_from(cfg, "spinless")
        try:
            res = measurement_mc(cfg["trials"], cfg["window"], cfg["seed"], spec, cfg["positions"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        print(f"trials={res.trials} window={res.window:.17g} rate={res.rate:.17g} "
              f"model_probability={res.model_probability:.17g}")
        for x, c, f in zip(res.positions, res.counts, res.frequency):
            print(f"x={x:.6f} detections={int(c)} frequency={f:.6f}")
        rows = [[j, x, int(c), int(v), f, s] for j, (x, c, v, f, s) in
                enumerate(zip(res.positions, res.counts, res.trials_per_position, res.frequency, res.share))]
        text = rows_to_csv(["position", "x", "detections", "visits", "frequency", "share"], rows)
    else:
        raise ConfigError(f"unknown stats mode {mode!r}")
    _write(out, text)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "stats": cmd_stats, "figure": cmd_figure}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multitime", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--class", dest="cls", choices=["spinless", "photon", "boson", "fermion"])
    p.add_argument("--mass", type=float)
    p.add_argument("--speed", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--periods", type=int)
    p.add_argument("--step", type=float)
    p.add_argument("--order", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--config")
    p.add_argument("--which", choices=["fig1", "fig2", "fig3"])
    p.add_argument("--mode", choices=["fermion", "boson", "measure"], help="stats simulation")
    p.add_argument("--n", type=int, help="boson copies")
    p.add_argument("--trials", type=int)
    p.add_argument("--window", type=float)
    p.add_argument("--positions", type=int)
    p.add_argument("--checks", help="comma-separated verify checks")
    p.add_argument("--delta", type=float, help="inject an off-shell defect into kg_on_shell")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
