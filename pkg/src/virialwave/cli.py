"""Command line front end.

Subcommands: simulate, converge, standing-wave, inequalities, rt-bounds.
Every failure path names the violated precondition and the config key
responsible; exit status is nonzero iff an asserted invariant fails.
The default output directory comes from --out or VIRIALWAVE_OUT.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import INITIAL_CONDITIONS, SimConfig
from .diagnostics import IDENTITIES
from .runner import (convergence_study, report_standing_wave, run,
                     run_inequalities, run_rt_presets)

OUT_ENV = "VIRIALWAVE_OUT"


def _epilog() -> str:
    lines = ["initial conditions:"]
    for tag, (_, _, doc) in INITIAL_CONDITIONS.items():
        lines.append(f"  {tag:<26} {doc}")
    lines.append("")
    lines.append("identity registry (full statements in docs/identities.md):")
    for tag, info in IDENTITIES.items():
        lines.append(f"  {tag:<26} {info.description}")
    return "\n".join(lines)


def _load_config(path: str) -> SimConfig:
    with open(path) as f:
        doc = json.load(f)
    return SimConfig.from_dict(doc)


def _out_dir(args) -> str:
    out = args.out or os.environ.get(OUT_ENV) or "out"
    os.makedirs(out, exist_ok=True)
    return out


def _finish(manifest: dict, label: str) -> int:
    failures = manifest.get("failures", [])
    for f in failures:
        print(f"FAIL [{label}] {f}", file=sys.stderr)
    print(f"{label}: {'FAILED' if failures else 'ok'}")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="virialwave",
        description="Pseudospectral gravity water waves with virial, "
                    "equipartition and trace-inequality diagnostics.",
        epilog=_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one configured scenario")
    p_sim.add_argument("--config", required=True, help="path to a JSON config")
    p_sim.add_argument("--out", default=None, help=f"output dir (or ${OUT_ENV})")
    p_sim.add_argument("--seed", type=int, default=None, help="override config seed")

    p_con = sub.add_parser("converge", help="halve (dt, 1/n_x, 1/n_z) per level "
                                            "and fit per-identity orders")
    p_con.add_argument("--config", required=True)
    p_con.add_argument("--levels", type=int, default=3)
    p_con.add_argument("--out", default=None)

    p_sw = sub.add_parser("standing-wave", help="period-integral table for the "
                                                "standing-wave expansion")
    p_sw.add_argument("--eps", default="0.05,0.1,0.2",
                      help="comma-separated amplitudes in [0, 0.3]")
    p_sw.add_argument("--coeff-sweep", action="store_true",
                      help="also sweep the free coefficients over {-1, 0, 1}")
    p_sw.add_argument("--out", default=None)

    p_in = sub.add_parser("inequalities", help="seeded random verification of the "
                                               "trace and quadratic-form bounds")
    p_in.add_argument("--seed", type=int, default=0)
    p_in.add_argument("--count", type=int, default=100)
    p_in.add_argument("--out", default=None)

    p_rt = sub.add_parser("rt-bounds", help="monotone growth bounds for the "
                                            "g = 0 and g < 0 presets")
    p_rt.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    try:
        if args.command == "simulate":
            config = _load_config(args.config)
            if args.seed is not None:
                d = config.to_dict()
                d["seed"] = args.seed
                config = SimConfig.from_dict(d)
            manifest = run(config, out_dir=_out_dir(args))
            return _finish(manifest, "simulate")
        if args.command == "converge":
            config = _load_config(args.config)
            manifest = convergence_study(config, args.levels, out_dir=_out_dir(args))
            for ident, row in manifest["table"].items():
                print(f"{ident}: residuals {row['normalized_residuals']} "
                      f"order {row['fitted_order']:.2f}")
            return _finish(manifest, "converge")
        if args.command == "standing-wave":
            eps = [float(s) for s in args.eps.split(",") if s.strip()]
            coeffs = (-1.0, 0.0, 1.0) if args.coeff_sweep else (0.0,)
            manifest = report_standing_wave(eps, coeff_values=coeffs,
                                            out_dir=_out_dir(args))
            for row in manifest["rows"]:
                print(f"eps={row['eps']:g} coeff={row['coeff']:g} "
                      f"kinetic={row['kinetic']:.12f} potential={row['potential']:.12f} "
                      f"difference={row['difference']:.3e}")
            print(f"fitted eps-slope: {manifest['fitted_eps_slope']:.2f}")
            return _finish(manifest, "standing-wave")
        if args.command == "inequalities":
            manifest = run_inequalities(seed=args.seed, count=args.count,
                                        out_dir=_out_dir(args))
            for rep in manifest["reports"]:
                print(f"{rep['inequality_id']}: min margin {rep['min_margin']:.3e}, "
                      f"measured constant {rep['measured_constant']:.3e}, "
                      f"{len(rep['violations'])} violation(s)")
            return _finish(manifest, "inequalities")
        if args.command == "rt-bounds":
            manifest = run_rt_presets(out_dir=_out_dir(args))
            for name, res in manifest["runs"].items():
                s = res["identities"]["rt_monotone"]
                print(f"{name}: growth {s['growth']:.6g}, min rate margin "
                      f"{s['min_rate_margin']:.3e}, rt4 min {s['rt4_min']:.3e}")
            return _finish(manifest, "rt-bounds")
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
