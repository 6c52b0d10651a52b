"""
Command-line front end.

Exit codes: 0 success, 2 configuration or input error, 3 numerical
(convergence) error, 4 verification failure.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import cf64
from . import verify as verify_mod
from .config import ConfigError, flatten, load_config
from .dicke import FilterParams, apply_filter, chi31_dicke
from .diffusion import StoredCoherence, evolve_slow_light, evolve_stored, group_velocity
from .fields import ComplexField2D, annular_mode, gaussian_field, two_line_field
from .params import as_kvec
from .ramsey import RamseyGeometry, RamseyParams, ResolutionError, power_spectrum, s_correction
from .susceptibility import (GridTooNarrowError, NoCrossingError, chi31_general, fwhm_analytic,
                             homogeneous_floor, measure_fwhm, normalized_transmission)
from .velocity import ConvergenceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4
# fwhm-scan fails if more than this fraction of points has no width
SCAN_FAIL_FRACTION = 0.05


def _fmt(x):
    return "%.17g" % x


def _echo_value(v):
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, list):
        return "[" + ", ".join(_echo_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    return str(v)


def write_csv(path, command, raw, columns, rows):
    """Deterministic CSV: '#' parameter echo, header row, '%.17g' numbers."""
    buf = io.StringIO()
    buf.write(f"# thermeit {command}\n")
    for key, value in flatten(raw):
        buf.write(f"# {key} = {_echo_value(value)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    cf64.atomic_write_bytes(path, buf.getvalue().encode("ascii"))


def _k_vector(values):
    return as_kvec(list(values))


def _ramsey_parts(cfg):
    cfg.require("ramsey")
    r = cfg.ramsey
    try:
        return RamseyParams(r.Gamma, r.K_pow, r.D), r.a, r.K
    except ValueError as exc:
        raise ConfigError(f"ramsey: {exc}") from None


def cmd_spectrum(cfg, out):
    cfg.require("spectrum")
    sp = cfg.spectrum
    grid = sp.grid.values()
    if sp.engine.startswith("ramsey"):
        params, a, K = _ramsey_parts(cfg)
        try:
            geom = RamseyGeometry(a, "sheet" if sp.engine == "ramsey-1d" else "cylinder")
        except ValueError as exc:
            raise ConfigError(f"ramsey.a: {exc}") from None
        spec = power_spectrum(grid, geom, params, K)
        s_d = s_correction(grid, geom, params)
        rows = zip(grid, spec.raw, s_d.real, s_d.imag, spec.values)
        write_csv(out, "spectrum", cfg.raw,
                  ["delta", "P", "re_S_D", "im_S_D", "transmission_normalized"], rows)
        return EXIT_OK
    medium, beams = cfg.medium_params(), cfg.beam_params()
    k = _k_vector(sp.k_perp)
    if sp.engine == "general":
        chi = chi31_general(k, sp.omega, medium, beams, delta=grid, rtol=sp.rtol)
    else:
        chi = np.array([chi31_dicke(k, sp.omega, medium, beams.with_(Delta=d)) for d in grid])
    try:
        t = normalized_transmission(grid, chi.imag)
    except GridTooNarrowError as exc:
        raise ConfigError(f"spectrum.grid: {exc}") from None
    write_csv(out, "spectrum", cfg.raw, ["delta", "re_chi", "im_chi", "transmission_normalized"],
              zip(grid, chi.real, chi.imag, t))
    return EXIT_OK


def cmd_fwhm_scan(cfg, out):
    cfg.require("fwhm_scan", "medium", "beams")
    scan = cfg.fwhm_scan
    medium, beams = cfg.medium_params(), cfg.beam_params()
    ks = scan.k.values()
    rows, warnings = [], []
    for g in scan.gammas:
        med = medium.with_(gamma=g)
        floor = homogeneous_floor(med, beams)
        for k in ks:
            try:
                measured = measure_fwhm(k, med, beams, rtol=scan.rtol)
            except (NoCrossingError, GridTooNarrowError) as exc:
                warnings.append(f"k={_fmt(k)} gamma={_fmt(g)}: {exc}")
                measured = math.nan
            rows.append((k, g, measured, fwhm_analytic(k, med), floor, measured - floor))
    write_csv(out, "fwhm-scan", cfg.raw,
              ["k", "gamma", "fwhm_measured", "fwhm_analytic", "fwhm_floor", "fwhm_motional"], rows)
    if warnings:
        cf64.atomic_write_bytes(f"{out}.warnings.txt", ("\n".join(warnings) + "\n").encode())
    if len(warnings) > SCAN_FAIL_FRACTION * len(rows):
        print(f"error: {len(warnings)} of {len(rows)} points have no measurable width",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _read_field(path):
    try:
        return cf64.read(path)
    except OSError as exc:
        raise ConfigError(f"<input>: cannot read {path}: {exc.strerror}") from None
    except cf64.FormatError as exc:
        raise ConfigError(f"<input>: {exc}") from None


def cmd_filter_image(cfg, src, out, preview=None):
    cfg.require("filter")
    field, header = _read_field(src)
    params = FilterParams(cfg.medium_params(), cfg.beam_params(),
                          cfg.filter.include_diffraction, cfg.filter.propagation_length)
    result = apply_filter(field, params)
    meta = {"command": "filter-image", "propagation_length": params.propagation_length,
            "include_diffraction": params.include_diffraction}
    cf64.write(out, result, header.get("unit", "1"), meta)
    if preview:
        cf64.write_pgm(preview, result)
    return EXIT_OK


def cmd_evolve(cfg, src, out, t=None, mode=None):
    field, header = _read_field(src)
    if cfg.evolve is None and (t is None or mode is None):
        raise ConfigError("evolve: section is required unless --t and --mode are given")
    t = cfg.evolve.t if t is None else t
    mode = cfg.evolve.mode if mode is None else mode
    if not t >= 0:
        raise ConfigError("evolve.t: must be >= 0")
    medium = cfg.medium_params()
    prev = header.get("meta", {})
    t0 = float(prev.get("t", 0.0)) if prev.get("mode") == mode else 0.0
    meta = {"command": "evolve", "mode": mode, "t": t0 + t}
    if mode == "store":
        res = evolve_stored(StoredCoherence(field, t0), t, medium)
        new = res.field
        meta["D"] = medium.D
    else:
        slp = group_velocity(medium, cfg.beam_params())
        new, carrier = evolve_slow_light(field, t, slp)
        c0 = complex(*prev.get("carrier", (1.0, 0.0))) if t0 else 1.0
        carrier = carrier * c0
        meta.update({"carrier": [carrier.real, carrier.imag], "V_g": slp.V_g,
                     "Gamma_0": slp.Gamma_0, "D": slp.D})
    cf64.write(out, new, header.get("unit", "1"), meta)
    return EXIT_OK


def cmd_make_field(kind, n, dx, out, sigma, separation, ring, phase):
    if kind == "gaussian":
        field = gaussian_field(n, dx, sigma)
    elif kind == "uniform":
        field = ComplexField2D(np.ones((n, n)), dx, dx)
    elif kind == "two-lines":
        field = two_line_field(n, dx, sigma, separation, phase)
    elif kind == "annular":
        field = annular_mode(n, dx, ring)
    else:
        raise ConfigError(f"make-field: unknown kind {kind!r}")
    cf64.write(out, field, "1", {"command": "make-field", "kind": kind})
    return EXIT_OK


def cmd_verify(cfg, names, report_path):
    settings = cfg.verify if cfg is not None else None
    if not names and settings is not None and settings.suites:
        names = list(settings.suites)
    mc_cfg, mc_setup = None, None
    if cfg is not None and cfg.mc is not None:
        mc_cfg = cfg.mc_config()
        mc_setup = {"deltas": cfg.mc.deltas, "k": _k_vector(cfg.mc.k_perp)}
        if cfg.medium is not None:
            mc_setup["medium"] = cfg.medium_params()
        if cfg.beams is not None:
            mc_setup["beams"] = cfg.beam_params()
    for name in names or []:
        if name not in verify_mod.SUITES:
            raise ConfigError(f"verify.suites: unknown suite {name!r}")
    results = verify_mod.run_suites(names, settings, mc_cfg, mc_setup)
    passed = all(r.passed for r in results)
    report = {"passed": passed, "suites": [r.as_dict() for r in results]}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if report_path:
        cf64.atomic_write_bytes(report_path, text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_VERIFY


def build_parser():
    p = argparse.ArgumentParser(prog="thermeit", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", help="susceptibility or finite-beam spectrum to CSV")
    s.add_argument("config")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("fwhm-scan", help="measured vs analytic EIT linewidth over k and gamma")
    s.add_argument("config")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("filter-image", help="propagate a CF64 probe image through the medium")
    s.add_argument("config")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--preview", help="also write an 8-bit PGM magnitude preview")

    s = sub.add_parser("evolve", help="storage or slow-light diffusion of a CF64 field")
    s.add_argument("config")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--t", type=float, help="evolution time, overrides evolve.t")
    s.add_argument("--mode", choices=("store", "slowlight"), help="overrides evolve.mode")

    s = sub.add_parser("make-field", help="write a test field as CF64")
    s.add_argument("kind", choices=("gaussian", "uniform", "two-lines", "annular"))
    s.add_argument("-n", type=int, default=256)
    s.add_argument("--dx", type=float, default=1e-5)
    s.add_argument("--sigma", type=float, default=5e-5)
    s.add_argument("--separation", type=float, default=2e-4)
    s.add_argument("--phase", type=float, default=math.pi)
    s.add_argument("--ring", type=int, default=5)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("verify", help="run cross-oracle suites and emit a JSON report")
    s.add_argument("config", nargs="?")
    s.add_argument("--list", action="store_true", help="list suites without running them")
    s.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    s.add_argument("-o", "--output", help="write the report here instead of stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.list:
                for name, desc in verify_mod.SUITES.items():
                    print(f"{name}\t{desc}")
                return EXIT_OK
            cfg = load_config(args.config) if args.config else None
            return cmd_verify(cfg, args.suite, args.output)
        if args.command == "make-field":
            return cmd_make_field(args.kind, args.n, args.dx, args.output, args.sigma,
                                  args.separation, args.ring, args.phase)
        cfg = load_config(args.config)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.output)
        if args.command == "fwhm-scan":
            return cmd_fwhm_scan(cfg, args.output)
        if args.command == "filter-image":
            return cmd_filter_image(cfg, args.input, args.output, args.preview)
        return cmd_evolve(cfg, args.input, args.output, args.t, args.mode)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, ResolutionError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
