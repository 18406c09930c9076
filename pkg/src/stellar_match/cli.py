"""Command-line front end: configuration, batch commands, artifact files.

One YAML config file with nested sections drives every command; any value
can be overridden from the command line with repeatable
``--set section.key=value`` flags, plus shortcuts for the common ones
(--seed, --threads, --out, --format).  Artifacts are CSV for anything
plottable and canonical JSON for scalars and reports; every file embeds
the fully resolved config and a content hash, so identical configs
produce byte-identical outputs.

Exit codes: 0 on success (shot classifications and failure labels are
data, not errors), 1 on validity or admissibility violations and
infrastructure failures, 2 on malformed configuration.  Errors go to
stderr as one-line JSON objects.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from contextlib import contextmanager

import numpy as np
import yaml

from . import __version__, lane_emden
from .distortion import (
    FIRST_ORDER_ADVISORY_B,
    dimensional_scale,
    solve_distortion,
    surface_curve,
)
from .eos import EosSpec
from .errors import (
    AdmissibilityError,
    ConfigError,
    EosValidityError,
    ShootFailureError,
    StellarMatchError,
)
from .matching import LogGrid, SweepSampler, ae_failure_sweep, scan_components
from .reports import sanitize, write_json, write_jsonl, write_table
from .surface_fit import fit_ellipsoid, residual_scaling, stratification_report
from .tov import ClassifyThresholds, ShootConfig, shoot_from_boundary, shoot_from_center

THREADS_ENV = "STELLAR_MATCH_THREADS"
LOCK_NAME = ".stellar-match.lock"

DEFAULT_CONFIG = {
    "eos": {
        "gamma": 2.0,
        "A": 1.0,
        "c": "inf",
        "lambda": [],
        "rho_max": None,
    },
    "tov": {
        "rtol": 1e-10,
        "atol_factor": 1e-12,
        "r0_factor": 1e-6,
        "dr_factor": 1e-6,
        "r_max_factor": 1e3,
        "r_floor_factor": 1e-6,
        "m_floor_factor": 1e-5,
        "p_ceiling_factor": 1e6,
        "slope_floor_factor": 1e-8,
        "refinements": 2,
    },
    "sweep": {
        "p_lo": 1e-5,
        "p_hi": 1e-2,
        "per_decade": 8.0,
        "seed": 0,
        "count": 100,
        "kind": "random",
        "min_distance": None,
        "near_delta": 1e-4,
        "threads": 1,
    },
    "distortion": {
        "n": None,
        "rho_o": 1.0,
        "grav": 1.0,
        "b": [1e-4, 3.1623e-4, 1e-3, 3.1623e-3, 1e-2],
        "zeta_points": 201,
        "levels": [0.2, 0.5, 0.8],
        "level_margin": 1e-3,
    },
    "output": {
        "directory": "out",
        "formats": ["csv", "json"],
    },
}


# -- config loading --------------------------------------------------------


def _fail(path, message):
    raise ConfigError("%s: %s" % (path, message))


def _float_value(v, path, minimum=None, strict=True, allow_none=False):
    if v is None:
        if allow_none:
            return None
        _fail(path, "value required")
    if isinstance(v, str):
        # YAML 1.1 reads bare "1e-3" as a string; accept numeric strings.
        try:
            v = float(v)
        except ValueError:
            _fail(path, "expected a number, got %r" % (v,))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, "expected a number, got %r" % (v,))
    v = float(v)
    if minimum is not None:
        if strict and not v > minimum:
            _fail(path, "must be > %g, got %g" % (minimum, v))
        if not strict and not v >= minimum:
            _fail(path, "must be >= %g, got %g" % (minimum, v))
    return v


def _int_value(v, path, minimum=0):
    if isinstance(v, str):
        try:
            v = int(v)
        except ValueError:
            _fail(path, "expected an integer, got %r" % (v,))
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, "expected an integer, got %r" % (v,))
    if v < minimum:
        _fail(path, "must be >= %d, got %d" % (minimum, v))
    return v


def _float_list(v, path, minimum=None, strict=False):
    if not isinstance(v, (list, tuple)):
        _fail(path, "expected a list, got %r" % (v,))
    return [
        _float_value(x, "%s[%d]" % (path, i), minimum=minimum, strict=strict)
        for i, x in enumerate(v)
    ]


def _light_speed(v, path):
    if v is None or v == "inf" or (isinstance(v, float) and math.isinf(v)):
        return "inf"
    return _float_value(v, path, minimum=0.0)


def _choice(v, path, allowed):
    if v not in allowed:
        _fail(path, "must be one of %s, got %r" % (sorted(allowed), v))
    return v


def _validate_config(data):
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    unknown = set(data) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError("unknown config section(s): %s" % ", ".join(sorted(unknown)))
    merged = {}
    for section, defaults in DEFAULT_CONFIG.items():
        given = data.get(section, {})
        if not isinstance(given, dict):
            _fail(section, "must be a mapping")
        bad = set(given) - set(defaults)
        if bad:
            _fail(section, "unknown key(s): %s" % ", ".join(sorted(bad)))
        merged[section] = {**defaults, **given}

    e = merged["eos"]
    e["gamma"] = _float_value(e["gamma"], "eos.gamma", minimum=1.0)
    e["A"] = _float_value(e["A"], "eos.A", minimum=0.0)
    e["c"] = _light_speed(e["c"], "eos.c")
    e["lambda"] = _float_list(e["lambda"], "eos.lambda")
    e["rho_max"] = _float_value(e["rho_max"], "eos.rho_max", minimum=0.0, allow_none=True)

    t = merged["tov"]
    for key in (
        "rtol",
        "atol_factor",
        "r0_factor",
        "dr_factor",
        "r_max_factor",
        "r_floor_factor",
        "m_floor_factor",
        "p_ceiling_factor",
        "slope_floor_factor",
    ):
        t[key] = _float_value(t[key], "tov.%s" % key, minimum=0.0)
    t["refinements"] = _int_value(t["refinements"], "tov.refinements", minimum=0)

    s = merged["sweep"]
    s["p_lo"] = _float_value(s["p_lo"], "sweep.p_lo", minimum=0.0)
    s["p_hi"] = _float_value(s["p_hi"], "sweep.p_hi", minimum=0.0)
    if s["p_hi"] <= s["p_lo"]:
        _fail("sweep.p_hi", "must exceed sweep.p_lo")
    s["per_decade"] = _float_value(s["per_decade"], "sweep.per_decade", minimum=2.0, strict=False)
    s["seed"] = _int_value(s["seed"], "sweep.seed", minimum=0)
    s["count"] = _int_value(s["count"], "sweep.count", minimum=1)
    s["kind"] = _choice(s["kind"], "sweep.kind", {"random", "grid", "on-curve"})
    s["min_distance"] = _float_value(
        s["min_distance"], "sweep.min_distance", minimum=0.0, allow_none=True
    )
    s["near_delta"] = _float_value(s["near_delta"], "sweep.near_delta", minimum=0.0)
    s["threads"] = _int_value(s["threads"], "sweep.threads", minimum=1)

    d = merged["distortion"]
    d["n"] = _float_value(d["n"], "distortion.n", minimum=1.0, strict=False, allow_none=True)
    d["rho_o"] = _float_value(d["rho_o"], "distortion.rho_o", minimum=0.0)
    d["grav"] = _float_value(d["grav"], "distortion.grav", minimum=0.0)
    d["b"] = _float_list(d["b"], "distortion.b", minimum=0.0, strict=False)
    d["zeta_points"] = _int_value(d["zeta_points"], "distortion.zeta_points", minimum=5)
    d["levels"] = _float_list(d["levels"], "distortion.levels")
    for lev in d["levels"]:
        if not (0.0 < lev < 1.0):
            _fail("distortion.levels", "levels must lie in (0, 1), got %g" % lev)
    d["level_margin"] = _float_value(d["level_margin"], "distortion.level_margin", minimum=0.0)

    o = merged["output"]
    if not isinstance(o["directory"], str) or not o["directory"]:
        _fail("output.directory", "expected a nonempty path")
    if not isinstance(o["formats"], (list, tuple)) or not o["formats"]:
        _fail("output.formats", "expected a nonempty list")
    for fmt in o["formats"]:
        _choice(fmt, "output.formats", {"csv", "json"})
    o["formats"] = list(o["formats"])

    # Cross-section consistency: a stated polytropic index must agree with
    # the index the EOS exponent implies.
    if d["n"] is not None:
        derived = 1.0 / (e["gamma"] - 1.0)
        if abs(d["n"] - derived) > 1e-9 * max(1.0, derived):
            _fail(
                "distortion.n",
                "contradicts eos.gamma: n = %g but 1/(gamma-1) = %g"
                % (d["n"], derived),
            )
    return merged


def _apply_set(data, assignment):
    if "=" not in assignment:
        raise ConfigError("--set expects section.key=value, got %r" % assignment)
    target, raw = assignment.split("=", 1)
    parts = target.strip().split(".")
    if len(parts) != 2:
        raise ConfigError("--set expects section.key=value, got %r" % assignment)
    section, key = parts
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError("--set value %r is not parseable: %s" % (raw, exc))
    data.setdefault(section, {})[key] = value


class RunConfig:
    """Validated run configuration with typed accessors."""

    def __init__(self, data):
        self.data = data

    def __getitem__(self, section):
        return self.data[section]

    def resolved(self):
        return sanitize(self.data)

    def eos_spec(self):
        e = self.data["eos"]
        c = math.inf if e["c"] == "inf" else float(e["c"])
        return EosSpec(gamma=e["gamma"], A=e["A"], c_light=c, lambda_coeffs=e["lambda"])

    def shoot_config(self):
        t = self.data["tov"]
        return ShootConfig(
            rtol=t["rtol"],
            atol_factor=t["atol_factor"],
            r0_factor=t["r0_factor"],
            dr_factor=t["dr_factor"],
            r_max_factor=t["r_max_factor"],
        )

    def thresholds(self):
        t = self.data["tov"]
        return ClassifyThresholds(
            r_floor_factor=t["r_floor_factor"],
            m_floor_factor=t["m_floor_factor"],
            p_ceiling_factor=t["p_ceiling_factor"],
            slope_floor_factor=t["slope_floor_factor"],
            refinements=t["refinements"],
        )

    def polytrope_n(self):
        d = self.data["distortion"]
        if d["n"] is not None:
            return d["n"]
        return 1.0 / (self.data["eos"]["gamma"] - 1.0)

    def table_format(self):
        return self.data["output"]["formats"][0]

    def out_dir(self):
        return self.data["output"]["directory"]


def load_config(path=None, sets=(), seed=None, threads=None, out=None, fmt=None):
    """Load, override, and validate a run configuration.

    Resolution order for each value: file, then --set overrides, then the
    shortcut flags.  Threads fall back to the STELLAR_MATCH_THREADS
    environment variable when no flag is given.
    """
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError("cannot read config file %s: %s" % (path, exc))
        except yaml.YAMLError as exc:
            raise ConfigError("config file %s is not valid YAML: %s" % (path, exc))
    for assignment in sets:
        _apply_set(data, assignment)
    if seed is not None:
        data.setdefault("sweep", {})["seed"] = seed
    if threads is None and os.environ.get(THREADS_ENV):
        try:
            threads = int(os.environ[THREADS_ENV])
        except ValueError:
            raise ConfigError(
                "%s must be an integer, got %r" % (THREADS_ENV, os.environ[THREADS_ENV])
            )
    if threads is not None:
        data.setdefault("sweep", {})["threads"] = threads
    if out is not None:
        data.setdefault("output", {})["directory"] = out
    if fmt is not None:
        data.setdefault("output", {})["formats"] = [fmt]
    return RunConfig(_validate_config(data))


# -- output plumbing -------------------------------------------------------


@contextmanager
def output_lock(directory):
    """Exclusive ownership of an output directory via a lockfile."""
    os.makedirs(directory, exist_ok=True)
    lock_path = os.path.join(directory, LOCK_NAME)
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise StellarMatchError(
            "output directory %s is locked by another run (%s present)"
            % (directory, LOCK_NAME)
        )
    try:
        os.write(fd, b"%d\n" % os.getpid())
        os.close(fd)
        yield directory
    finally:
        try:
            os.unlink(lock_path)
        except OSError:
            pass


def _emit(obj, stream=None):
    print(json.dumps(sanitize(obj), sort_keys=True), file=stream or sys.stderr)


def _say(message):
    print(message)


def _table_path(directory, stem, fmt):
    return os.path.join(directory, "%s.%s" % (stem, "csv" if fmt == "csv" else "json"))


# -- commands --------------------------------------------------------------


def cmd_eos_check(cfg):
    """Validate the EOS inequalities, report bounds, fail on a requested
    range the EOS cannot cover."""
    eos = cfg.eos_spec()
    requested = cfg["eos"]["rho_max"]
    ok = requested is None or requested <= eos.rho_valid_max * (1.0 + 1e-12)
    report = {
        "eos": eos.describe(),
        "requested_rho_max": requested,
        "valid_on_requested_range": ok,
        "config": cfg.resolved(),
    }
    with output_lock(cfg.out_dir()) as out:
        write_json(os.path.join(out, "eos_check.json"), report)
    _say(
        "eos-check: valid for rho in (0, %g], binding constraint: %s"
        % (eos.rho_valid_max, eos.validity_binding)
    )
    if not ok:
        raise EosValidityError(
            "EOS inequalities fail inside the requested range: valid up to "
            "rho = %g, requested %g" % (eos.rho_valid_max, requested)
        )
    return 0


def _write_trajectory(out, stem, trajectory, cfg):
    rows = [list(map(float, row)) for row in trajectory.as_rows()]
    write_table(
        _table_path(out, stem, cfg.table_format()),
        ("r", "m", "P", "rho", "h", "F", "H"),
        rows,
        cfg.resolved(),
        cfg.table_format(),
    )


def cmd_shoot_center(cfg, p_center):
    """Forward shot from a central pressure; writes the trajectory table
    and a boundary-data summary.  Guard exits are recorded as outcomes."""
    eos = cfg.eos_spec()
    with output_lock(cfg.out_dir()) as out:
        try:
            surface, trajectory = shoot_from_center(
                eos, p_center, config=cfg.shoot_config()
            )
        except ShootFailureError as exc:
            report = {
                "outcome": exc.label,
                "message": str(exc),
                "p_center": p_center,
                "config": cfg.resolved(),
            }
            write_json(os.path.join(out, "center_shot.json"), report)
            _say("shoot-center: no surface reached (%s)" % exc.label)
            return 0
        report = {
            "outcome": "surface",
            "p_center": p_center,
            "radius": surface.radius,
            "mass": surface.mass,
            "compactness": surface.compactness,
            "g_surface": surface.g_surface,
            "config": cfg.resolved(),
        }
        write_json(os.path.join(out, "center_shot.json"), report)
        _write_trajectory(out, "center_shot_trajectory", trajectory, cfg)
    _say(
        "shoot-center: R = %.12g, M = %.12g (P_c = %g)"
        % (surface.radius, surface.mass, p_center)
    )
    return 0


def cmd_shoot_boundary(cfg, radius, mass):
    """Inward shot from boundary data; writes the trajectory table and the
    four-case classification.  All classification outcomes exit 0."""
    eos = cfg.eos_spec()
    with output_lock(cfg.out_dir()) as out:
        cls, trajectory = shoot_from_boundary(
            eos, radius, mass, config=cfg.shoot_config(), thresholds=cfg.thresholds()
        )
        report = {
            "radius": radius,
            "mass": mass,
            "case": cls.case,
            "exit": cls.exit,
            "r_exit": cls.r_exit,
            "m_exit": cls.m_exit,
            "p_exit": cls.p_exit,
            "p_center": cls.p_center,
            "diagnostics": cls.diagnostics,
            "config": cfg.resolved(),
        }
        write_json(os.path.join(out, "boundary_shot.json"), report)
        _write_trajectory(out, "boundary_shot_trajectory", trajectory, cfg)
    _say(
        "shoot-boundary: case = %s, exit = %s"
        % (cls.case if cls.case else "none", cls.exit)
    )
    return 0


def cmd_match(cfg):
    """Scan matching curves, then sweep boundary data against them."""
    eos = cfg.eos_spec()
    s = cfg["sweep"]
    with output_lock(cfg.out_dir()) as out:
        curves = scan_components(
            eos,
            LogGrid(s["p_lo"], s["p_hi"], s["per_decade"]),
            config=cfg.shoot_config(),
        )
        curve_rows = []
        for curve in curves:
            curve_rows.extend(list(row) for row in curve.as_rows())
        write_table(
            _table_path(out, "curves", cfg.table_format()),
            ("P_O", "R", "M", "2M/R"),
            curve_rows,
            cfg.resolved(),
            cfg.table_format(),
        )
        if not curves:
            summary = {
                "note": "no components found: every central pressure failed",
                "count": 0,
                "cases": {},
                "curves": [],
                "eos": eos.describe(),
                "config": cfg.resolved(),
            }
            write_jsonl(
                os.path.join(out, "sweep.jsonl"),
                {"kind": "sweep_samples", "config": cfg.resolved()},
                [],
            )
            write_json(os.path.join(out, "sweep_summary.json"), summary)
            _say("match: no components; sweep skipped")
            return 0
        sampler = SweepSampler(
            kind=s["kind"], seed=s["seed"], min_distance=s["min_distance"]
        )
        report = ae_failure_sweep(
            eos,
            curves,
            sampler,
            count=s["count"],
            threads=s["threads"],
            near_delta=s["near_delta"],
            config=cfg.shoot_config(),
            thresholds=cfg.thresholds(),
        )
        write_jsonl(
            os.path.join(out, "sweep.jsonl"),
            {"kind": "sweep_samples", "config": cfg.resolved()},
            report.sample_rows(),
        )
        summary = dict(report.summary)
        summary["config"] = cfg.resolved()
        write_json(os.path.join(out, "sweep_summary.json"), summary)
    _say(
        "match: %d component(s), %d sample(s), far Case11 count %d"
        % (len(curves), report.summary["count"], report.summary["far_case11_count"])
    )
    return 0


def cmd_surface(cfg):
    """Distortion pipeline: base profile, responses, surface curve, fits,
    residual scaling, and level stratification."""
    d = cfg["distortion"]
    n = cfg.polytrope_n()
    gamma = 1.0 + 1.0 / n
    b_values = d["b"]
    advisory = any(b > 0.05 for b in b_values)
    if advisory:
        _emit(
            {
                "warning": "rotation parameter beyond first-order range",
                "b_max": max(b_values),
            }
        )
    base = lane_emden.solve(n)
    dist = solve_distortion(base)
    zeta = np.linspace(-1.0, 1.0, d["zeta_points"])
    # Level surfaces and the exported curve stay inside the first-order
    # range even when the requested ladder goes beyond it.
    b_ref = min(max(b_values), FIRST_ORDER_ADVISORY_B)
    curve = surface_curve(dist, b_ref, zeta)

    fits = []
    for b in b_values:
        sc = surface_curve(dist, b, zeta)
        fit = fit_ellipsoid(np.column_stack([sc.zeta, sc.values]))
        fits.append({"b": b, "fit": fit.describe()})

    positive = [b for b in b_values if b > 0.0]
    scaling = None
    scaling_note = None
    if (
        len(positive) == len(b_values)
        and len(positive) >= 4
        and positive[-1] <= 0.05
        and positive[-1] / positive[0] >= 100.0 * (1.0 - 1e-12)
    ):
        scaling = residual_scaling(dist, positive, zeta=zeta).describe()
        scaling["slope_in_range"] = bool(abs(scaling["slope"] - 2.0) <= 0.1)
    else:
        scaling_note = (
            "residual scaling skipped: needs >= 4 increasing b in (0, 0.05] "
            "spanning two decades"
        )

    strat = stratification_report(
        dist, b_ref, d["levels"], zeta=zeta, margin=d["level_margin"]
    )
    report = {
        "n": n,
        "gamma": gamma,
        "xi1": base.xi1,
        "mu1": base.mu1,
        "a2": dist.a2,
        "c0": curve.c0,
        "c1": curve.c1,
        "c2": curve.c2,
        "b_ref": b_ref,
        "b_max_requested": max(b_values),
        "first_order_advisory": advisory,
        "length_scale": dimensional_scale(d["rho_o"], cfg["eos"]["A"], gamma, d["grav"]),
        "fits": fits,
        "scaling": scaling,
        "scaling_note": scaling_note,
        "stratification": [
            {"theta_star": theta, "fit": fit.describe()} for theta, fit in strat
        ],
        "config": cfg.resolved(),
    }
    with output_lock(cfg.out_dir()) as out:
        write_json(os.path.join(out, "surface_report.json"), report)
        write_table(
            _table_path(out, "surface_curve", cfg.table_format()),
            ("zeta", "Xi1"),
            [list(row) for row in curve.as_rows()],
            cfg.resolved(),
            cfg.table_format(),
        )
        prof = dist.profile()
        write_table(
            _table_path(out, "distortion_profile", cfg.table_format()),
            ("xi", "h0", "psi2"),
            np.column_stack([prof["xi"], prof["h0"], prof["psi2"]]).tolist(),
            cfg.resolved(),
            cfg.table_format(),
        )
    slope_text = "%.4f" % scaling["slope"] if scaling else "skipped"
    _say(
        "surface: n = %g, A2 = %.10g, c = (%.6g, %.6g, %.6g), slope = %s"
        % (n, dist.a2, curve.c0, curve.c1, curve.c2, slope_text)
    )
    return 0


# -- entry point -----------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML config file")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--seed", type=int, metavar="N", help="sweep RNG seed")
    common.add_argument("--threads", type=int, metavar="N", help="sweep worker threads")
    common.add_argument("--format", choices=("csv", "json"), help="table format")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        dest="overrides",
        help="override one config value (repeatable)",
    )

    parser = argparse.ArgumentParser(
        prog="stellar-match",
        description="Matter-vacuum matching and rotating-surface analysis "
        "for polytropes",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eos-check", parents=[common], help="validate EOS inequalities")
    p_center = sub.add_parser(
        "shoot-center", parents=[common], help="forward shot from a central pressure"
    )
    p_center.add_argument("--p-center", type=float, required=True, metavar="P")
    p_boundary = sub.add_parser(
        "shoot-boundary", parents=[common], help="inward shot from boundary data"
    )
    p_boundary.add_argument("--radius", type=float, required=True, metavar="R")
    p_boundary.add_argument("--mass", type=float, required=True, metavar="M")
    sub.add_parser(
        "match", parents=[common], help="matching curves and the failure sweep"
    )
    sub.add_parser(
        "surface", parents=[common], help="distorted surface and ellipsoid fits"
    )
    sub.add_parser("version", help="print version and exit")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(__version__)
        return 0
    try:
        cfg = load_config(
            path=args.config,
            sets=args.overrides,
            seed=args.seed,
            threads=args.threads,
            out=args.out,
            fmt=args.format,
        )
        if args.command == "eos-check":
            return cmd_eos_check(cfg)
        if args.command == "shoot-center":
            return cmd_shoot_center(cfg, args.p_center)
        if args.command == "shoot-boundary":
            return cmd_shoot_boundary(cfg, args.radius, args.mass)
        if args.command == "match":
            return cmd_match(cfg)
        if args.command == "surface":
            return cmd_surface(cfg)
        raise ConfigError("unknown command %r" % args.command)
    except ConfigError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2
    except (AdmissibilityError, EosValidityError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1
    except StellarMatchError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
