"""Command-line interface: ``pair``, ``plate``, ``sweep`` and ``verify``.

Exit status: 0 on success, 1 when any record carries an error or any oracle
check fails, 2 on usage or configuration errors.
"""
import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import replace
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import COMPONENTS, SUITES, load_config, to_reduced
from .errors import ConfigError, RegimeWarning, VdwFrictionError
from .plate import pair_roentgen_integrand, plate_integrate
from .roentgen import roentgen_c_batch, roentgen_conservative, roentgen_nonconservative
from .state import PairState
from .suites import parse_suites, run_suites
from .vdw import regime_label, vdw_force_batch, vdw_force_components

SCHEMA_VERSION = 1
INPUT_COLUMNS = ("index", "geometry", "sweep_variable", "sweep_value", "x", "rho",
                 "beta_R", "beta_perp", "T_red", "regime", "coupling_si", "force_scale")
AXES = ("x", "y", "z")
VDW_PARTS = {"vdw_doppler": "doppler", "vdw_lag": "lag", "vdw_theta": "theta"}


def columns(components=COMPONENTS):
    """Fixed CSV header for a component selection (schema version 1)."""
    force = [f"{c}_{a}" for c in components for a in AXES]
    return ("schema_version",) + INPUT_COLUMNS + tuple(force) + ("error",)


def _pair_forces(state):
    mode = "instantaneous" if state.T_red is not None else "time_averaged"
    vdw = vdw_force_components(state, mode=mode)
    out = {c: vdw[p] for c, p in VDW_PARTS.items()}
    out["roentgen_c"] = roentgen_conservative(state)
    out["roentgen_nc"] = roentgen_nonconservative(state)
    out["total"] = vdw["total"] + out["roentgen_c"] + out["roentgen_nc"]
    return out


def _plate_forces(cfg):
    names = ("vdw_doppler", "vdw_theta", "vdw_lag", "roentgen_c", "roentgen_nc")

    def stacked(x, y, d):
        R = np.stack([-x, -y, np.full(np.shape(x), d)], axis=-1)
        v = vdw_force_batch(R, cfg.velocity, cfg.rho, cfg.coupling_numerator)
        rc = roentgen_c_batch(R, cfg.velocity, cfg.rho, cfg.coupling_numerator)
        rnc = pair_roentgen_integrand(cfg)(x, y, d)
        return np.concatenate([v["doppler"], v["theta"], v["lag"], rc, rnc], axis=1)

    flat = plate_integrate(stacked, cfg)
    out = {n: flat[3 * i:3 * i + 3] for i, n in enumerate(names)}
    out["total"] = sum(out[n] for n in names)
    return out


def _error_record(rec, exc, components):
    rec["error"] = f"{type(exc).__name__}: {exc}"
    for c in components:
        for a in AXES:
            rec[f"{c}_{a}"] = float("nan")
    return rec


def evaluate_point(cfg, index=0, variable="", value=float("nan")):
    """Evaluate one configuration into an output record (dict).

    Domain, pole and validity errors are attached to the record's ``error``
    field instead of being raised, so a sweep continues past bad points.
    """
    nan = float("nan")
    rec = {"schema_version": SCHEMA_VERSION, "index": index, "geometry": cfg.geometry,
           "sweep_variable": variable, "sweep_value": value, "x": nan, "rho": nan,
           "beta_R": nan, "beta_perp": nan, "T_red": nan, "regime": "",
           "coupling_si": nan, "force_scale": nan, "error": ""}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            red = to_reduced(cfg)
            st, sc = red.state, red.scales
            rec.update(coupling_si=sc.coupling_si, force_scale=sc.force_scale)
            if isinstance(st, PairState):
                rec.update(x=st.x, rho=st.rho, beta_R=st.beta_R, beta_perp=st.beta_perp,
                           T_red=nan if st.T_red is None else st.T_red)
            else:
                rec.update(x=st.d_red, rho=st.rho, beta_R=0.0, beta_perp=st.beta)
            rec["regime"] = regime_label(rec["x"])
            forces = _pair_forces(st) if isinstance(st, PairState) else _plate_forces(st)
    except ConfigError:
        raise
    except VdwFrictionError as exc:
        return _error_record(rec, exc, cfg.components)
    for c in cfg.components:
        for a, f in zip(AXES, forces[c]):
            rec[f"{c}_{a}"] = float(f) * sc.force_scale
    return rec


def run(cfg, jobs=None):
    """Evaluate the single point or every sweep point of ``cfg``, in sweep order."""
    if cfg.sweep is None:
        return [evaluate_point(cfg)]
    sw = cfg.sweep
    points = [(i, float(v), cfg.at(sw.variable, float(v))) for i, v in enumerate(sw.values())]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda p: evaluate_point(p[2], p[0], sw.variable, p[1]), points))


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def write_csv(records, fh, components=COMPONENTS):
    cols = columns(components)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow([_fmt(r.get(c, "")) for c in cols])


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def write_jsonl(records, fh):
    for r in records:
        fh.write(json.dumps({k: _json_safe(v) for k, v in r.items()}, allow_nan=False) + "\n")


def emit(records, fmt, path, components=COMPONENTS):
    """Write records to ``path`` (or stdout when ``path`` is None)."""
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(records, buf, components)
    else:
        write_jsonl(records, buf)
    if path is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def build_parser():
    p = argparse.ArgumentParser(prog="vdwfriction",
                                description="Velocity-dependent van der Waals and Roentgen forces.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("pair", "single atom-atom point"), ("plate", "single atom-plate point"),
                       ("sweep", "sweep over the configured [sweep] grid"),
                       ("verify", "run oracle suites")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--config", required=name != "verify", help="INI config file")
        s.add_argument("--out", help="output path (default stdout)")
        s.add_argument("--format", choices=("csv", "jsonl"), help="output format")
        s.add_argument("--strict", action="store_true",
                       help="reject states outside the quasiresonant window")
        if name == "verify":
            s.add_argument("--suite", help=f"comma list from {','.join(SUITES)}")
    return p


def _verify(args, cfg):
    text = args.suite if args.suite is not None else ",".join(cfg.suite if cfg else ())
    tags = parse_suites(text)
    states = plate = None
    if cfg is not None:
        st = to_reduced(cfg).state
        if isinstance(st, PairState):
            if st.beta_R == 0 and st.beta_perp == 0:
                st = st.with_(beta_R=1e-4, beta_perp=5e-5)
            states = [st]
        else:
            plate = st if st.beta > 0 else replace(st, beta=1e-6)
    failed = 0
    buf = io.StringIO()
    for rep in run_suites(tags, states, plate):
        rec = {"schema_version": SCHEMA_VERSION, **rep.to_dict()}
        buf.write(json.dumps(rec, default=str) + "\n")
        failed += not rep.passed
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 1 if failed else 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None and args.strict:
            cfg = cfg.with_(enforce="strict")
        if args.command == "verify":
            return _verify(args, cfg)
        if args.command in ("pair", "plate") and cfg.geometry != args.command:
            raise ConfigError(f"'{args.command}' needs a [{args.command}] section")
        if args.command == "sweep" and cfg.sweep is None:
            raise ConfigError("'sweep' needs a [sweep] section")
        if args.command != "sweep":
            cfg = cfg.with_(sweep=None)
        records = run(cfg)
    except ConfigError as exc:
        parser.error(str(exc))
    except VdwFrictionError as exc:
        print(f"vdwfriction: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or cfg.format
    emit(records, fmt, args.out or cfg.path, cfg.components)
    return 1 if any(r["error"] for r in records) else 0


if __name__ == "__main__":
    sys.exit(main())
