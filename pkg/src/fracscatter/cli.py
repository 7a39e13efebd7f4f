"""Command-line front end.

Exit codes: 0 success, 1 numerical failure or unwritable output, 2 usage
error (including out-of-domain parameters).
"""
from __future__ import annotations

import argparse
import io
import sys
from typing import Callable, Sequence, TextIO

import numpy as np

from . import checks, kernels
from .config import OPTIONS, ConfigError, RunConfig, load_file
from .core import DomainError
from .delta import delta_ss_result, ss_phase_condition
from .io import (
    TRACK_HEADER,
    dumps_json,
    track_rows,
    write_csv,
    write_field_csv,
)
from .presets import PRESETS
from .scan import ScanGrid, find_minima, scan_fields, track_subpeaks
from .transfer import SpectralSingularityError, delta_matrix, transfer_matrix

_CTX = ["alpha", "alphas", "v", "m", "hbar"]
_POT = ["potential", "rho", "zeta", "x0", "V1", "V2", "b"]
_ERANGE = ["e_min", "e_max", "e_points"]
_AGRID = ["alpha_min", "alpha_max", "alpha_points"]
_SEARCH = ["threshold", "rtol", "maxiter"]
_OUT = ["output", "format"]

COMMAND_KEYS: dict[str, list[str]] = {
    "delta-ss": _CTX + ["rho", "zeta", "x0"] + _OUT + ["dump_matrix"],
    "barrier-ss": _CTX + _POT + _ERANGE + _SEARCH + _OUT + ["dump_matrix"],
    "barrier-cpa": _CTX + _POT + _ERANGE + _SEARCH + _OUT + ["dump_matrix"],
    "scan": _CTX + _POT + _ERANGE + ["e_scale"] + _AGRID + _OUT + ["workers"],
    "track": _CTX + _POT + _ERANGE + _AGRID + _SEARCH + ["kind", "window", "include_below"] + _OUT + ["workers"],
    "profile": _CTX + _POT + ["energies"] + _AGRID + _OUT + ["workers"],
    "preset": _OUT + ["workers"],
    "check": ["output"],
}

_HELP = {
    "delta-ss": "closed-form SS energy of the gain delta",
    "barrier-ss": "locate spectral singularities (zeros of |m22|)",
    "barrier-cpa": "locate CPA points (deep minima of |C|)",
    "scan": "log10 R, T, |m22|, |C| over an (E, alpha) grid",
    "track": "follow sub-peaks across decreasing alpha",
    "profile": "fixed-energy cuts across alpha",
    "preset": "reproduce the data behind one figure",
    "check": "run the invariant suite",
}


class NumericalFailure(RuntimeError):
    """A computation finished without a usable answer."""


def _arg_type(parse: Callable[[str], object]) -> Callable[[str], object]:
    def conv(s: str) -> object:
        try:
            return parse(s)
        except ConfigError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    conv.__name__ = getattr(parse, "__name__", "value")
    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracscatter",
        description="Scattering, spectral singularities and CPA for fractional (Levy) dispersion.",
    )
    parser.add_argument("--version", action="version", version="fracscatter 0.1.0")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, keys in COMMAND_KEYS.items():
        p = sub.add_parser(name, help=_HELP[name], argument_default=argparse.SUPPRESS)
        if name == "preset":
            p.add_argument("preset", choices=list(PRESETS), help="figure id")
        if name != "check":
            p.add_argument("--config", help="flat 'key = value' file; flags override it")
        for key in keys:
            opt = OPTIONS[key]
            if opt.flag:
                p.add_argument(opt.cli, dest=key, action="store_true", help=opt.help)
            else:
                choices = getattr(opt.parse, "choices", None)
                p.add_argument(opt.cli, dest=key, type=_arg_type(opt.parse), help=opt.help,
                               metavar=("{" + ",".join(choices) + "}") if choices else key.upper())
        if name == "check":
            p.add_argument("--scale", type=float, default=1.0, help="multiplier on the draw counts")
    return parser


def resolve(ns: argparse.Namespace) -> RunConfig:
    """Merge preset, config file and flags (in increasing priority)."""
    values = vars(ns)
    command = values["command"]
    base = RunConfig()
    preset_id = values.get("preset")
    if command == "preset":
        base = PRESETS[preset_id].config
    file_vals = load_file(values["config"]) if values.get("config") else {}
    allowed = set(COMMAND_KEYS[command])
    stray = sorted(set(file_vals) - allowed) if command != "preset" else []
    if stray:
        raise ConfigError(f"key(s) not used by {command}: {', '.join(stray)}")
    flags = {k: v for k, v in values.items() if k in OPTIONS}
    return base.replace(**{**file_vals, **flags}, command=command, preset=preset_id)


# -- commands -------------------------------------------------------------------


def run_delta_ss(cfg: RunConfig, out: TextIO) -> int:
    if cfg.zeta is not None:
        ok, rho = ss_phase_condition(cfg.zeta)
        if not ok:
            raise NumericalFailure("no real SS: the phase of zeta must be -pi/2")
    elif cfg.rho is not None:
        rho = cfg.rho
    else:
        raise DomainError("delta-ss needs rho or zeta")
    results = [delta_ss_result(cfg.context(a), rho) for a in cfg.alpha_list()]
    fmt = cfg.format or "csv"
    if fmt == "json":
        payload = []
        for r in results:
            d = r.to_json()
            if cfg.dump_matrix:
                d["matrix"] = delta_matrix(cfg.context(r.alpha), -1j * rho, r.e_ss).to_json()
            payload.append(d)
        out.write(dumps_json(payload))
        return 0
    header = ["alpha", "rho", "v", "e_ss", "shift_class"]
    rows = []
    for r in results:
        row = [r.alpha, r.rho, cfg.v, r.e_ss, r.shift_class.value]
        if cfg.dump_matrix:
            M = delta_matrix(cfg.context(r.alpha), -1j * rho, r.e_ss)
            row += [x for z in (M.m11, M.m12, M.m21, M.m22) for x in (z.real, z.imag)]
        rows.append(row)
    if cfg.dump_matrix:
        header += [f"{n}_{p}" for n in ("m11", "m12", "m21", "m22") for p in ("re", "im")]
    write_csv(out, header, rows)
    return 0


def _run_reports(cfg: RunConfig, out: TextIO, kind: str) -> int:
    potential = cfg.build_potential()
    e_range = cfg.energy_range()
    reports = []
    for a in cfg.alpha_list():
        ctx = cfg.context(a)
        for rep in find_minima(potential, ctx, e_range, kind, e_points=cfg.e_points,
                               threshold=cfg.threshold, rtol=cfg.rtol, maxiter=cfg.maxiter):
            d = rep.to_json()
            if cfg.dump_matrix:
                d["matrix"] = transfer_matrix(ctx, potential, rep.e_star).to_json()
            reports.append(d)
    if (cfg.format or "json") == "json":
        out.write(dumps_json(reports))
        return 0
    header = ["kind", "e_star", "alpha_star", "residual", "depth", "bracket_lo", "bracket_hi", "certificate"]
    write_csv(out, header, ([r["kind"], r["e_star"], r["alpha_star"], r["residual"], r["depth"],
                             *r["bracket"], r.get("certificate")] for r in reports))
    return 0


def run_barrier_ss(cfg: RunConfig, out: TextIO) -> int:
    return _run_reports(cfg, out, "SS")


def run_barrier_cpa(cfg: RunConfig, out: TextIO) -> int:
    return _run_reports(cfg, out, "CPA")


def run_scan(cfg: RunConfig, out: TextIO) -> int:
    fld = scan_fields(cfg.build_potential(), cfg.context(), cfg.grid(), cfg.workers)
    if (cfg.format or "csv") == "csv":
        write_field_csv(out, [fld])
        return 0
    out.write(dumps_json({
        "alphas": fld.alphas, "energies": fld.energies,
        "log10R": fld.observable("R").tolist(), "log10T": fld.observable("T").tolist(),
        "log10_abs_m22": fld.observable("m22").tolist(), "log10_abs_C": fld.observable("C").tolist(),
    }))
    return 0


def run_track(cfg: RunConfig, out: TextIO) -> int:
    grid = cfg.grid()
    tracks = track_subpeaks(
        cfg.build_potential(), cfg.context(2.0), grid, cfg.kind,
        threshold=cfg.threshold, window=cfg.window, include_below=cfg.include_below,
        rtol=cfg.rtol, maxiter=cfg.maxiter, workers=cfg.workers,
    )
    if (cfg.format or "json") == "json":
        out.write(dumps_json({"kind": cfg.kind, "n_tracks": len(tracks), "tracks": [t.to_json() for t in tracks]}))
        return 0
    write_csv(out, TRACK_HEADER, track_rows(tracks))
    return 0


def _profile_fields(cfg: RunConfig):
    if not cfg.energies:
        raise DomainError("profile needs at least one energy")
    a_hi = cfg.alpha_max if cfg.alpha_max is not None else 2.0
    a_lo = cfg.alpha_min if cfg.alpha_min is not None else 1.5
    pts = cfg.alpha_points or 2000
    potential = cfg.build_potential()
    for E in cfg.energies:
        yield scan_fields(potential, cfg.context(), ScanGrid(E, E, 1, alpha_min=a_lo, alpha_max=a_hi, alpha_points=pts),
                          cfg.workers)


def run_profile(cfg: RunConfig, out: TextIO) -> int:
    fields_ = list(_profile_fields(cfg))
    if (cfg.format or "csv") == "csv":
        write_field_csv(out, fields_)
        return 0
    out.write(dumps_json([
        {"E": f.energies[0], "alpha": f.alphas, "log10R": f.observable("R")[:, 0],
         "log10T": f.observable("T")[:, 0], "log10_abs_C": f.observable("C")[:, 0]}
        for f in fields_
    ]))
    return 0


def run_preset(cfg: RunConfig, out: TextIO) -> int:
    return RUNNERS[PRESETS[cfg.preset].command](cfg, out)


def run_check(cfg: RunConfig, out: TextIO, scale: float = 1.0) -> int:
    results = checks.run_suite(scale)
    out.write(f"backend: {kernels.BACKEND}\n")
    for r in results:
        out.write(r.line() + "\n")
    return 0 if all(r.passed for r in results) else 1


RUNNERS: dict[str, Callable[[RunConfig, TextIO], int]] = {
    "delta-ss": run_delta_ss,
    "barrier-ss": run_barrier_ss,
    "barrier-cpa": run_barrier_cpa,
    "scan": run_scan,
    "track": run_track,
    "profile": run_profile,
    "preset": run_preset,
}


def _err(msg: str) -> None:
    print(f"fracscatter: error: {msg}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = resolve(ns)
        cfg.validate()
    except (ConfigError, DomainError, OSError) as exc:
        _err(str(exc))
        return 2
    sys.stderr.write(cfg.to_text())

    buf = io.StringIO()
    try:
        if cfg.command == "check":
            code = run_check(cfg, buf, getattr(ns, "scale", 1.0))
        else:
            code = RUNNERS[cfg.command](cfg, buf)
    except DomainError as exc:
        _err(str(exc))
        return 2
    except SpectralSingularityError as exc:
        _err(f"spectral singularity hit exactly: {exc}")
        return 1
    except (NumericalFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        _err(str(exc))
        return 1
    try:
        if cfg.output == "-":
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        else:
            with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        _err(f"cannot write output: {exc}")
        return 1
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
