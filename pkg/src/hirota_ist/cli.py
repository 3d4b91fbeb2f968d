"""Command-line front end: solve, scatter, roundtrip, verify, presets.

Exit codes: 0 success, 1 verification/roundtrip failure, 2 bad input.
Configuration files are JSON documents mirroring the preset fields with
complex numbers written as [re, im] pairs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import HirotaError
from .grids import SCHEMA_VERSION, GridSpec, write_csv, write_json
from .matrices import dagger
from .presets import DEFAULT_GRID, Preset, preset, preset_names
from .scattering import audit_symmetries, find_discrete_spectrum, scattering_matrix
from .solitons import (
    DiscreteEigenpair,
    RankFlag,
    SolitonSpec,
    eval_field,
    min_decay_rate,
    reconstruct_Q,
    sampled_field,
)
from .spectral import Background
from .traceform import TraceInput, theta_condition_variants
from .verification import boundary_decay, pde_residual, symmetry_residual


def _c(pair) -> complex:
    return complex(pair[0], pair[1])


def _mat(pairs) -> np.ndarray:
    return np.array([[_c(pairs[0][0]), _c(pairs[0][1])], [_c(pairs[1][0]), _c(pairs[1][1])]])


def _pair(v: complex) -> list[float]:
    return [float(np.real(v)), float(np.imag(v))]


def _mat_pairs(M) -> list:
    return [[_pair(M[0, 0]), _pair(M[0, 1])], [_pair(M[1, 0]), _pair(M[1, 1])]]


def load_config(path) -> Preset:
    doc = json.loads(Path(path).read_text())
    bgd = doc["background"]
    qplus = _mat(bgd["qplus"])
    qminus = _mat(bgd["qminus"]) if "qminus" in bgd else qplus
    bg = Background(
        sigma=int(bgd["sigma"]),
        k0=float(bgd["k0"]),
        alpha=float(bgd["alpha"]),
        beta=float(bgd["beta"]),
        Qplus=qplus,
        Qminus=qminus,
    )
    seeds = tuple(
        DiscreteEigenpair(zn=_c(s["zeta"]), Cn=_mat(s["c"])) for s in doc["seeds"]
    )
    g = doc.get("grid")
    grid = (
        GridSpec(
            xmin=float(g["xmin"]), xmax=float(g["xmax"]), nx=int(g["nx"]),
            tmin=float(g["tmin"]), tmax=float(g["tmax"]), nt=int(g["nt"]),
        )
        if g
        else DEFAULT_GRID
    )
    p = Preset(name=str(doc.get("name", "config")), bg=bg, seeds=seeds, grid=grid)
    p.spec()
    return p


def _resolve_preset(args) -> Preset:
    if getattr(args, "config", None):
        return load_config(args.config)
    if getattr(args, "preset", None):
        return preset(args.preset)
    raise HirotaError("either --preset or --config is required")


def _grid_with_overrides(p: Preset, args) -> GridSpec:
    g = p.grid
    return GridSpec(
        xmin=args.xmin if args.xmin is not None else g.xmin,
        xmax=args.xmax if args.xmax is not None else g.xmax,
        nx=args.nx if args.nx is not None else g.nx,
        tmin=args.tmin if args.tmin is not None else g.tmin,
        tmax=args.tmax if args.tmax is not None else g.tmax,
        nt=args.nt if args.nt is not None else g.nt,
    )


def measured_background(spec: SolitonSpec, x_probe: float = -40.0, t: float = 0.0) -> Background:
    """Background with the left boundary replaced by the measured limit."""
    Qm = reconstruct_Q(x_probe, t, spec)
    return dataclasses.replace(spec.bg, Qminus=Qm)


def sigma_sample_points(k0: float, n_real_orbits: int = 2, n_circle_orbits: int = 1) -> list[complex]:
    """Spectrum sample set closed under z -> z* and z -> -k0^2/z.

    Real points come in orbits {a, -k0^2/a, -a, k0^2/a}; circle points in
    orbits {phi, -phi, pi - phi, phi - pi} of |z| = k0.
    """
    reals = [0.45, 0.7, 1.35, 2.6, 0.55, 1.9, 0.85, 3.4][:n_real_orbits]
    angles = [math.pi / 4, math.pi / 6, math.pi / 3, 0.4 * math.pi][:n_circle_orbits]
    pts: list[complex] = []
    for a in reals:
        a = a * k0
        pts += [complex(a), complex(-(k0**2) / a), complex(-a), complex(k0**2 / a)]
    for phi in angles:
        for q in (phi, -phi, math.pi - phi, phi - math.pi):
            pts.append(k0 * complex(math.cos(q), math.sin(q)))
    return pts


def cmd_presets(args) -> int:
    for name in preset_names():
        p = preset(name)
        seed = p.seeds[0]
        print(
            f"{name:7s} alpha={p.bg.alpha:5.2f} beta={p.bg.beta:5.2f} "
            f"zeta1={seed.zn} C1={np.round(seed.Cn, 6).tolist()}"
        )
    return 0


def cmd_solve(args) -> int:
    p = _resolve_preset(args)
    grid = _grid_with_overrides(p, args)
    fg = eval_field(grid, p.spec(), preset_name=p.name)
    if args.format == "csv":
        write_csv(fg, args.out)
    else:
        write_json(fg, args.out)
    print(f"wrote {grid.nx}x{grid.nt} grid for {p.name} to {args.out} (masked: {fg.masked_count})")
    return 0


def _scatter_points(args, k0: float) -> list[complex]:
    if args.z:
        return [complex(float(r), float(i)) for r, i in (s.split(",") for s in args.z)]
    return sigma_sample_points(k0, n_real_orbits=args.n_real_orbits, n_circle_orbits=args.n_circle_orbits)


def cmd_scatter(args) -> int:
    p = _resolve_preset(args)
    spec = p.spec()
    field = sampled_field(spec, t0=args.t0, L=args.L)
    bg = measured_background(spec)
    zs = _scatter_points(args, bg.k0)
    samples = [scattering_matrix(field, z, args.L, args.tol, bg, t0=args.t0) for z in zs]
    report = {
        "schema_version": SCHEMA_VERSION,
        "preset": p.name,
        "t0": args.t0,
        "samples": [
            {
                "z": _pair(s.z),
                "det_S_deviation": abs(np.linalg.det(s.S) - 1.0),
                "rho_norm": float(np.max(np.abs(s.rho))),
                "a": _mat_pairs(s.a),
                "b": _mat_pairs(s.b),
                "abar": _mat_pairs(s.abar),
                "bbar": _mat_pairs(s.bbar),
                "rho": _mat_pairs(s.rho),
                "rhobar": _mat_pairs(s.rhobar),
            }
            for s in samples
        ],
    }
    try:
        audit = audit_symmetries(samples, bg)
        report["audit"] = {
            "conjugation_identity": audit.conjugation_identity,
            "transpose_identity": audit.transpose_identity,
            "rho_symmetry": audit.rho_symmetry,
            "antipode_identity": audit.antipode_identity,
            "abar_conjugation": audit.abar_conjugation,
        }
    except HirotaError as exc:
        report["audit"] = {"skipped": str(exc)}
    Path(args.out).write_text(json.dumps(report, indent=1))
    print(f"wrote scattering report for {p.name} ({len(samples)} samples) to {args.out}")
    return 0


def cmd_roundtrip(args) -> int:
    p = _resolve_preset(args)
    spec = p.spec()
    field = sampled_field(spec, t0=0.0, L=args.L)
    bg = measured_background(spec)
    k0 = bg.k0
    # slightly asymmetric box so subdivision boundaries avoid common
    # eigenvalue locations (integer/half-integer real parts)
    box = (-3.07 * k0, 3.05 * k0, 1.085 * k0, 3.21 * k0)
    found = find_discrete_spectrum(field, box, (3, 2), args.L, args.find_tol, bg, t0=0.0)
    ok = True
    for seed in p.seeds:
        hits = [z for z in found if abs(z - seed.zn) <= args.tol]
        status = "recovered" if hits else "MISSED"
        ok = ok and bool(hits)
        best = min((abs(z - seed.zn) for z in found), default=float("nan"))
        print(f"eigenvalue {seed.zn}: {status} (closest error {best:.2e}, tol {args.tol:.1e})")
    extras = [z for z in found if all(abs(z - s.zn) > args.tol for s in p.seeds)]
    if extras:
        ok = False
        print(f"spurious zeros found: {extras}")
    rho_max = 0.0
    dets_ok = True
    for z in sigma_sample_points(k0, n_real_orbits=3, n_circle_orbits=1):
        s = scattering_matrix(field, z, args.L, 1e-10, bg, t0=0.0)
        rho_max = max(rho_max, float(np.max(np.abs(s.rho))))
        dets_ok = dets_ok and abs(np.linalg.det(s.S) - 1.0) <= 1e-8
    print(f"max |rho| on spectrum samples: {rho_max:.2e} (tol {args.tol:.1e}); det S ok: {dets_ok}")
    ok = ok and rho_max <= args.tol and dets_ok
    print("roundtrip:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    p = _resolve_preset(args)
    spec = p.spec()
    bg = spec.bg
    g = p.grid
    region = (g.xmin, g.xmax, g.tmin, g.tmax)
    checks: dict[str, dict] = {}

    rep = pde_residual(reconstruct_Q_field(spec), region, args.n_probe, args.h, bg)
    checks["pde_residual"] = {
        "max_residual": rep.max_residual,
        "argmax": list(rep.argmax),
        "h": rep.h,
        "pass": rep.max_residual <= args.tol_residual,
    }

    coarse = GridSpec(g.xmin, g.xmax, 41, g.tmin, g.tmax, 25)
    fg = eval_field(coarse, spec, preset_name=p.name)
    sym = symmetry_residual(fg)
    checks["symmetry"] = {"max_asymmetry": sym, "pass": sym <= 1e-10 and fg.masked_count == 0}

    rate = min_decay_rate(spec)
    if rate >= 0.75:
        dec = boundary_decay(reconstruct_Q_field(spec), t=0.25, bg=bg, x_far=20.0)
        expected = rate
        rate_ok = abs(dec.rate - expected) <= 0.1 * expected
        checks["boundary_decay"] = {
            "right_deviation": dec.right_deviation,
            "rate": dec.rate,
            "expected_rate": expected,
            "pass": dec.right_deviation <= 1e-8 and rate_ok,
        }
        Qm = dec.Qminus_measured
        measured_phase = float(np.angle(np.linalg.det(bg.Qplus @ dagger(Qm))) % (2 * math.pi))
        simple = tuple(s.zn for s in p.seeds if s.rank_flag is RankFlag.RANK1)
        double = tuple(s.zn for s in p.seeds if s.rank_flag is RankFlag.RANK2)
        variants = theta_condition_variants(
            TraceInput(bg=bg, simple_zeros=simple, double_zeros=double)
        )
        diffs = {
            k: min(abs(v - measured_phase), 2 * math.pi - abs(v - measured_phase))
            for k, v in variants.items()
        }
        checks["theta_condition"] = {
            "measured": measured_phase,
            "variants": variants,
            "pass": min(diffs.values()) <= 1e-3,
        }
    else:
        checks["boundary_decay"] = {"skipped": "no spatial decay (rate < 0.75)", "pass": True}
        checks["theta_condition"] = {"skipped": "no spatial decay (rate < 0.75)", "pass": True}

    ok = all(c.get("pass", False) for c in checks.values())
    report = {"schema_version": SCHEMA_VERSION, "preset": p.name, "checks": checks, "pass": ok}
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=1))
    for name, c in checks.items():
        print(f"{name}: {'PASS' if c.get('pass') else 'FAIL'} {c}")
    return 0 if ok else 1


def reconstruct_Q_field(spec: SolitonSpec):
    def field(x: float, t: float):
        return reconstruct_Q(x, t, spec)

    return field


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hirota-ist", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--preset", help="preset name (see 'presets')")
        sp.add_argument("--config", help="JSON config path")

    sp = sub.add_parser("presets", help="list preset parameter sets")
    sp.set_defaults(fn=cmd_presets)

    sp = sub.add_parser("solve", help="evaluate the field on a grid and export it")
    add_common(sp)
    for f in ("xmin", "xmax", "tmin", "tmax"):
        sp.add_argument(f"--{f}", type=float, default=None)
    for f in ("nx", "nt"):
        sp.add_argument(f"--{f}", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("scatter", help="direct scattering + symmetry audit report")
    add_common(sp)
    sp.add_argument("--z", action="append", help="sample point 're,im' (repeatable)")
    sp.add_argument("--n-real-orbits", type=int, default=2)
    sp.add_argument("--n-circle-orbits", type=int, default=1)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--L", type=float, default=20.0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_scatter)

    sp = sub.add_parser("roundtrip", help="recover seed eigenvalues from the constructed field")
    add_common(sp)
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--find-tol", type=float, default=1e-8, help="ODE tolerance for the search")
    sp.add_argument("--L", type=float, default=20.0)
    sp.set_defaults(fn=cmd_roundtrip)

    sp = sub.add_parser("verify", help="PDE residual, decay, symmetry, phase condition")
    add_common(sp)
    sp.add_argument("--h", type=float, default=1e-2)
    sp.add_argument("--n-probe", type=int, default=200)
    sp.add_argument("--tol-residual", type=float, default=1e-5)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except HirotaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
