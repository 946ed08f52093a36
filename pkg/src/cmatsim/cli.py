"""Command-line interface.

Subcommands:

* ``simulate``    — one transfer; prints fidelity/norm/loss report, optional
                    trajectory CSV + PNG.
* ``speed-limit`` — threshold times, crossover parameters, binding condition.
* ``sweep``       — run a configured parameter sweep; writes CSV or JSON plus
                    a rendered PNG figure next to it.
* ``validate``    — run the built-in invariant suites; nonzero exit on failure.

Exit codes: 0 ok, 1 validation failure, 2 config error, 3 integration or
other runtime failure.  Configuration is one JSON document (see config
module); scalar flags override the corresponding top-level fields.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, adiabatic, dynamics, lossmodel, validation
from .adiabatic import Binding
from .config import RunConfig, build_run_config, load_config
from .errors import (
    CmatError,
    ConfigError,
    IntegrationError,
    ParameterError,
    UndefinedCooperativityError,
)
from .sweep import SweepMode, run_sweep, emit

# Allowed sag of the truncation-study fidelity column before the summary
# stops calling it non-decreasing (real diabatic oscillation amplitude).
TRUNCATION_MONOTONE_SLACK = 5e-3

_OVERRIDE_KEYS = (
    "g", "kappa", "gamma", "omega0", "tau", "halfwidth",
    "f_adi", "f_cp", "rel_tol", "abs_tol", "max_step", "sample_count", "units",
)


def _add_override_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", metavar="PATH", help="JSON config document")
    num = dict(type=float, default=None)
    sp.add_argument("--g", **num, help="coupling constant (units of gamma)")
    sp.add_argument("--kappa", **num, help="cavity decay rate")
    sp.add_argument("--gamma", **num, help="spontaneous emission rate")
    sp.add_argument("--omega0", **num, help="peak Rabi frequency")
    sp.add_argument("--tau", **num, help="pulse time constant")
    sp.add_argument("--halfwidth", **num, help="window half-width in units of tau")
    sp.add_argument("--f-adi", **num, dest="f_adi", help="adiabaticity factor")
    sp.add_argument("--f-cp", **num, dest="f_cp", help="cavity-population factor")
    sp.add_argument("--rel-tol", **num, dest="rel_tol", help="integrator relative tolerance")
    sp.add_argument("--abs-tol", **num, dest="abs_tol", help="integrator absolute tolerance")
    sp.add_argument("--max-step", **num, dest="max_step", help="integrator max step")
    sp.add_argument("--sample-count", type=int, default=None, dest="sample_count")
    sp.add_argument("--units", choices=("gamma", "absolute"), default=None)


def _run_config(args) -> RunConfig:
    doc = load_config(args.config) if args.config else {}
    overrides = {k: getattr(args, k, None) for k in _OVERRIDE_KEYS}
    return build_run_config(doc, overrides, source=args.config or "<flags>")


def _sibling_png(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ".png"


def cmd_simulate(args) -> int:
    rc = _run_config(args)
    if rc.params is None:
        raise ConfigError("g", "required for simulate")
    if rc.pulse is None:
        raise ConfigError("omega0", "omega0 and tau are required for simulate")
    p, s = rc.params, rc.pulse

    res = dynamics.evolve(p, s, rc.sim)
    t0 = adiabatic.tau0(p, s.omega0)
    loss = lossmodel.beta(p, s.tau, s.omega0)

    print("transfer report")
    print(f"  g = {p.g:g}, kappa = {p.kappa:g}, gamma = {p.gamma:g}")
    if p.kappa > 0 and p.gamma > 0:
        print(f"  cooperativity C = {p.cooperativity():g}")
    print(f"  omega0 = {s.omega0:g}, tau = {s.tau:g}, duration T = {s.duration:g}")
    print(f"  fidelity             = {res.fidelity:.9f}")
    print(f"  norm_final           = {res.norm_final:.9f}")
    print(f"  success_probability  = {res.success_probability:.9f}")
    print(f"  I_a                  = {res.i_a:.3e}")
    print(f"  I_cav                = {res.i_cav:.3e}")
    print(f"  photon_loss          = {dynamics.photon_loss_probability(res):.3e}")
    print(f"  model beta           = {loss.beta:.6g} "
          f"(cavity {loss.beta_cavity:.3g} + spont {loss.beta_spont:.3g}), "
          f"predicted loss {loss.p_pl:.3e}")
    if loss.upper_bound is not None:
        print(f"  ceiling exp(-2/sqrt(C)) = {loss.upper_bound:.6f}")
    print(f"  tau_0                = {t0:.6g}  (tau/tau_0 = {s.tau / t0:.3f})")
    if p.kappa > 0 and p.gamma > 0:
        rep = adiabatic.thresholds(p, rc.factors)
        print(f"  tau_a = {rep.tau_a:.6g}, tau_c = {rep.tau_c:.6g}, "
              f"kappa* = {rep.kappa_star:.6g}, g* = {rep.g_star:.6g}")
        print(f"  binding speed limit: {rep.binding.value}")

    if args.trajectory:
        out = args.out or "trajectory.csv"
        _write_trajectory_csv(res, out)
        from .plotting import render_trajectory_figure

        fig_path = render_trajectory_figure(res, _sibling_png(out))
        print(f"  trajectory -> {out}, figure -> {fig_path}")
    return 0


def _write_trajectory_csv(res, path: str) -> None:
    names = ("ug0", "gu0", "eg0", "ge0", "gg1")
    header = "t," + ",".join(f"re_{n},im_{n}" for n in names) + ",norm"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for k, t in enumerate(res.samples.times):
            row = [repr(float(t))]
            for a in res.samples.amps[k]:
                row.append(repr(float(a.real)))
                row.append(repr(float(a.imag)))
            row.append(repr(float(res.samples.norms[k])))
            fh.write(",".join(row) + "\n")


def cmd_speed_limit(args) -> int:
    rc = _run_config(args)
    if rc.params is None:
        raise ConfigError("g", "required for speed-limit")
    p = rc.params
    omega0 = rc.pulse.omega0 if rc.pulse is not None else None
    rep = adiabatic.thresholds(p, rc.factors, omega0=omega0)
    c = p.cooperativity()

    print("speed-limit report")
    print(f"  g = {p.g:g}, kappa = {p.kappa:g}, gamma = {p.gamma:g}, C = {c:g}")
    print(f"  F_adi = {rc.factors.f_adi:g}, F_cp = {rc.factors.f_cp:g}")
    print(f"  tau_a   = {rep.tau_a!r}")
    print(f"  tau_c   = {rep.tau_c!r}")
    print(f"  kappa*  = {rep.kappa_star!r}")
    print(f"  g*      = {rep.g_star!r}")
    if rep.tau0 is not None:
        print(f"  tau_0   = {rep.tau0!r} (at omega0 = {omega0:g})")
    print(f"  binding = {rep.binding.value}")
    print(f"  max operational speed 1/max(tau_a, tau_c) = {1.0 / max(rep.tau_a, rep.tau_c):g}")
    if rep.binding is Binding.ADIABATIC_LIMITED:
        print("  note: adiabatic-limited regime; the maximal speed scales as gamma*sqrt(C)")
    return 0


def cmd_sweep(args) -> int:
    rc = _run_config(args)
    if rc.sweep is None:
        raise ConfigError("sweep", "a sweep block is required for the sweep subcommand")
    spec = rc.sweep
    result = run_sweep(spec)
    fmt = args.format
    out = args.out or f"sweep.{fmt}"
    emit(result, out, fmt)
    from .plotting import render_sweep_figure

    fig_path = render_sweep_figure(result, _sibling_png(out))

    failed = [c for c in result.grid if c.error is not None]
    ok = [c for c in result.grid if c.error is None]
    print(f"sweep {spec.mode.value}: {len(result.grid)} cells "
          f"({len(failed)} failed), output -> {out}, figure -> {fig_path}")
    if spec.mode in (SweepMode.SUCCESS_MAP, SweepMode.FIDELITY_MAP) and ok:
        vals = [c.success_probability_normalized for c in ok]
        print(f"  normalized P_s: min = {min(vals):.6f}, max = {max(vals):.6f}")
        gs = 4.0 * (spec.fixed_c ** 0.5) / (spec.factors.f_adi * spec.factors.f_cp)
        print(f"  threshold crossover g* = {gs:.6g} (in units of gamma)")
    elif spec.mode is SweepMode.DISSIPATION_FREE_MAP and ok:
        fids = [c.fidelity for c in ok]
        print(f"  fidelity: min = {min(fids):.6f}, max = {max(fids):.6f}")
        worst = _worst_fidelity_above_contour(result)
        if worst is not None:
            print(f"  worst fidelity on the adiabatic side of the tau=F_adi*tau_0 "
                  f"curve = {worst:.6f}")
    elif spec.mode is SweepMode.TRUNCATION_STUDY and ok:
        fids = [c.fidelity for c in ok]
        sagged = any(b < a - TRUNCATION_MONOTONE_SLACK for a, b in zip(fids, fids[1:]))
        print(f"  final fidelity = {fids[-1]:.8f}; non-decreasing within "
              f"{TRUNCATION_MONOTONE_SLACK:g}: {not sagged}")

    if failed and args.strict:
        print(f"  strict mode: {len(failed)} cell(s) failed", file=sys.stderr)
        return 3
    return 0


def _worst_fidelity_above_contour(result) -> float | None:
    curve = dict()
    for u, v in result.overlays.get("f_adi_tau0", []):
        curve[v] = u
    worst = None
    for cell in result.grid:
        u_star = curve.get(cell.y)
        if u_star is None or cell.error is not None:
            continue
        if cell.x >= u_star:
            worst = cell.fidelity if worst is None else min(worst, cell.fidelity)
    return worst


def cmd_validate(args) -> int:
    results = validation.run_all(seed=args.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"  {tag}  {r.name:<{width}}  {r.detail}")
        failures += 0 if r.passed else 1
    if failures:
        print(f"{failures} invariant suite(s) failed")
        return 1
    print("all invariant suites passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmatsim",
        description="Cavity-mediated adiabatic transfer: simulation and analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run one transfer and print a report")
    _add_override_flags(sp)
    sp.add_argument("--trajectory", action="store_true", help="write trajectory CSV + PNG")
    sp.add_argument("--out", metavar="PATH", help="trajectory output path")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("speed-limit", help="print threshold times and binding condition")
    _add_override_flags(sp)
    sp.set_defaults(func=cmd_speed_limit)

    sp = sub.add_parser("sweep", help="run a parameter sweep and write data + figure")
    _add_override_flags(sp)
    sp.add_argument("--out", metavar="PATH", help="output path (default sweep.<format>)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--strict", action="store_true", help="exit 3 if any cell failed")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="run built-in invariant suites")
    sp.add_argument("--seed", type=int, default=12345, help="seed for randomized suites")
    sp.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except UndefinedCooperativityError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except ParameterError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except IntegrationError as err:
        print(f"integration failure: {err}", file=sys.stderr)
        return 3
    except CmatError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
