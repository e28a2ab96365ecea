"""Command-line front end: experiment dispatch, seeding, CSV emission.

Every output file starts with comment lines carrying the subcommand, the
master seed and the full effective configuration, so any result can be
regenerated from its own artifact.  Exit codes: 0 success, 1 usage or
configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import arraysim, protocols
from .config import RunConfig, parse_config
from .constants import CONSTANTS, SECONDS_PER_HOUR, SECONDS_PER_YEAR
from .device import DeviceParams, anisotropy_field, num_spins, retention_lifetime
from .errors import ConfigurationError, MaskError, ProtocolError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(parser, suppress: bool):
    # shared flags work both before and after the subcommand; the subcommand
    # copies use SUPPRESS so they never clobber a value parsed up front
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--config", metavar="PATH",
                        help="key=value configuration file", **kw)
    parser.add_argument("--seed", type=int, metavar="N", help="master seed", **kw)
    parser.add_argument("--out", metavar="DIR", help="output directory", **kw)
    parser.add_argument("--trials", type=int, metavar="N",
                        help="Monte Carlo trials", **kw)
    parser.add_argument("--threads", type=int, metavar="N",
                        help="worker processes", **kw)
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override any configuration key (repeatable)",
                        **({"default": argparse.SUPPRESS} if suppress else {"default": []}))


def _build_parser() -> _Parser:
    p = _Parser(prog="mtjsim",
                description="Stochastic MTJ synapse simulator (STP/LTP, sweeps, arrays)")
    _add_common(p, suppress=False)

    sub = p.add_subparsers(dest="command", required=True)

    def add_sub(name, help_text):
        s = sub.add_parser(name, help=help_text)
        _add_common(s, suppress=True)
        return s

    s = add_sub("trace", "single pulse-train trajectory CSV")
    s.add_argument("--interval-ns", type=float, metavar="X")
    s.add_argument("--pulses", type=int, metavar="N")
    s.add_argument("--amplitude-uA", type=float, metavar="X")
    s.add_argument("--width-ns", type=float, metavar="X")

    s = add_sub("ltp-sweep", "P(LTP) and mean conductance vs interval")
    s.add_argument("--interval-ns", type=float, nargs="*", metavar="X",
                   help="override sweep intervals")

    add_sub("ppf-ptp", "paired-pulse facilitation / post-tetanic potentiation")

    s = add_sub("array", "image-driven memory array snapshots")
    s.add_argument("--mask", metavar="PATH", help="P1 bitmap stimulus")
    s.add_argument("--interval-ns", type=float, metavar="X")
    s.add_argument("--pulses", type=int, metavar="N")

    add_sub("lifetime", "retention lifetimes for the configured barrier and 40 kT")
    add_sub("constants", "print the physical constants in use")
    add_sub("dump-config", "print the effective configuration")
    return p


def _collect_overrides(args) -> dict:
    overrides: dict = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, val = item.partition("=")
        overrides[key.strip()] = val.strip()
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.threads is not None:
        overrides["threads"] = args.threads

    cmd = args.command
    if cmd == "trace":
        if args.interval_ns is not None:
            overrides["interval_ns"] = args.interval_ns
        if args.pulses is not None:
            overrides["pulse_count"] = args.pulses
        if args.amplitude_uA is not None:
            overrides["pulse_amplitude_uA"] = args.amplitude_uA
        if args.width_ns is not None:
            overrides["pulse_width_ns"] = args.width_ns
    elif cmd == "ltp-sweep":
        if args.interval_ns:
            overrides["sweep_intervals_ns"] = tuple(args.interval_ns)
    elif cmd == "array":
        if args.mask is not None:
            overrides["array_mask"] = args.mask
        if args.interval_ns is not None:
            overrides["array_interval_ns"] = args.interval_ns
        if args.pulses is not None:
            overrides["array_pulse_count"] = args.pulses
    return overrides


def _preamble(command: str, cfg: RunConfig) -> list[str]:
    lines = [f"# mtjsim {command}", f"# master_seed = {cfg.master_seed}"]
    lines += [f"# {line}" for line in cfg.dump().strip().splitlines()]
    return lines


def _write_csv(path: Path, preamble: list[str], header: str, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for line in preamble:
            fh.write(line + "\n")
        if header:
            fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")
    return path


def _pool(cfg: RunConfig):
    if cfg.threads > 1:
        return ProcessPoolExecutor(max_workers=cfg.threads)
    return None


def _bundled_mask_text() -> str:
    return resources.files("mtjsim").joinpath("data/logo_34x43.pbm").read_text()


def _load_mask(cfg: RunConfig) -> arraysim.ImageMask:
    if cfg.array_mask:
        text = Path(cfg.array_mask).read_text()
    else:
        text = _bundled_mask_text()
    return arraysim.load_mask(text, cfg.array_rows, cfg.array_cols)


# ---- subcommands -----------------------------------------------------------

def _cmd_trace(cfg: RunConfig, out: Path) -> list[Path]:
    device = cfg.device()
    trace = protocols.trial_trace(cfg.train(), device, cfg.demag(device),
                                  cfg.stepper(), _stream(cfg),
                                  equilibration=cfg.equilibration)
    rows = (
        f"{t * 1e9:.9g},{m[0]:.9g},{m[1]:.9g},{m[2]:.9g},"
        f"{np.degrees(th):.9g},{g * 1e3:.9g},{i * 1e6:.9g}"
        for t, m, th, g, i in zip(trace.t, trace.m, trace.theta,
                                  trace.conductance, trace.current)
    )
    path = _write_csv(out / "trace.csv", _preamble("trace", cfg),
                      "t_ns,mx,my,mz,theta_deg,G_mS,I_uA", rows)
    return [path]


def _stream(cfg: RunConfig):
    from .rng import RngStream
    return RngStream(cfg.master_seed, 0)


def _run_sweep(cfg: RunConfig) -> protocols.SweepResult:
    device = cfg.device()
    pool = _pool(cfg)
    try:
        return protocols.ltp_probability_sweep(
            [v * 1e-9 for v in cfg.sweep_intervals_ns], cfg.trials, cfg.train(),
            device, cfg.demag(device), cfg.stepper(), cfg.master_seed,
            equilibration=cfg.equilibration, pool=pool)
    finally:
        if pool is not None:
            pool.shutdown()


def _cmd_ltp_sweep(cfg: RunConfig, out: Path) -> list[Path]:
    sweep = _run_sweep(cfg)
    pre = _preamble("ltp-sweep", cfg)
    files = [
        _write_csv(out / "ltp_sweep.csv", pre,
                   "interval_ns,p_ltp,halfwidth,trials",
                   (f"{iv * 1e9:.9g},{p:.9g},{hw:.9g},{sweep.trials}"
                    for iv, p, hw in zip(sweep.intervals, sweep.ltp_probability,
                                         sweep.confidence_halfwidth))),
        _write_csv(out / "conductance_per_pulse.csv", pre,
                   "interval_ns,pulse,G_mS",
                   (f"{iv * 1e9:.9g},{k + 1},{g * 1e3:.9g}"
                    for i, iv in enumerate(sweep.intervals)
                    for k, g in enumerate(sweep.mean_conductance_per_pulse[i]))),
    ]
    return files


def _cmd_ppf_ptp(cfg: RunConfig, out: Path) -> list[Path]:
    if cfg.pulse_count < 10:
        raise ProtocolError("ppf-ptp needs pulse_count >= 10")
    sweep = _run_sweep(cfg)
    ppf, ptp = protocols.ppf_ptp(sweep)
    path = _write_csv(out / "ppf_ptp.csv", _preamble("ppf-ptp", cfg),
                      "interval_ns,ppf_mS,ptp_mS",
                      (f"{iv * 1e9:.9g},{a * 1e3:.9g},{b * 1e3:.9g}"
                       for iv, a, b in zip(sweep.intervals, ppf, ptp)))
    return [path]


def _cmd_array(cfg: RunConfig, out: Path) -> list[Path]:
    device = cfg.device()
    mask = _load_mask(cfg)
    pool = _pool(cfg)
    try:
        state = arraysim.run_array(mask, cfg.array_train(), device,
                                   cfg.demag(device), cfg.stepper(),
                                   cfg.master_seed,
                                   equilibration=cfg.equilibration, pool=pool)
    finally:
        if pool is not None:
            pool.shutdown()

    pre = _preamble("array", cfg)
    files = []
    for label, g in state.snapshots:
        rows = (",".join(f"{v * 1e3:.6g}" for v in row) for row in g)
        files.append(_write_csv(out / f"snapshot_{label}.csv", pre, "", rows))

    summary_rows = []
    for idx, (label, _) in enumerate(state.snapshots):
        summary_rows.append(
            f"{label},{arraysim.recall_score(state, mask, idx):.9g},"
            f"{arraysim.on_ltp_fraction(state, idx):.9g}")
    pre_summary = pre + [
        f"# off_cell_crossings = {arraysim.off_crossing_count(state)}",
        f"# charge_per_on_cell_C = {state.charge_per_on_cell:.9g}",
    ]
    files.append(_write_csv(out / "recall_summary.csv", pre_summary,
                            "snapshot,recall,on_ltp_fraction", summary_rows))
    return files


def _cmd_lifetime(cfg: RunConfig) -> None:
    device = cfg.device()
    attempt = cfg.attempt_time_ns * 1e-9
    tau = retention_lifetime(device, attempt)
    alt = DeviceParams(**{**_device_kwargs(device),
                          "e_b": 40.0 * CONSTANTS.k_b * device.t_k})
    tau40 = retention_lifetime(alt, attempt)
    print(f"barrier {cfg.energy_barrier_kT:g} kT at {device.t_k:g} K, "
          f"attempt {cfg.attempt_time_ns:g} ns:")
    print(f"  lifetime = {tau:.6e} s = {tau / SECONDS_PER_HOUR:.4g} hours")
    print(f"barrier 40 kT at {device.t_k:g} K, attempt {cfg.attempt_time_ns:g} ns:")
    print(f"  lifetime = {tau40:.6e} s = {tau40 / SECONDS_PER_YEAR:.4g} years")


def _device_kwargs(device: DeviceParams) -> dict:
    return dict(axis_a=device.axis_a, axis_b=device.axis_b,
                thickness=device.thickness, m_s=device.m_s, alpha=device.alpha,
                eta=device.eta, e_b=device.e_b, g_p=device.g_p, g_ap=device.g_ap,
                t_k=device.t_k)


def _cmd_constants(cfg: RunConfig) -> None:
    for name, value in CONSTANTS.items():
        print(f"{name:18s} = {value!r}")
    device = cfg.device()
    print(f"{'volume [m^3]':18s} = {device.volume!r}")
    print(f"{'N_s':18s} = {num_spins(device)!r}")
    print(f"{'H_k [A/m]':18s} = {anisotropy_field(device)!r}")


def dispatch(command: str, cfg: RunConfig) -> int:
    """Run one subcommand against the effective configuration."""
    out = Path(cfg.out_dir)
    if command == "trace":
        files = _cmd_trace(cfg, out)
    elif command == "ltp-sweep":
        files = _cmd_ltp_sweep(cfg, out)
    elif command == "ppf-ptp":
        files = _cmd_ppf_ptp(cfg, out)
    elif command == "array":
        files = _cmd_array(cfg, out)
    elif command == "lifetime":
        _cmd_lifetime(cfg)
        return 0
    elif command == "constants":
        _cmd_constants(cfg)
        return 0
    elif command == "dump-config":
        sys.stdout.write(cfg.dump())
        return 0
    else:
        raise ConfigurationError(f"unknown subcommand: {command}")
    for f in files:
        print(f"wrote {f}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        file_text = Path(args.config).read_text() if args.config else ""
        cfg = parse_config(file_text, _collect_overrides(args))
        return dispatch(args.command, cfg)
    except (ConfigurationError, MaskError, ProtocolError) as exc:
        print(f"mtjsim: configuration error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"mtjsim: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures
        print(f"mtjsim: runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
