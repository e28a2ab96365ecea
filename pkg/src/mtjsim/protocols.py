"""Stimulation experiments: pulse-train trials, LTP-probability sweeps over
the inter-pulse interval, and PPF/PTP readouts.

Interval convention: `interval` is the zero-current gap between the falling
edge of one pulse and the rising edge of the next (period = width +
interval).  Conductance "after pulse n" is sampled at the falling edge of
pulse n.  A trial is classified LTP when, after `relax_after` of zero
current following the last pulse, m . m_p exceeds `LTP_THRESHOLD` (well
inside the parallel basin; back-switching over the barrier on that timescale
is negligible).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from .device import DemagTensor, DeviceParams, conductance
from .errors import ConfigurationError, ProtocolError
from .llg import MagnetizationState, Segment, StepperConfig, Trace, run, run_program
from .rng import RngStream

LTP_THRESHOLD = 0.5          # m . m_p above this counts as potentiated
DEFAULT_EQUILIBRATION = 1e-9  # zero-current thermalization before stimulation [s]
T0_TILT = np.deg2rad(1.0)    # deterministic start offset for T = 0 runs
TRIAL_BLOCK = 100            # trials advanced together; fixed so results do
                             # not depend on worker count


@dataclass(frozen=True)
class PulseTrain:
    """Rectangular stimulation program."""

    amplitude: float = 100e-6   # I_Q [A]
    width: float = 1e-9         # pulse width [s]
    interval: float = 6e-9      # gap between pulses, edge to edge [s]
    count: int = 10
    relax_after: float = 10e-9  # observation window after the last pulse [s]

    def __post_init__(self):
        if self.amplitude < 0:
            raise ConfigurationError(
                f"amplitude must be >= 0, got {self.amplitude}")
        if self.width <= 0:
            raise ConfigurationError(f"pulse width must be positive, got {self.width}")
        if self.interval < 0:
            raise ConfigurationError(f"interval must be >= 0, got {self.interval}")
        if self.count < 1:
            raise ConfigurationError(f"count must be >= 1, got {self.count}")
        if self.relax_after < 0:
            raise ConfigurationError(f"relax_after must be >= 0, got {self.relax_after}")

    def charge(self) -> float:
        """Total delivered charge count * width * amplitude [C]."""
        return self.count * self.width * self.amplitude

    def with_interval(self, interval: float) -> "PulseTrain":
        return PulseTrain(self.amplitude, self.width, interval, self.count,
                          self.relax_after)


@dataclass
class TrialOutcome:
    ltp: bool
    conductance_after_each_pulse: np.ndarray  # [S], one entry per pulse
    final_conductance: float                  # [S], after relax_after
    final_alignment: float                    # m . m_p at the end


@dataclass
class SweepResult:
    intervals: np.ndarray                 # [s]
    ltp_probability: np.ndarray
    confidence_halfwidth: np.ndarray      # 95% Wilson, same length
    mean_conductance_per_pulse: np.ndarray  # (n_intervals, count) [S]
    ppf: np.ndarray = field(default_factory=lambda: np.array([]))
    ptp: np.ndarray = field(default_factory=lambda: np.array([]))
    trials: int = 0


def build_program(train: PulseTrain, equilibration: float = DEFAULT_EQUILIBRATION,
                  amplitude=None) -> list[Segment]:
    """Segments for equilibration, `count` pulses separated by `interval`,
    then the relax window.  `amplitude` overrides the train's (may be a
    per-row array for ensembles)."""
    amp = train.amplitude if amplitude is None else amplitude
    program = []
    if equilibration > 0:
        program.append(Segment(equilibration, 0.0))
    for k in range(train.count):
        program.append(Segment(train.width, amp))
        if k < train.count - 1:
            program.append(Segment(train.interval, 0.0))
    if train.relax_after > 0:
        program.append(Segment(train.relax_after, 0.0))
    return program


def pulse_end_indices(train: PulseTrain, equilibration: float = DEFAULT_EQUILIBRATION):
    """Indices into the program's segment boundaries at each pulse end."""
    offset = 1 if equilibration > 0 else 0
    return [offset + 2 * k for k in range(train.count)]


def antiparallel_start(device: DeviceParams, n: int = 1) -> np.ndarray:
    """(n, 3) initial magnetization for the AP state.

    At finite temperature trajectories start exactly at -m_p and thermalize
    during equilibration; at T = 0 that is a torque stagnation point, so a
    deterministic 1-degree in-plane tilt is applied instead.
    """
    if device.t_k > 0:
        m0 = -device.m_p
    else:
        # rotate -m_p by the tilt within the x-y plane
        m0 = np.array([-np.cos(T0_TILT), np.sin(T0_TILT), 0.0])
    return np.tile(m0, (n, 1))


def run_trial(train: PulseTrain, device: DeviceParams, demag: DemagTensor,
              config: StepperConfig, stream: RngStream,
              equilibration: float = DEFAULT_EQUILIBRATION,
              constants: PhysicalConstants = CONSTANTS) -> TrialOutcome:
    """Simulate one stimulation trial and classify the outcome."""
    outcomes = run_trials_batch(train, device, demag, config, [stream],
                                equilibration, constants)
    return outcomes[0]


def run_trials_batch(train: PulseTrain, device: DeviceParams, demag: DemagTensor,
                     config: StepperConfig, streams, equilibration: float = DEFAULT_EQUILIBRATION,
                     constants: PhysicalConstants = CONSTANTS) -> list[TrialOutcome]:
    """Advance several independent trials in lockstep (identical program).

    Bit-identical to looping run_trial over the same streams.
    """
    n = len(streams)
    m0 = antiparallel_start(device, n)
    program = build_program(train, equilibration)
    res = run_program(m0, program, device, demag, config, streams,
                      constants=constants)
    ends = pulse_end_indices(train, equilibration)
    g_pulse = np.stack([conductance(res.boundaries[i], device) for i in ends],
                       axis=1)  # (n, count)
    align = res.final_m @ device.m_p
    g_final = conductance(res.final_m, device)
    return [TrialOutcome(ltp=bool(align[i] > LTP_THRESHOLD),
                         conductance_after_each_pulse=g_pulse[i],
                         final_conductance=float(g_final[i]),
                         final_alignment=float(align[i]))
            for i in range(n)]


def trial_trace(train: PulseTrain, device: DeviceParams, demag: DemagTensor,
                config: StepperConfig, stream: RngStream,
                equilibration: float = DEFAULT_EQUILIBRATION,
                constants: PhysicalConstants = CONSTANTS) -> Trace:
    """Full sampled Trace of one trial (equilibration included, t = 0 at the
    start of equilibration)."""
    m0 = antiparallel_start(device, 1)[0]
    program = build_program(train, equilibration)
    return run(MagnetizationState(m=m0), program, device, demag, config,
               stream, constants)


def wilson_halfwidth(successes: int, n: int, z: float = 1.959963984540054) -> float:
    """95% Wilson score interval halfwidth for a binomial proportion."""
    if n <= 0:
        return 1.0
    p = successes / n
    denom = 1.0 + z * z / n
    return (z / denom) * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))


def ltp_probability_sweep(intervals, trials: int, train: PulseTrain,
                          device: DeviceParams, demag: DemagTensor,
                          config: StepperConfig, master_seed: int,
                          equilibration: float = DEFAULT_EQUILIBRATION,
                          pool=None,
                          constants: PhysicalConstants = CONSTANTS) -> SweepResult:
    """Monte Carlo estimate of P(LTP) and per-pulse mean conductance vs
    interval.

    Trial j always uses RngStream(master_seed, j); trials are advanced in
    fixed blocks of TRIAL_BLOCK, optionally farmed out to a process pool, and
    reduced in trial order, so the result depends only on (master_seed,
    configuration).
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    intervals = np.asarray(list(intervals), dtype=float)

    tasks = []
    for i, gap in enumerate(intervals):
        tvar = train.with_interval(float(gap))
        for lo in range(0, trials, TRIAL_BLOCK):
            hi = min(lo + TRIAL_BLOCK, trials)
            tasks.append((i, lo, hi, tvar))

    runner = _SweepBlock(device, demag, config, master_seed, equilibration, constants)
    if pool is None:
        results = [runner(t) for t in tasks]
    else:
        results = list(pool.map(runner, tasks))

    per_interval: dict[int, dict[int, list[TrialOutcome]]] = {}
    for i, lo, outcomes in results:
        per_interval.setdefault(i, {})[lo] = outcomes

    p_ltp = np.zeros(len(intervals))
    halfwidth = np.zeros(len(intervals))
    mean_g = np.zeros((len(intervals), train.count))
    for i in range(len(intervals)):
        ordered: list[TrialOutcome] = []
        for lo in sorted(per_interval[i]):
            ordered.extend(per_interval[i][lo])
        k = sum(o.ltp for o in ordered)
        p_ltp[i] = k / trials
        halfwidth[i] = wilson_halfwidth(k, trials)
        mean_g[i] = np.mean([o.conductance_after_each_pulse for o in ordered], axis=0)

    sweep = SweepResult(intervals=intervals, ltp_probability=p_ltp,
                        confidence_halfwidth=halfwidth,
                        mean_conductance_per_pulse=mean_g, trials=trials)
    if train.count >= 10:
        sweep.ppf, sweep.ptp = ppf_ptp(sweep)
    return sweep


class _SweepBlock:
    """Picklable block runner for process pools."""

    def __init__(self, device, demag, config, master_seed, equilibration, constants):
        self.args = (device, demag, config, master_seed, equilibration, constants)

    def __call__(self, task):
        device, demag, config, master_seed, equilibration, constants = self.args
        i, lo, hi, tvar = task
        streams = [RngStream(master_seed, j) for j in range(lo, hi)]
        return i, lo, run_trials_batch(tvar, device, demag, config, streams,
                                       equilibration, constants)


def ppf_ptp(sweep: SweepResult):
    """Paired-pulse facilitation (mean conductance after pulse 2) and
    post-tetanic potentiation (after pulse 10) per interval."""
    if sweep.mean_conductance_per_pulse.shape[1] < 10:
        raise ProtocolError("PPF/PTP need at least 10 pulses per trial")
    return (sweep.mean_conductance_per_pulse[:, 1].copy(),
            sweep.mean_conductance_per_pulse[:, 9].copy())
