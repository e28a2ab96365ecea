"""Run configuration: flat key=value files with unit-suffixed keys.

Precedence is defaults <- file <- command-line overrides.  Unknown keys are
rejected by name, values outside their invariants raise with the offending
key in the message, and `dump()` followed by `parse_config()` reproduces the
effective configuration bit-exactly.

Every default is the corresponding device/table value used throughout the
experiments; units live in the key names (nm, ns, ps, uA, mS, kT at the
configured temperature) so no value is ever ambiguous.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .constants import CONSTANTS, PhysicalConstants
from .device import DemagTensor, DeviceParams, demag_factors
from .errors import ConfigurationError
from .llg import StepperConfig
from .protocols import PulseTrain


@dataclass(frozen=True)
class RunConfig:
    # device (Table values)
    axis_a_nm: float = 40.0
    axis_b_nm: float = 40.0
    thickness_nm: float = 1.5
    saturation_magnetization_kA_per_m: float = 1000.0
    gilbert_damping: float = 0.0122
    spin_polarization: float = 0.5
    energy_barrier_kT: float = 31.44     # in units of k_B * temperature_K
    conductance_p_mS: float = 1.0
    conductance_ap_mS: float = 0.5
    temperature_K: float = 300.0
    # dynamics
    include_demag: bool = False   # superpose the computed shape tensor
                                  # (see README: off reproduces the figures)
    dt_ps: float = 1.0
    sample_every_ps: float = 10.0
    renormalize: bool = True
    alpha_torque_correction: bool = True
    # stimulation
    pulse_amplitude_uA: float = 100.0
    pulse_width_ns: float = 1.0
    interval_ns: float = 6.0
    pulse_count: int = 10
    relax_after_ns: float = 10.0
    equilibration_ns: float = 1.0
    # retention
    attempt_time_ns: float = 1.0
    # sweep
    sweep_intervals_ns: tuple = (2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)
    trials: int = 100
    # array
    array_rows: int = 34
    array_cols: int = 43
    array_pulse_count: int = 5
    array_interval_ns: float = 2.5
    array_relax_ns: float = 5.0
    array_mask: str = ""          # path to a P1 bitmap; empty = bundled glyph
    # execution
    master_seed: int = 12345
    threads: int = 1
    out_dir: str = "out"

    # ---- validation ----
    def validate(self) -> "RunConfig":
        req_pos = ["axis_a_nm", "axis_b_nm", "thickness_nm",
                   "saturation_magnetization_kA_per_m", "temperature_K",
                   "dt_ps", "sample_every_ps", "pulse_width_ns",
                   "attempt_time_ns"]
        for key in req_pos:
            if getattr(self, key) <= 0:
                raise ConfigurationError(f"{key} must be positive, got {getattr(self, key)}")
        if self.gilbert_damping < 0:
            raise ConfigurationError(
                f"gilbert_damping must be >= 0, got {self.gilbert_damping}")
        if not 0.0 < self.spin_polarization <= 1.0:
            raise ConfigurationError(
                f"spin_polarization must be in (0, 1], got {self.spin_polarization}")
        if self.energy_barrier_kT < 0:
            raise ConfigurationError(
                f"energy_barrier_kT must be >= 0, got {self.energy_barrier_kT}")
        if not self.conductance_p_mS > self.conductance_ap_mS > 0:
            raise ConfigurationError(
                "need conductance_p_mS > conductance_ap_mS > 0, got "
                f"{self.conductance_p_mS} and {self.conductance_ap_mS}")
        if self.sample_every_ps < self.dt_ps:
            raise ConfigurationError("sample_every_ps must be >= dt_ps")
        for key in ["interval_ns", "relax_after_ns", "equilibration_ns",
                    "array_interval_ns", "array_relax_ns"]:
            if getattr(self, key) < 0:
                raise ConfigurationError(f"{key} must be >= 0, got {getattr(self, key)}")
        for key in ["pulse_count", "array_pulse_count", "trials", "threads",
                    "array_rows", "array_cols"]:
            if getattr(self, key) < 1:
                raise ConfigurationError(f"{key} must be >= 1, got {getattr(self, key)}")
        if not self.sweep_intervals_ns:
            raise ConfigurationError("sweep_intervals_ns must not be empty")
        if any(v < 0 for v in self.sweep_intervals_ns):
            raise ConfigurationError("sweep_intervals_ns must all be >= 0")
        return self

    # ---- factories: SI objects for the simulation layers ----
    def device(self, constants: PhysicalConstants = CONSTANTS) -> DeviceParams:
        return DeviceParams(
            axis_a=self.axis_a_nm * 1e-9,
            axis_b=self.axis_b_nm * 1e-9,
            thickness=self.thickness_nm * 1e-9,
            m_s=self.saturation_magnetization_kA_per_m * 1e3,
            alpha=self.gilbert_damping,
            eta=self.spin_polarization,
            e_b=self.energy_barrier_kT * constants.k_b * self.temperature_K,
            g_p=self.conductance_p_mS * 1e-3,
            g_ap=self.conductance_ap_mS * 1e-3,
            t_k=self.temperature_K,
        )

    def demag(self, device: DeviceParams | None = None) -> DemagTensor:
        """Tensor entering the dynamical field.

        The computed shape tensor when include_demag is on; otherwise the
        isotropic (torque-free) tensor, leaving the configured uniaxial
        barrier as the only anisotropy, which is the landscape the
        experiments assume.
        """
        if self.include_demag:
            return demag_factors(device or self.device())
        return DemagTensor.isotropic()

    def stepper(self) -> StepperConfig:
        return StepperConfig(
            dt=self.dt_ps * 1e-12,
            sample_every=self.sample_every_ps * 1e-12,
            renormalize=self.renormalize,
            include_alpha_torque_correction=self.alpha_torque_correction,
        )

    def train(self) -> PulseTrain:
        return PulseTrain(
            amplitude=self.pulse_amplitude_uA * 1e-6,
            width=self.pulse_width_ns * 1e-9,
            interval=self.interval_ns * 1e-9,
            count=self.pulse_count,
            relax_after=self.relax_after_ns * 1e-9,
        )

    def array_train(self) -> PulseTrain:
        return PulseTrain(
            amplitude=self.pulse_amplitude_uA * 1e-6,
            width=self.pulse_width_ns * 1e-9,
            interval=self.array_interval_ns * 1e-9,
            count=self.array_pulse_count,
            relax_after=self.array_relax_ns * 1e-9,
        )

    @property
    def equilibration(self) -> float:
        return self.equilibration_ns * 1e-9

    # ---- serialization ----
    def dump(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(key: str, text: str, kind):
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is tuple:
            return tuple(float(tok) for tok in text.split(",") if tok.strip())
        return text
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse value for {key}: {text!r}") from exc


_KIND = {"float": float, "int": int, "bool": bool, "str": str, "tuple": tuple}


def _field_kinds() -> dict:
    kinds = {}
    for f in dataclasses.fields(RunConfig):
        name = f.type if isinstance(f.type, str) else f.type.__name__
        kinds[f.name] = _KIND[name]
    return kinds


def _coerce(key: str, val, kind):
    if isinstance(val, str):
        return _parse_value(key, val, kind)
    if kind is tuple:
        return tuple(float(v) for v in val)
    if kind is bool:
        return bool(val)
    return kind(val)


def parse_config(file_text: str = "", overrides: dict | None = None) -> RunConfig:
    """Build the effective RunConfig from defaults <- file <- overrides.

    `file_text` is flat `key = value` text ('#' comments allowed);
    `overrides` maps key names to already-typed or string values.  Unknown
    keys raise ConfigurationError naming the key.
    """
    kinds = _field_kinds()
    values: dict = {}

    for lineno, raw in enumerate(file_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        if key not in kinds:
            raise ConfigurationError(f"unknown configuration key: {key}")
        values[key] = _parse_value(key, text, kinds[key])

    for key, val in (overrides or {}).items():
        if key not in kinds:
            raise ConfigurationError(f"unknown configuration key: {key}")
        values[key] = _coerce(key, val, kinds[key])

    return RunConfig(**values).validate()
