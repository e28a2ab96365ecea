"""Stochastic macrospin simulator of MTJ volatile synapses.

Core layers: device physics (`device`), stochastic LLG integration (`llg`),
stimulation experiments (`protocols`), memory-array runs (`arraysim`),
configuration (`config`) and the command-line front end (`cli`).
"""

from .constants import CONSTANTS, PhysicalConstants
from .device import (DemagTensor, DeviceParams, anisotropy_field, conductance,
                     demag_factors, energy, magnetic_energy, num_spins,
                     retention_lifetime)
from .errors import ConfigurationError, MaskError, ProtocolError
from .llg import (MagnetizationState, Segment, StepperConfig, Trace,
                  effective_field, llg_rhs, llg_rhs_fixed_point, run,
                  run_program, step_heun, thermal_field, thermal_sigma)
from .protocols import (PulseTrain, SweepResult, TrialOutcome,
                        ltp_probability_sweep, ppf_ptp, run_trial)
from .arraysim import (ArrayState, ImageMask, load_mask, recall_score,
                       run_array)
from .config import RunConfig, parse_config
from .rng import RngStream

__version__ = "0.1.0"
