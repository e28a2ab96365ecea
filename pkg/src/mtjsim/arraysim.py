"""Image-driven MTJ memory array experiment.

Every cell of the array is an independent junction sharing one set of device
parameters.  ON pixels of a binary stimulus receive the pulse train, OFF
pixels receive zero current but full thermal dynamics.  Conductance maps are
snapshotted at the end of each pulse and once more after the final relax
window.  Cell (r, c) always draws from stream_id = r * cols + c, so snapshots
are bit-identical for any simulation order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from .device import DemagTensor, DeviceParams, conductance
from .errors import MaskError
from .llg import StepperConfig, run_program
from .protocols import (DEFAULT_EQUILIBRATION, LTP_THRESHOLD, PulseTrain,
                        antiparallel_start, build_program, pulse_end_indices)
from .rng import RngStream

CELL_BLOCK = 128  # cells advanced together; fixed so batching never matters


@dataclass(frozen=True)
class ImageMask:
    """Binary stimulus pattern; pixels[r, c] == True means ON."""

    rows: int
    cols: int
    pixels: np.ndarray

    def on_count(self) -> int:
        return int(np.count_nonzero(self.pixels))


@dataclass
class ArrayState:
    """Outcome of an array run: per-cell final state and labelled
    conductance-map snapshots [S]."""

    rows: int
    cols: int
    device: DeviceParams
    snapshots: list          # [(label, (rows, cols) conductance matrix)]
    final_m: np.ndarray      # (rows, cols, 3)
    max_alignment: np.ndarray  # (rows, cols) running max of m . m_p
    mask: ImageMask
    charge_per_on_cell: float  # [C]


def load_mask(text: str, rows: int, cols: int) -> ImageMask:
    """Parse a plain-text portable bitmap (P1) of exactly rows x cols.

    `1` pixels are ON.  Comments (#) and arbitrary whitespace layout are
    accepted, per the PBM grammar.
    """
    tokens = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    if not tokens:
        raise MaskError("empty bitmap")
    if tokens[0] != "P1":
        raise MaskError(f"expected plain bitmap magic 'P1', got {tokens[0]!r}")
    if len(tokens) < 3:
        raise MaskError("bitmap header truncated")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise MaskError(f"bad bitmap dimensions: {tokens[1]!r} x {tokens[2]!r}") from exc
    if (height, width) != (rows, cols):
        raise MaskError(
            f"bitmap is {height}x{width}, expected {rows}x{cols}")
    data = tokens[3:]
    if len(data) != rows * cols:
        raise MaskError(f"expected {rows * cols} pixels, got {len(data)}")
    flat = np.empty(rows * cols, dtype=bool)
    for i, tok in enumerate(data):
        if tok == "1":
            flat[i] = True
        elif tok == "0":
            flat[i] = False
        else:
            raise MaskError(f"non-binary pixel value {tok!r} at index {i}")
    return ImageMask(rows=rows, cols=cols, pixels=flat.reshape(rows, cols))


def run_array(mask: ImageMask, train: PulseTrain, device: DeviceParams,
              demag: DemagTensor, config: StepperConfig, master_seed: int,
              equilibration: float = DEFAULT_EQUILIBRATION, pool=None,
              constants: PhysicalConstants = CONSTANTS) -> ArrayState:
    """Stimulate the array through `train` on ON cells and collect snapshots.

    All cells start AP and equilibrate for `equilibration` before the first
    pulse.  Snapshot labels are pulse_1 .. pulse_N and plus_<relax>ns.
    """
    rows, cols = mask.rows, mask.cols
    n = rows * cols
    on = mask.pixels.ravel()

    cell_ids = np.arange(n)
    blocks = [cell_ids[lo:lo + CELL_BLOCK] for lo in range(0, n, CELL_BLOCK)]
    runner = _ArrayBlock(mask, train, device, demag, config, master_seed,
                         equilibration, constants)
    if pool is None:
        results = [runner(b) for b in blocks]
    else:
        results = list(pool.map(runner, blocks))

    ends = pulse_end_indices(train, equilibration)
    n_snapshots = train.count + 1
    g_snap = np.zeros((n_snapshots, n))
    final_m = np.zeros((n, 3))
    max_align = np.zeros(n)
    for ids, bounds, fm, ma in results:
        for s in range(train.count):
            g_snap[s, ids] = conductance(bounds[ends[s]], device)
        g_snap[train.count, ids] = conductance(fm, device)
        final_m[ids] = fm
        max_align[ids] = ma

    labels = [f"pulse_{k + 1}" for k in range(train.count)]
    labels.append(f"plus_{train.relax_after * 1e9:g}ns")
    snapshots = [(labels[s], g_snap[s].reshape(rows, cols))
                 for s in range(n_snapshots)]

    return ArrayState(rows=rows, cols=cols, device=device, snapshots=snapshots,
                      final_m=final_m.reshape(rows, cols, 3),
                      max_alignment=max_align.reshape(rows, cols), mask=mask,
                      charge_per_on_cell=train.charge())


class _ArrayBlock:
    """Picklable per-block cell simulator."""

    def __init__(self, mask, train, device, demag, config, master_seed,
                 equilibration, constants):
        self.mask = mask
        self.train = train
        self.device = device
        self.demag = demag
        self.config = config
        self.master_seed = master_seed
        self.equilibration = equilibration
        self.constants = constants

    def __call__(self, ids: np.ndarray):
        on = self.mask.pixels.ravel()[ids]
        amp = np.where(on, self.train.amplitude, 0.0)
        streams = [RngStream(self.master_seed, int(j)) for j in ids]
        m0 = antiparallel_start(self.device, len(ids))
        program = build_program(self.train, self.equilibration, amplitude=amp)
        res = run_program(m0, program, self.device, self.demag, self.config,
                          streams, track_alignment=True, constants=self.constants)
        return ids, res.boundaries, res.final_m, res.max_mdotp


def recall_score(state: ArrayState, mask: ImageMask, snapshot_index: int) -> float:
    """Fraction of cells whose binarized conductance matches the mask.

    Threshold is the conductance midpoint (G_P + G_AP) / 2.
    """
    if not -len(state.snapshots) <= snapshot_index < len(state.snapshots):
        raise IndexError(f"snapshot {snapshot_index} out of range")
    _, g = state.snapshots[snapshot_index]
    mid = 0.5 * (state.device.g_p + state.device.g_ap)
    return float(np.mean((g > mid) == mask.pixels))


def on_ltp_fraction(state: ArrayState, snapshot_index: int = -1) -> float:
    """Fraction of ON cells binarized as potentiated at a snapshot."""
    _, g = state.snapshots[snapshot_index]
    mid = 0.5 * (state.device.g_p + state.device.g_ap)
    on = state.mask.pixels
    if not on.any():
        return 0.0
    return float(np.mean(g[on] > mid))


def off_crossing_count(state: ArrayState) -> int:
    """OFF cells whose running max of m . m_p ever reached the LTP threshold."""
    off = ~state.mask.pixels
    return int(np.count_nonzero(state.max_alignment[off] > LTP_THRESHOLD))
