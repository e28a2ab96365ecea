/**
 * The four figure kinds rendered from the simulator's CSV files:
 *
 *   trace       conductance and drive current against time
 *   sweep       LTP probability against stimulation interval, with
 *               confidence bars
 *   ppf-ptp     paired-pulse facilitation and post-tetanic potentiation
 *               against interval
 *   array-grid  conductance heat maps of the memory array, one panel per
 *               snapshot, shared fixed color scale
 *
 * Rendering never mutates or rescales data: every plotted point is the
 * parsed value pushed through one linear pixel mapping, which is returned
 * alongside the image so tests can verify plotted positions independently.
 */

import { column, readMatrix, readTable, CsvError } from "./csv.js";
import {
  BLACK, BLUE, GRAY, LIGHT_GRAY, ORANGE, Raster, WHITE, Color,
} from "./raster.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Affine data -> pixel mapping for one axis. */
export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly p0: number,
    readonly p1: number,
  ) {}

  map(v: number): number {
    return this.p0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.p1 - this.p0);
  }
}

export interface Panel {
  label: string;
  rect: Rect; // pixel rect of the heat-map cells
  rows: number;
  cols: number;
}

export interface RenderedFigure {
  raster: Raster;
  png: Buffer;
  plot: Rect;
  x: LinearScale;
  y: LinearScale;
  panels?: Panel[];
}

export const SERIES: Record<string, Color> = {
  trace: BLUE,
  sweep: BLUE,
  ppf: BLUE,
  ptp: ORANGE,
};

// fixed heat-map color scale in mS, comparable across snapshots
export const HEAT_LO = 0.5;
export const HEAT_HI = 1.0;

const HEAT_ANCHORS: Color[] = [
  [13, 8, 135],
  [126, 3, 168],
  [204, 71, 120],
  [248, 149, 64],
  [240, 249, 33],
];

/** Piecewise-linear ramp over the fixed scale, clamped at the ends. */
export function heatColor(v: number, lo = HEAT_LO, hi = HEAT_HI): Color {
  const t = Math.min(1, Math.max(0, (v - lo) / (hi - lo)));
  const pos = t * (HEAT_ANCHORS.length - 1);
  const i = Math.min(HEAT_ANCHORS.length - 2, Math.floor(pos));
  const f = pos - i;
  const a = HEAT_ANCHORS[i];
  const b = HEAT_ANCHORS[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

function span(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function padded([lo, hi]: [number, number], frac = 0.05): [number, number] {
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}

/** 1-2-5 tick positions covering [lo, hi] with about `n` steps. */
export function ticks(lo: number, hi: number, n = 5): number[] {
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

function tickLabel(v: number): string {
  const s = v.toPrecision(6);
  return String(Number(s));
}

function drawFrame(
  r: Raster,
  plot: Rect,
  x: LinearScale,
  y: LinearScale,
  xLabel: string,
  yLabel: string,
): void {
  r.fillRect(plot.x, plot.y, plot.w, 1, GRAY);
  r.fillRect(plot.x, plot.y + plot.h - 1, plot.w, 1, BLACK);
  r.fillRect(plot.x, plot.y, 1, plot.h, BLACK);
  r.fillRect(plot.x + plot.w - 1, plot.y, 1, plot.h, GRAY);

  for (const tv of ticks(Math.min(x.d0, x.d1), Math.max(x.d0, x.d1))) {
    const px = Math.round(x.map(tv));
    if (px < plot.x || px > plot.x + plot.w) continue;
    r.fillRect(px, plot.y + plot.h - 1, 1, 5, BLACK);
    r.textCentered(px, plot.y + plot.h + 8, tickLabel(tv), BLACK);
  }
  for (const tv of ticks(Math.min(y.d0, y.d1), Math.max(y.d0, y.d1))) {
    const py = Math.round(y.map(tv));
    if (py < plot.y || py > plot.y + plot.h) continue;
    r.fillRect(plot.x - 4, py, 5, 1, BLACK);
    const label = tickLabel(tv);
    r.text(plot.x - 8 - label.length * 6, py - 3, label, BLACK);
  }
  r.textCentered(plot.x + plot.w / 2, plot.y + plot.h + 24, xLabel, BLACK);
  r.textVertical(8, plot.y + plot.h / 2, yLabel, BLACK);
}

const MARGIN = { left: 64, right: 20, top: 16, bottom: 44 };

function plotArea(width: number, height: number): Rect {
  return {
    x: MARGIN.left,
    y: MARGIN.top,
    w: width - MARGIN.left - MARGIN.right,
    h: height - MARGIN.top - MARGIN.bottom,
  };
}

export function renderTrace(text: string, width = 900, height = 520): RenderedFigure {
  const t = readTable(text, ["t_ns", "mx", "my", "mz", "theta_deg", "G_mS", "I_uA"]);
  const ts = column(t, "t_ns");
  const gs = column(t, "G_mS");
  const is = column(t, "I_uA");

  const r = new Raster(width, height);
  const plot = plotArea(width, height);
  const x = new LinearScale(...span(ts), plot.x, plot.x + plot.w);
  const y = new LinearScale(...padded(span(gs)), plot.y + plot.h, plot.y);

  // drive current as a light waveform along the bottom quarter
  drawFrame(r, plot, x, y, "t (ns)", "G (mS)");
  const [ilo, ihi] = span(is);
  const iy = new LinearScale(ilo, ihi, plot.y + plot.h - 2, plot.y + plot.h - plot.h / 4);
  for (let i = 1; i < ts.length; i++) {
    r.line(x.map(ts[i - 1]), iy.map(is[i - 1]), x.map(ts[i]), iy.map(is[i]), LIGHT_GRAY);
  }
  for (let i = 1; i < ts.length; i++) {
    r.line(x.map(ts[i - 1]), y.map(gs[i - 1]), x.map(ts[i]), y.map(gs[i]), SERIES.trace);
  }
  return { raster: r, png: r.png(), plot, x, y };
}

export function renderSweep(text: string, width = 720, height = 520): RenderedFigure {
  const t = readTable(text, ["interval_ns", "p_ltp", "halfwidth", "trials"]);
  const iv = column(t, "interval_ns");
  const p = column(t, "p_ltp");
  const hw = column(t, "halfwidth");

  const r = new Raster(width, height);
  const plot = plotArea(width, height);
  const x = new LinearScale(...padded(span(iv)), plot.x, plot.x + plot.w);
  const y = new LinearScale(-0.02, 1.02, plot.y + plot.h, plot.y);

  drawFrame(r, plot, x, y, "interval (ns)", "P(LTP)");
  for (let i = 1; i < iv.length; i++) {
    r.line(x.map(iv[i - 1]), y.map(p[i - 1]), x.map(iv[i]), y.map(p[i]), SERIES.sweep, 2);
  }
  for (let i = 0; i < iv.length; i++) {
    const px = Math.round(x.map(iv[i]));
    const lo = y.map(Math.max(0, p[i] - hw[i]));
    const hi = y.map(Math.min(1, p[i] + hw[i]));
    r.line(px, lo, px, hi, GRAY);
    r.fillRect(px - 3, Math.round(hi), 7, 1, GRAY);
    r.fillRect(px - 3, Math.round(lo), 7, 1, GRAY);
    r.marker(Math.round(x.map(iv[i])), Math.round(y.map(p[i])), SERIES.sweep, 3);
  }
  return { raster: r, png: r.png(), plot, x, y };
}

export function renderPpfPtp(text: string, width = 720, height = 520): RenderedFigure {
  const t = readTable(text, ["interval_ns", "ppf_mS", "ptp_mS"]);
  const iv = column(t, "interval_ns");
  const ppf = column(t, "ppf_mS");
  const ptp = column(t, "ptp_mS");

  const r = new Raster(width, height);
  const plot = plotArea(width, height);
  const x = new LinearScale(...padded(span(iv)), plot.x, plot.x + plot.w);
  const y = new LinearScale(...padded(span([...ppf, ...ptp]), 0.08), plot.y + plot.h, plot.y);

  drawFrame(r, plot, x, y, "interval (ns)", "G (mS)");
  for (const [series, color] of [
    [ppf, SERIES.ppf],
    [ptp, SERIES.ptp],
  ] as const) {
    for (let i = 1; i < iv.length; i++) {
      r.line(x.map(iv[i - 1]), y.map(series[i - 1]), x.map(iv[i]), y.map(series[i]), color, 2);
    }
    for (let i = 0; i < iv.length; i++) {
      r.marker(Math.round(x.map(iv[i])), Math.round(y.map(series[i])), color, 3);
    }
  }
  r.fillRect(plot.x + plot.w - 90, plot.y + 10, 10, 10, SERIES.ppf);
  r.text(plot.x + plot.w - 75, plot.y + 11, "PPF", BLACK);
  r.fillRect(plot.x + plot.w - 90, plot.y + 26, 10, 10, SERIES.ptp);
  r.text(plot.x + plot.w - 75, plot.y + 27, "PTP", BLACK);
  return { raster: r, png: r.png(), plot, x, y };
}

export interface Snapshot {
  label: string;
  text: string;
}

export function renderArrayGrid(snapshots: Snapshot[], cellSize = 6): RenderedFigure {
  if (snapshots.length === 0) throw new CsvError("no snapshots given");
  const matrices = snapshots.map((s) => readMatrix(s.text));
  const rows = matrices[0].length;
  const cols = matrices[0][0].length;
  for (const m of matrices) {
    if (m.length !== rows || m[0].length !== cols) {
      throw new CsvError("snapshots have differing dimensions");
    }
  }

  const nCols = Math.min(3, snapshots.length);
  const nRows = Math.ceil(snapshots.length / nCols);
  const panelW = cols * cellSize;
  const panelH = rows * cellSize;
  const gap = 26;
  const left = 16;
  const top = 16;
  const barW = 46;
  const width = left + nCols * (panelW + gap) + barW;
  const height = top + nRows * (panelH + gap) + 8;

  const r = new Raster(width, height);
  const panels: Panel[] = [];
  for (let k = 0; k < snapshots.length; k++) {
    const gx = left + (k % nCols) * (panelW + gap);
    const gy = top + Math.floor(k / nCols) * (panelH + gap);
    const m = matrices[k];
    for (let row = 0; row < rows; row++) {
      for (let col = 0; col < cols; col++) {
        r.fillRect(gx + col * cellSize, gy + row * cellSize, cellSize, cellSize,
                   heatColor(m[row][col]));
      }
    }
    r.textCentered(gx + panelW / 2, gy + panelH + 6, snapshots[k].label, BLACK);
    panels.push({ label: snapshots[k].label, rect: { x: gx, y: gy, w: panelW, h: panelH }, rows, cols });
  }

  // shared color bar, high value on top
  const bx = width - barW + 6;
  const bh = panelH;
  for (let i = 0; i < bh; i++) {
    const v = HEAT_HI - (i / (bh - 1)) * (HEAT_HI - HEAT_LO);
    r.fillRect(bx, top + i, 12, 1, heatColor(v));
  }
  r.text(bx + 15, top - 3, tickLabel(HEAT_HI), BLACK);
  r.text(bx + 15, top + bh - 4, tickLabel(HEAT_LO), BLACK);
  r.textVertical(bx + 22, top + bh / 2, "G (mS)", BLACK);

  const plot = { x: left, y: top, w: width - left - barW, h: height - top };
  const identity = new LinearScale(0, 1, 0, 1);
  return { raster: r, png: r.png(), plot, x: identity, y: identity, panels };
}
