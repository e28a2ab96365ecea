#!/usr/bin/env node
/**
 * plot <kind> <inputs...> -o <out.png>
 *
 * kinds: trace | sweep | ppf-ptp | array-grid
 *
 * trace / sweep / ppf-ptp take one CSV; array-grid takes the snapshot CSVs
 * in display order (panel labels come from the snapshot_<label>.csv names).
 * Exit codes: 0 on success, 1 on bad usage or schema mismatch.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { CsvError } from "./csv.js";
import {
  RenderedFigure, Snapshot, renderArrayGrid, renderPpfPtp, renderSweep,
  renderTrace,
} from "./figures.js";

const KINDS = ["trace", "sweep", "ppf-ptp", "array-grid"] as const;
type Kind = (typeof KINDS)[number];

export function snapshotLabel(path: string): string {
  const name = basename(path).replace(/\.csv$/i, "");
  return name.startsWith("snapshot_") ? name.slice("snapshot_".length) : name;
}

export function run(argv: string[]): number {
  const args = [...argv];
  let out = "";
  const rest: string[] = [];
  while (args.length > 0) {
    const a = args.shift()!;
    if (a === "-o" || a === "--out") {
      const v = args.shift();
      if (v === undefined) {
        console.error("plot: -o needs a path");
        return 1;
      }
      out = v;
    } else {
      rest.push(a);
    }
  }
  if (rest.length < 2 || out === "") {
    console.error("usage: plot <trace|sweep|ppf-ptp|array-grid> <inputs...> -o <out.png>");
    return 1;
  }
  const kind = rest[0] as Kind;
  const inputs = rest.slice(1);
  if (!KINDS.includes(kind)) {
    console.error(`plot: unknown figure kind '${kind}'`);
    return 1;
  }
  if (kind !== "array-grid" && inputs.length !== 1) {
    console.error(`plot: ${kind} takes exactly one input CSV`);
    return 1;
  }

  let fig: RenderedFigure;
  try {
    if (kind === "array-grid") {
      const snapshots: Snapshot[] = inputs.map((p) => ({
        label: snapshotLabel(p),
        text: readFileSync(p, "utf8"),
      }));
      fig = renderArrayGrid(snapshots);
    } else {
      const text = readFileSync(inputs[0], "utf8");
      fig = kind === "trace" ? renderTrace(text)
        : kind === "sweep" ? renderSweep(text)
        : renderPpfPtp(text);
    }
  } catch (err) {
    if (err instanceof CsvError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`plot: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
  writeFileSync(out, fig.png);
  console.log(`wrote ${out} (${fig.raster.width}x${fig.raster.height})`);
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js")
  || process.argv[1]?.endsWith("plot");
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
