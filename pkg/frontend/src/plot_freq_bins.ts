// Accuracy by answer-frequency bin, grouped bars per recorded step,
// from a single freq_bins.csv.  The writer omits empty bins, so an
// absent (step, bin) pair renders as a gap, never as a zero bar.
//
//   tsx src/plot_freq_bins.ts --in run/freq_bins.csv --out bins.svg

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";

import { PALETTE, parsePlotArgs } from "./args.js";
import { fractionColumn, numericColumn, readTable, requireColumns } from "./csv.js";
import { BarGroup, buildBarChart } from "./svg.js";

// ---------------------------------------------------------------------------
// Canonical bins
// ---------------------------------------------------------------------------

// Must agree with the simulator's partition; anything else is schema drift.
export const CANONICAL_BINS: readonly [number, number][] = [
  [0.0, 0.2],
  [0.2, 0.4],
  [0.4, 0.6],
  [0.6, 0.8],
  [0.8, 1.0],
];

const BIN_EPS = 1e-9;

function binIndex(low: number, high: number): number {
  return CANONICAL_BINS.findIndex(
    ([lo, hi]) => Math.abs(lo - low) < BIN_EPS && Math.abs(hi - high) < BIN_EPS,
  );
}

function binLabel(index: number): string {
  const [lo, hi] = CANONICAL_BINS[index]!;
  return `(${lo.toFixed(1)}, ${hi.toFixed(1)}]`;
}

// ---------------------------------------------------------------------------
// Figure assembly
// ---------------------------------------------------------------------------

export interface BinCell {
  step: number;
  binLow: number;
  binHigh: number;
  accuracy: number;
}

export interface Figure {
  svg: string;
  /** Every plotted bar, in CSV order. */
  cells: BinCell[];
}

export function buildFreqBinsFigure(path: string): Figure {
  const table = readTable(path);
  requireColumns(table, ["step", "bin_low", "bin_high", "accuracy", "count"]);
  const steps = numericColumn(table, "step");
  const lows = numericColumn(table, "bin_low");
  const highs = numericColumn(table, "bin_high");
  const accuracies = fractionColumn(table, "accuracy");
  numericColumn(table, "count");

  const cells: BinCell[] = [];
  const byStep = new Map<number, (number | null)[]>();
  for (let i = 0; i < steps.length; i++) {
    const bin = binIndex(lows[i]!, highs[i]!);
    if (bin < 0) {
      throw new Error(
        `${path}: row ${i + 2} bin (${lows[i]}, ${highs[i]}] is not one of the five canonical frequency bins`,
      );
    }
    let slots = byStep.get(steps[i]!);
    if (slots === undefined) {
      slots = [null, null, null, null, null];
      byStep.set(steps[i]!, slots);
    }
    if (slots[bin] !== null) {
      throw new Error(`${path}: row ${i + 2} repeats bin ${binLabel(bin)} for step ${steps[i]}`);
    }
    slots[bin] = accuracies[i]!;
    cells.push({ step: steps[i]!, binLow: lows[i]!, binHigh: highs[i]!, accuracy: accuracies[i]! });
  }

  const orderedSteps = [...byStep.keys()].sort((a, b) => a - b);
  const groups: BarGroup[] = orderedSteps.map((step) => ({
    x: String(step),
    bars: byStep.get(step)!.map((value, bin) => ({
      label: binLabel(bin),
      color: PALETTE[bin % PALETTE.length]!,
      value,
    })),
  }));

  const svg = buildBarChart({
    title: "Accuracy by answer-frequency bin",
    xLabel: "step",
    yLabel: "accuracy within bin",
    groups,
    legend: CANONICAL_BINS.map((_, bin) => ({ label: binLabel(bin), color: PALETTE[bin % PALETTE.length]! })),
  });
  return { svg, cells };
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

export function main(argv: string[]): void {
  const args = parsePlotArgs(argv, "plot_freq_bins.ts");
  if (args.inputs.length !== 1 || args.inputs[0]!.length !== 1) {
    throw new Error("plot_freq_bins.ts takes exactly one --in with a single freq_bins.csv path");
  }
  const figure = buildFreqBinsFigure(args.inputs[0]![0]!);
  mkdirSync(dirname(args.out), { recursive: true });
  writeFileSync(args.out, figure.svg);
  console.log(`wrote ${args.out} (${figure.cells.length} bars)`);
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error("Fatal:", err instanceof Error ? err.message : err);
    process.exit(1);
  }
}
