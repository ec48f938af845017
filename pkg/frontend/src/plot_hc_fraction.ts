// High-confidence fraction over training steps, from hc_fraction.csv
// files.  Both modal_freq and high_confidence must be fractions in
// [0, 1]; a comma-joined --in group renders as mean plus min-max band.
//
//   tsx src/plot_hc_fraction.ts --in mv/s0000.csv,mv/s0001.csv --label MV \
//       --in sfr/s0000.csv,sfr/s0001.csv --label SFR --out hc.svg

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";

import { PALETTE, parsePlotArgs } from "./args.js";
import { CurveGroup, loadCurveGroups } from "./series.js";
import { BandSeries, buildLineChart, LineSeries } from "./svg.js";

// ---------------------------------------------------------------------------
// Figure assembly
// ---------------------------------------------------------------------------

export interface Figure {
  svg: string;
  series: CurveGroup[];
}

export function buildHcFigure(inputs: string[][], labels: string[]): Figure {
  const groups = loadCurveGroups(
    inputs,
    labels,
    ["step", "modal_freq", "high_confidence"],
    "high_confidence",
    ["modal_freq", "high_confidence"],
  );

  const series: LineSeries[] = groups.map((g, i) => ({
    label: g.label,
    color: PALETTE[i % PALETTE.length]!,
    points: g.steps.map((x, j) => ({ x, y: g.values[j]! })),
  }));
  const bands: BandSeries[] = [];
  groups.forEach((g, i) => {
    if (g.lower === undefined || g.upper === undefined) return;
    bands.push({
      label: g.label,
      color: PALETTE[i % PALETTE.length]!,
      lower: g.steps.map((x, j) => ({ x, y: g.lower![j]! })),
      upper: g.steps.map((x, j) => ({ x, y: g.upper![j]! })),
    });
  });

  const svg = buildLineChart({
    title: "High-confidence fraction over steps",
    xLabel: "step",
    yLabel: "fraction with modal freq >= 0.8",
    series,
    bands,
    yMin: 0,
    yMax: 1.02,
  });
  return { svg, series: groups };
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

export function main(argv: string[]): void {
  const args = parsePlotArgs(argv, "plot_hc_fraction.ts");
  const figure = buildHcFigure(args.inputs, args.labels);
  mkdirSync(dirname(args.out), { recursive: true });
  writeFileSync(args.out, figure.svg);
  console.log(`wrote ${args.out} (${figure.series.length} series)`);
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error("Fatal:", err instanceof Error ? err.message : err);
    process.exit(1);
  }
}
