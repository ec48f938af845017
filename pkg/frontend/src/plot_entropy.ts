// Entropy decay over training steps, one curve per run (or per seed
// group).  Reads summary.csv files produced by the simulate and
// dynamics subcommands.
//
//   tsx src/plot_entropy.ts --in mv/summary.csv --label MV \
//       --in sfr/summary.csv --label SFR --out entropy.svg

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

export function buildEntropyFigure(inputs: string[][], labels: string[]): Figure {
  const groups = loadCurveGroups(inputs, labels, ["step", "entropy"], "entropy", []);

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
    title: "Policy entropy over steps",
    xLabel: "step",
    yLabel: "entropy (nats)",
    series,
    bands,
    yMin: 0,
  });
  return { svg, series: groups };
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

export function main(argv: string[]): void {
  const args = parsePlotArgs(argv, "plot_entropy.ts");
  const figure = buildEntropyFigure(args.inputs, args.labels);
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
