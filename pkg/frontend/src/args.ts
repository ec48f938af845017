import { basename } from "node:path";

export interface PlotArgs {
  /** One entry per --in flag; comma-separated paths in a flag form a band group. */
  inputs: string[][];
  labels: string[];
  out: string;
}

export function parsePlotArgs(argv: string[], script: string): PlotArgs {
  const usage = `usage: ${script} --in CSV[,CSV...] [--in ...] [--label TEXT ...] --out FILE`;
  const inputs: string[][] = [];
  const labels: string[] = [];
  let out: string | undefined;

  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (flag === "--in" || flag === "--label" || flag === "--out") {
      if (value === undefined) throw new Error(`${flag} needs a value\n${usage}`);
      i++;
      if (flag === "--in") {
        const paths = value.split(",").map((p) => p.trim()).filter((p) => p.length > 0);
        if (paths.length === 0) throw new Error(`--in got an empty path list\n${usage}`);
        inputs.push(paths);
      } else if (flag === "--label") {
        labels.push(value);
      } else {
        out = value;
      }
    } else {
      throw new Error(`unknown argument: ${flag}\n${usage}`);
    }
  }

  if (inputs.length === 0) throw new Error(`at least one --in is required\n${usage}`);
  if (out === undefined) throw new Error(`--out is required\n${usage}`);
  if (labels.length > inputs.length) {
    throw new Error(`${labels.length} labels for ${inputs.length} inputs\n${usage}`);
  }
  while (labels.length < inputs.length) {
    const group = inputs[labels.length]!;
    labels.push(basename(group[0]!).replace(/\.csv$/i, ""));
  }
  return { inputs, labels, out };
}

export const PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
