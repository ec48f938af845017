import { existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { parsePlotArgs } from "../src/args.js";
import { buildEntropyFigure, main as entropyMain } from "../src/plot_entropy.js";
import { buildFreqBinsFigure, main as freqBinsMain } from "../src/plot_freq_bins.js";
import { buildHcFigure, main as hcMain } from "../src/plot_hc_fraction.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const PAIRED = join(FIXTURES, "paired");
const BATCH = join(FIXTURES, "batch");

const MV_SUMMARY = join(PAIRED, "mv_summary.csv");
const SFR_SUMMARY = join(PAIRED, "sfr_summary.csv");
const MV_HC = join(PAIRED, "mv_hc.csv");
const SFR_HC = join(PAIRED, "sfr_hc.csv");
const MV_BINS = join(PAIRED, "mv_freq_bins.csv");

const SEEDS = ["s0000.csv", "s0001.csv", "s0002.csv", "s0003.csv", "s0004.csv", "s0005.csv"];
const MV_BATCH = SEEDS.map((f) => join(BATCH, "mv", f));
const SFR_BATCH = SEEDS.map((f) => join(BATCH, "sfr", f));

let tmp: string;

beforeEach(() => {
  tmp = mkdtempSync(join(tmpdir(), "plots-"));
});

afterEach(() => {
  rmSync(tmp, { recursive: true, force: true });
});

function countTag(svg: string, tag: string): number {
  return svg.split(`<${tag}`).length - 1;
}

function dataRows(path: string): number {
  return readFileSync(path, "utf8").split("\n").filter((l) => l.length > 0).length - 1;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

describe("parsePlotArgs", () => {
  it("splits comma groups and fills default labels from file names", () => {
    const args = parsePlotArgs(
      ["--in", "a/mv_summary.csv,a/extra.csv", "--in", "b/sfr_summary.csv", "--label", "MV", "--out", "fig.svg"],
      "x",
    );
    expect(args.inputs).toEqual([["a/mv_summary.csv", "a/extra.csv"], ["b/sfr_summary.csv"]]);
    expect(args.labels).toEqual(["MV", "sfr_summary"]);
    expect(args.out).toBe("fig.svg");
  });

  it("rejects unknown flags, a missing --out, and excess labels", () => {
    expect(() => parsePlotArgs(["--frob", "x"], "x")).toThrow(/unknown argument: --frob/);
    expect(() => parsePlotArgs(["--in", "a.csv"], "x")).toThrow(/--out is required/);
    expect(() => parsePlotArgs(["--out", "o.svg"], "x")).toThrow(/--in is required/);
    expect(() =>
      parsePlotArgs(["--in", "a.csv", "--label", "A", "--label", "B", "--out", "o.svg"], "x"),
    ).toThrow(/2 labels for 1 inputs/);
  });
});

// ---------------------------------------------------------------------------
// Entropy figure
// ---------------------------------------------------------------------------

describe("entropy figure", () => {
  it("acceptance: preset CSVs drive all three plots and SFR final entropy >= MV final entropy", () => {
    const entropyOut = join(tmp, "entropy.svg");
    const hcOut = join(tmp, "hc.svg");
    const binsOut = join(tmp, "bins.svg");
    entropyMain(["--in", MV_SUMMARY, "--label", "MV", "--in", SFR_SUMMARY, "--label", "SFR", "--out", entropyOut]);
    hcMain(["--in", MV_HC, "--label", "MV", "--in", SFR_HC, "--label", "SFR", "--out", hcOut]);
    freqBinsMain(["--in", MV_BINS, "--out", binsOut]);
    expect(existsSync(entropyOut)).toBe(true);
    expect(existsSync(hcOut)).toBe(true);
    expect(existsSync(binsOut)).toBe(true);

    const figure = buildEntropyFigure([[MV_SUMMARY], [SFR_SUMMARY]], ["MV", "SFR"]);
    const mvFinal = figure.series[0]!.values.at(-1)!;
    const sfrFinal = figure.series[1]!.values.at(-1)!;
    expect(sfrFinal).toBeGreaterThanOrEqual(mvFinal);
    console.log(`PASS plots acceptance: figures written, final entropy SFR ${sfrFinal.toFixed(6)} >= MV ${mvFinal.toFixed(6)}`);
  });

  it("renders a single input as a single curve", () => {
    const figure = buildEntropyFigure([[MV_SUMMARY]], ["MV"]);
    expect(figure.series).toHaveLength(1);
    expect(figure.series[0]!.lower).toBeUndefined();
    expect(countTag(figure.svg, "polyline")).toBe(1);
    expect(countTag(figure.svg, "polygon")).toBe(0);
  });

  it("names the file and the column when one is missing, and writes nothing", () => {
    const bad = join(tmp, "no_entropy.csv");
    writeFileSync(bad, "step,mode_mass\n1,0.5\n");
    const out = join(tmp, "fig.svg");
    expect(() => entropyMain(["--in", bad, "--out", out])).toThrow(
      new RegExp(`no_entropy\\.csv: missing required column "entropy"`),
    );
    expect(existsSync(out)).toBe(false);
  });

  it("rejects a header-only CSV before writing anything", () => {
    const empty = join(tmp, "empty.csv");
    writeFileSync(empty, "step,entropy\n");
    const out = join(tmp, "fig.svg");
    expect(() => entropyMain(["--in", empty, "--out", out])).toThrow(/empty\.csv: no data rows/);
    expect(existsSync(out)).toBe(false);
  });

  it("is deterministic for identical inputs", () => {
    const a = buildEntropyFigure([[MV_SUMMARY], [SFR_SUMMARY]], ["MV", "SFR"]);
    const b = buildEntropyFigure([[MV_SUMMARY], [SFR_SUMMARY]], ["MV", "SFR"]);
    expect(a.svg).toBe(b.svg);
  });
});

// ---------------------------------------------------------------------------
// High-confidence figure
// ---------------------------------------------------------------------------

describe("high-confidence figure", () => {
  it("draws two labeled curves for a paired run", () => {
    const figure = buildHcFigure([[MV_HC], [SFR_HC]], ["MV", "SFR"]);
    expect(figure.series.map((s) => s.label)).toEqual(["MV", "SFR"]);
    expect(countTag(figure.svg, "polyline")).toBe(2);
    expect(figure.svg).toContain(">MV</text>");
    expect(figure.svg).toContain(">SFR</text>");
  });

  it("bands a seed group with its min-max envelope around the mean", () => {
    const figure = buildHcFigure([MV_BATCH, SFR_BATCH], ["MV", "SFR"]);
    expect(countTag(figure.svg, "polygon")).toBe(2);
    for (const series of figure.series) {
      expect(series.lower).toBeDefined();
      expect(series.upper).toBeDefined();
      series.values.forEach((mean, i) => {
        expect(mean).toBeGreaterThanOrEqual(series.lower![i]! - 1e-12);
        expect(mean).toBeLessThanOrEqual(series.upper![i]! + 1e-12);
      });
    }
  });

  it("rejects fraction values outside [0, 1]", () => {
    const bad = join(tmp, "bad_hc.csv");
    writeFileSync(bad, "step,modal_freq,high_confidence\n1,0.5,0.2\n2,0.6,1.2\n");
    expect(() => buildHcFigure([[bad]], ["X"])).toThrow(/row 3 column "high_confidence" = 1\.2 is outside \[0, 1\]/);
  });

  it("rejects seed files whose step columns disagree", () => {
    const a = join(tmp, "a.csv");
    const b = join(tmp, "b.csv");
    writeFileSync(a, "step,modal_freq,high_confidence\n1,0.5,0.0\n2,0.5,0.0\n");
    writeFileSync(b, "step,modal_freq,high_confidence\n1,0.5,0.0\n3,0.5,0.0\n");
    expect(() => buildHcFigure([[a, b]], ["X"])).toThrow(/must cover the same steps/);
  });
});

// ---------------------------------------------------------------------------
// Frequency-bin figure
// ---------------------------------------------------------------------------

describe("frequency-bin figure", () => {
  it("draws one bar per CSV row, leaving absent bins as gaps", () => {
    const figure = buildFreqBinsFigure(MV_BINS);
    const rows = dataRows(MV_BINS);
    expect(figure.cells).toHaveLength(rows);
    // one background rect, one legend box, then exactly one rect per row
    expect(countTag(figure.svg, "rect")).toBe(rows + 2);
  });

  it("reads back increasing per-bin accuracy from a run where later steps dominate", () => {
    const path = join(tmp, "rising.csv");
    writeFileSync(
      path,
      "step,bin_low,bin_high,accuracy,count\n" +
        "1,0.0,0.2,0.1,3\n1,0.8,1.0,0.5,2\n" +
        "2,0.0,0.2,0.2,3\n2,0.8,1.0,0.7,2\n" +
        "3,0.0,0.2,0.3,3\n3,0.8,1.0,0.9,2\n",
    );
    const figure = buildFreqBinsFigure(path);
    expect(figure.cells).toHaveLength(6);
    expect(countTag(figure.svg, "rect")).toBe(8);
    for (const [lo, hi] of [[0.0, 0.2], [0.8, 1.0]]) {
      const accuracies = figure.cells
        .filter((c) => c.binLow === lo && c.binHigh === hi)
        .sort((a, b) => a.step - b.step)
        .map((c) => c.accuracy);
      expect(accuracies).toHaveLength(3);
      for (let i = 1; i < accuracies.length; i++) {
        expect(accuracies[i]!).toBeGreaterThan(accuracies[i - 1]!);
      }
    }
  });

  it("rejects a bin edge pair outside the canonical partition", () => {
    const path = join(tmp, "drift.csv");
    writeFileSync(path, "step,bin_low,bin_high,accuracy,count\n1,0.1,0.3,0.5,2\n");
    expect(() => buildFreqBinsFigure(path)).toThrow(/row 2 bin \(0\.1, 0\.3\] is not one of the five canonical frequency bins/);
  });

  it("rejects a repeated (step, bin) row", () => {
    const path = join(tmp, "dup.csv");
    writeFileSync(
      path,
      "step,bin_low,bin_high,accuracy,count\n1,0.0,0.2,0.5,2\n1,0.0,0.2,0.6,3\n",
    );
    expect(() => buildFreqBinsFigure(path)).toThrow(/row 3 repeats bin \(0\.0, 0\.2\] for step 1/);
  });

  it("rejects accuracy outside [0, 1]", () => {
    const path = join(tmp, "hot.csv");
    writeFileSync(path, "step,bin_low,bin_high,accuracy,count\n1,0.0,0.2,1.5,2\n");
    expect(() => buildFreqBinsFigure(path)).toThrow(/column "accuracy" = 1\.5 is outside \[0, 1\]/);
  });

  it("takes exactly one single-path --in", () => {
    expect(() => freqBinsMain(["--in", MV_BINS, "--in", MV_BINS, "--out", join(tmp, "o.svg")])).toThrow(
      /exactly one --in/,
    );
    expect(() => freqBinsMain(["--in", `${MV_BINS},${MV_BINS}`, "--out", join(tmp, "o.svg")])).toThrow(
      /exactly one --in/,
    );
  });
});
