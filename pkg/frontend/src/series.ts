/**
 * Loading step-indexed curves from run CSVs.  A group of several files
 * (one per seed) collapses to a mean curve plus min-max envelope; that
 * is the only statistic computed on this side of the pipeline.
 */

import { fractionColumn, numericColumn, readTable, requireColumns } from "./csv.js";

export interface CurveGroup {
  label: string;
  steps: number[];
  values: number[];
  /** Present only when the group holds more than one file. */
  lower?: number[];
  upper?: number[];
}

export function loadCurveGroups(
  inputs: string[][],
  labels: string[],
  required: string[],
  valueColumn: string,
  fractionColumns: string[],
): CurveGroup[] {
  return inputs.map((paths, gi) => {
    const perFile: number[][] = [];
    let steps: number[] | undefined;
    let firstPath = "";

    for (const path of paths) {
      const table = readTable(path);
      requireColumns(table, required);
      for (const column of fractionColumns) fractionColumn(table, column);

      const fileSteps = numericColumn(table, "step");
      if (steps === undefined) {
        steps = fileSteps;
        firstPath = path;
      } else if (fileSteps.length !== steps.length || fileSteps.some((s, i) => s !== steps![i])) {
        throw new Error(`${path}: step column differs from ${firstPath}; files in one --in group must cover the same steps`);
      }
      perFile.push(numericColumn(table, valueColumn));
    }

    const n = perFile.length;
    const at = (i: number) => perFile.map((vs) => vs[i]!);
    const values = steps!.map((_, i) => at(i).reduce((a, b) => a + b, 0) / n);
    const group: CurveGroup = { label: labels[gi]!, steps: steps!, values };
    if (n > 1) {
      group.lower = steps!.map((_, i) => Math.min(...at(i)));
      group.upper = steps!.map((_, i) => Math.max(...at(i)));
    }
    return group;
  });
}
