/**
 * Minimal CSV reading for softretrace run outputs.
 *
 * The upstream writer never quotes: every column we consume is numeric
 * or a bare label, so a plain comma split is exact.  It terminates
 * lines with CRLF, so both endings are accepted here.
 */

import { readFileSync } from "fs";

export interface Table {
  path: string;
  header: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string, path: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0]!.split(",");
  const rows = lines.slice(1).map((line) => {
    const cells = line.split(",");
    const row: Record<string, string> = {};
    header.forEach((col, i) => {
      row[col] = cells[i] ?? "";
    });
    return row;
  });
  return { path, header, rows };
}

/** Read and parse; a header-only file is an error before anything is written. */
export function readTable(path: string): Table {
  const table = parseCsv(readFileSync(path, "utf-8"), path);
  if (table.rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return table;
}

export function requireColumns(table: Table, columns: string[]): void {
  for (const col of columns) {
    if (!table.header.includes(col)) {
      throw new Error(`${table.path}: missing required column "${col}"`);
    }
  }
}

/** Column as floats; blank cells and garbage fail loudly. */
export function numericColumn(table: Table, column: string): number[] {
  requireColumns(table, [column]);
  return table.rows.map((row, i) => {
    const raw = row[column] ?? "";
    const value = Number(raw);
    if (raw === "" || Number.isNaN(value)) {
      throw new Error(`${table.path}: row ${i + 2} column "${column}" is not numeric (${JSON.stringify(raw)})`);
    }
    return value;
  });
}

export function fractionColumn(table: Table, column: string): number[] {
  const values = numericColumn(table, column);
  values.forEach((v, i) => {
    if (v < 0 || v > 1) {
      throw new Error(`${table.path}: row ${i + 2} column "${column}" = ${v} is outside [0, 1]`);
    }
  });
  return values;
}
