import { readFileSync } from "fs";

export type Table = Record<string, Float64Array>;

export const RUN_COLUMNS = [
  "t", "h", "hdot", "h_hat", "hdot_hat",
  "z1", "z2", "z3", "zhat1", "zhat2", "zhat3",
  "roll", "pitch", "yaw", "roll_hat", "pitch_hat", "yaw_hat",
  "tilt_err", "att_err",
] as const;

export const SUMMARY_COLUMNS = [
  "t", "tilt_q05", "tilt_q50", "tilt_q95", "att_q05", "att_q50", "att_q95",
] as const;

export class SchemaError extends Error {}

/** Parse a comma-separated file of named float columns. */
export function parseCsv(path: string, required: readonly string[]): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError(`${path}: expected a header row and at least one data row`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const missing = required.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${path}: missing required columns: ${missing.join(", ")}`);
  }
  const nRows = lines.length - 1;
  const table: Table = {};
  for (const name of header) table[name] = new Float64Array(nRows);
  for (let i = 0; i < nRows; i++) {
    const cells = lines[i + 1].split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${cells.length} cells, expected ${header.length}`,
      );
    }
    for (let j = 0; j < header.length; j++) {
      const v = Number(cells[j]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: row ${i + 2}, column ${header[j]}: not a finite number`);
      }
      table[header[j]][i] = v;
    }
  }
  return table;
}

export function readRunCsv(path: string): Table {
  return parseCsv(path, RUN_COLUMNS);
}

export function readSummaryCsv(path: string): Table {
  return parseCsv(path, SUMMARY_COLUMNS);
}
