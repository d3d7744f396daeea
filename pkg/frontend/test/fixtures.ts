import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { RUN_COLUMNS, SUMMARY_COLUMNS } from "../src/csv.js";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "baroatt-plots-"));
}

export interface RunOptions {
  n?: number;
  tiltErr?: (t: number) => number;
  attErr?: (t: number) => number;
}

/** Write a schema-complete run CSV with synthetic but consistent series. */
export function writeRunCsv(path: string, opts: RunOptions = {}): void {
  const n = opts.n ?? 101;
  const tiltErr = opts.tiltErr ?? (() => 0);
  const attErr = opts.attErr ?? (() => 0);
  const lines = [RUN_COLUMNS.join(",")];
  for (let i = 0; i < n; i++) {
    const t = i * 0.05;
    const z = [Math.sin(t) * 0.1, Math.cos(t) * 0.1, Math.sqrt(1 - 0.01)];
    const te = tiltErr(t);
    const row: Record<string, number> = {
      t,
      h: Math.sin(2 * t),
      hdot: 2 * Math.cos(2 * t),
      h_hat: Math.sin(2 * t) + te,
      hdot_hat: 2 * Math.cos(2 * t),
      z1: z[0], z2: z[1], z3: z[2],
      zhat1: z[0] + te, zhat2: z[1], zhat3: z[2],
      roll: 0.1 * Math.sin(t), pitch: 0.05 * Math.cos(t), yaw: 0.2 * t,
      roll_hat: 0.1 * Math.sin(t) + attErr(t),
      pitch_hat: 0.05 * Math.cos(t),
      yaw_hat: 0.2 * t,
      tilt_err: Math.abs(te),
      att_err: Math.abs(attErr(t)),
    };
    lines.push(RUN_COLUMNS.map((c) => row[c].toString()).join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf8");
}

export function writeSummaryCsv(path: string, n = 101): void {
  const lines = [SUMMARY_COLUMNS.join(",")];
  for (let i = 0; i < n; i++) {
    const t = i * 0.05;
    const decay = Math.exp(-t);
    lines.push([t, 0.5 * decay, decay, 1.5 * decay, 0.4 * decay, 0.8 * decay,
      1.2 * decay].join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf8");
}
