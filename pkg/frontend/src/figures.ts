import type { Table } from "./csv.js";
import { Band, PanelSpec, Trace, renderFigure, runColor } from "./svg.js";

const TRUTH_STYLE = { stroke: "#111111", width: 1.6 };
const MEDIAN_STYLE = { stroke: "#1f4e8c", width: 1.6 };
const RUN_OPACITY = 0.55;

const RAD2DEG = 180 / Math.PI;

function toDegrees(a: Float64Array): Float64Array {
  const out = new Float64Array(a.length);
  for (let i = 0; i < a.length; i++) out[i] = a[i] * RAD2DEG;
  return out;
}

function overlayPanel(runs: Table[], truthCol: string, estCol: string, ylabel: string,
                      transform?: (a: Float64Array) => Float64Array): PanelSpec {
  const id = (a: Float64Array) => a;
  const f = transform ?? id;
  const traces: Trace[] = runs.map((r, i) => ({
    x: r.t,
    y: f(r[estCol]),
    stroke: runColor(i, runs.length),
    width: 0.8,
    opacity: RUN_OPACITY,
  }));
  // all runs share the truth series; draw it once, on top
  traces.push({ x: runs[0].t, y: f(runs[0][truthCol]), ...TRUTH_STYLE });
  return { ylabel, traces };
}

function errorPanel(runs: Table[], errCol: string, ylabel: string,
                    summary: Table | null, qPrefix: string): PanelSpec {
  const traces: Trace[] = runs.map((r, i) => ({
    x: r.t,
    y: r[errCol],
    stroke: runColor(i, runs.length),
    width: 0.8,
    opacity: RUN_OPACITY,
  }));
  const bands: Band[] = [];
  // quantile band only makes sense across several runs
  if (summary !== null && runs.length > 1) {
    bands.push({
      x: summary.t,
      lo: summary[`${qPrefix}_q05`],
      hi: summary[`${qPrefix}_q95`],
      fill: "#4a90d9",
      opacity: 0.3,
    });
    traces.push({ x: summary.t, y: summary[`${qPrefix}_q50`], ...MEDIAN_STYLE });
  }
  return { ylabel, traces, bands };
}

function xDomain(runs: Table[]): [number, number] {
  const t = runs[0].t;
  return [t[0], t[t.length - 1]];
}

/** Tilt components (truth vs estimates) plus the tilt-error envelope. */
export function buildTiltFigure(runs: Table[], summary: Table | null): string {
  if (runs.length === 0) throw new Error("no run data given");
  const panels: PanelSpec[] = [
    overlayPanel(runs, "z1", "zhat1", "z1"),
    overlayPanel(runs, "z2", "zhat2", "z2"),
    overlayPanel(runs, "z3", "zhat3", "z3"),
    errorPanel(runs, "tilt_err", "|zhat - z|", summary, "tilt"),
  ];
  return renderFigure("Tilt components and tilt error", "time [s]", xDomain(runs), panels);
}

/** Euler angles in degrees (truth vs estimates) plus the attitude-error envelope. */
export function buildAttitudeFigure(runs: Table[], summary: Table | null): string {
  if (runs.length === 0) throw new Error("no run data given");
  const panels: PanelSpec[] = [
    overlayPanel(runs, "roll", "roll_hat", "roll [deg]", toDegrees),
    overlayPanel(runs, "pitch", "pitch_hat", "pitch [deg]", toDegrees),
    overlayPanel(runs, "yaw", "yaw_hat", "yaw [deg]", toDegrees),
    errorPanel(runs, "att_err", "tr(I - R Rhat')", summary, "att"),
  ];
  return renderFigure("Euler angles and attitude error", "time [s]", xDomain(runs), panels);
}
