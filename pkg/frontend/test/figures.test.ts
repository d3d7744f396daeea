import { join } from "path";
import { describe, expect, it } from "vitest";

import { readRunCsv, readSummaryCsv } from "../src/csv.js";
import { buildAttitudeFigure, buildTiltFigure } from "../src/figures.js";
import { tempDir, writeRunCsv, writeSummaryCsv } from "./fixtures.js";

function panelContent(svg: string, label: string): string {
  const start = svg.indexOf(`<g data-panel="${label}">`);
  expect(start).toBeGreaterThanOrEqual(0);
  const end = svg.indexOf("</g>", start);
  return svg.slice(start, end);
}

function polylineYs(panel: string): number[] {
  const ys: number[] = [];
  for (const m of panel.matchAll(/points="([^"]+)"/g)) {
    for (const pair of m[1].split(" ")) {
      ys.push(Number(pair.split(",")[1]));
    }
  }
  return ys;
}

function makeRuns(dir: string, specs: Parameters<typeof writeRunCsv>[1][]): string[] {
  return specs.map((opts, i) => {
    const p = join(dir, `run_${String(i).padStart(3, "0")}.csv`);
    writeRunCsv(p, opts);
    return p;
  });
}

describe("tilt figure", () => {
  it("renders a flat zero error panel for an equilibrium run", () => {
    const dir = tempDir();
    const [p] = makeRuns(dir, [{}]);
    const svg = buildTiltFigure([readRunCsv(p)], null);
    const ys = polylineYs(panelContent(svg, "|zhat - z|"));
    expect(ys.length).toBeGreaterThan(10);
    expect(new Set(ys).size).toBe(1);
  });

  it("draws a quantile band and median for multi-run input", () => {
    const dir = tempDir();
    const paths = makeRuns(dir, [
      { tiltErr: (t) => Math.exp(-t) },
      { tiltErr: (t) => 0.5 * Math.exp(-t) },
      { tiltErr: (t) => 1.5 * Math.exp(-t) },
    ]);
    const summaryPath = join(dir, "summary.csv");
    writeSummaryCsv(summaryPath);
    const svg = buildTiltFigure(paths.map(readRunCsv), readSummaryCsv(summaryPath));
    const err = panelContent(svg, "|zhat - z|");
    expect(err).toContain("fill-opacity");
    expect((err.match(/<polyline/g) ?? []).length).toBe(4); // 3 runs + median
  });

  it("omits the band for single-run input even when a summary is given", () => {
    const dir = tempDir();
    const [p] = makeRuns(dir, [{ tiltErr: (t) => Math.exp(-t) }]);
    const summaryPath = join(dir, "summary.csv");
    writeSummaryCsv(summaryPath);
    const svg = buildTiltFigure([readRunCsv(p)], readSummaryCsv(summaryPath));
    const err = panelContent(svg, "|zhat - z|");
    expect(err).not.toContain("fill-opacity");
    expect((err.match(/<polyline/g) ?? []).length).toBe(1);
  });

  it("is deterministic for identical inputs", () => {
    const dir = tempDir();
    const [p] = makeRuns(dir, [{ tiltErr: (t) => Math.exp(-t) }]);
    const a = buildTiltFigure([readRunCsv(p)], null);
    const b = buildTiltFigure([readRunCsv(p)], null);
    expect(a).toBe(b);
  });
});

describe("attitude figure", () => {
  it("renders euler panels in degrees", () => {
    const dir = tempDir();
    const [p] = makeRuns(dir, [{}]);
    const table = readRunCsv(p);
    const svg = buildAttitudeFigure([table], null);
    expect(svg).toContain('data-panel="roll [deg]"');
    expect(svg).toContain('data-panel="yaw [deg]"');
    // yaw ramps to 0.2 * 5 rad = 57.3 deg; in radians the ticks would top
    // out near 1, in degrees they reach tens
    const yaw = panelContent(svg, "yaw [deg]");
    const tickLabels = [...yaw.matchAll(/>([-\d.e+]+)<\/text>/g)].map((m) => Number(m[1]));
    expect(Math.max(...tickLabels)).toBeGreaterThan(10);
  });

  it("keeps a flat error panel for an exact-estimate run", () => {
    const dir = tempDir();
    const [p] = makeRuns(dir, [{}]);
    const svg = buildAttitudeFigure([readRunCsv(p)], null);
    const ys = polylineYs(panelContent(svg, "tr(I - R Rhat')"));
    expect(new Set(ys).size).toBe(1);
  });

  it("decaying error band collapses toward zero by the end of the run", () => {
    const dir = tempDir();
    const paths = makeRuns(dir, [
      { attErr: (t) => Math.exp(-t) },
      { attErr: (t) => 0.8 * Math.exp(-t) },
    ]);
    const summaryPath = join(dir, "summary.csv");
    writeSummaryCsv(summaryPath);
    const svg = buildAttitudeFigure(paths.map(readRunCsv), readSummaryCsv(summaryPath));
    const err = panelContent(svg, "tr(I - R Rhat')");
    expect(err).toContain("fill-opacity"); // band present
    // the median trace decays toward zero, i.e. toward the panel bottom
    // (larger y pixel), between its first and last point
    const median = /stroke="#1f4e8c"[^/]*points="([^"]+)"/.exec(err);
    expect(median).not.toBeNull();
    const pts = median![1].split(" ").map((p) => Number(p.split(",")[1]));
    expect(pts[pts.length - 1]).toBeGreaterThan(pts[0]);
  });
});
