import { existsSync, readFileSync, writeFileSync } from "fs";
import { join } from "path";
import { describe, expect, it, vi } from "vitest";

import { main, renderFromFiles } from "../src/cli.js";
import { tempDir, writeRunCsv, writeSummaryCsv } from "./fixtures.js";

describe("cli", () => {
  it("renders both figures end to end from a glob", () => {
    const dir = tempDir();
    for (let i = 0; i < 3; i++) {
      writeRunCsv(join(dir, `run_${String(i).padStart(3, "0")}.csv`),
        { tiltErr: (t) => (1 + 0.2 * i) * Math.exp(-t), attErr: (t) => Math.exp(-t) });
    }
    writeSummaryCsv(join(dir, "summary.csv"));
    const tiltOut = join(dir, "tilt.svg");
    const attOut = join(dir, "attitude.svg");
    expect(renderFromFiles("tilt", join(dir, "run_*.csv"), join(dir, "summary.csv"),
      tiltOut)).toBe(0);
    expect(renderFromFiles("attitude", join(dir, "run_*.csv"), join(dir, "summary.csv"),
      attOut)).toBe(0);
    for (const out of [tiltOut, attOut]) {
      expect(existsSync(out)).toBe(true);
      const svg = readFileSync(out, "utf8");
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("</svg>");
    }
  });

  it("fails with a diagnostic when no runs match", () => {
    const dir = tempDir();
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const rc = renderFromFiles("tilt", join(dir, "run_*.csv"), undefined,
      join(dir, "o.svg"));
    expect(rc).toBe(2);
    expect(err.mock.calls.flat().join(" ")).toContain("no run CSVs match");
    err.mockRestore();
  });

  it("rejects non-svg output targets", () => {
    const dir = tempDir();
    writeRunCsv(join(dir, "run_000.csv"));
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const rc = renderFromFiles("tilt", join(dir, "run_*.csv"), undefined,
      join(dir, "o.png"));
    expect(rc).toBe(2);
    err.mockRestore();
  });

  it("reports schema problems with the offending columns", async () => {
    const dir = tempDir();
    writeFileSync(join(dir, "run_000.csv"), "t,h\n0,1\n", "utf8");
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const rc = await main(["tilt", "--runs", join(dir, "run_*.csv"),
      "--out", join(dir, "o.svg")]);
    expect(rc).toBe(1);
    expect(err.mock.calls.flat().join(" ")).toContain("missing required columns");
    err.mockRestore();
  });
});
