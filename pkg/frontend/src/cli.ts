#!/usr/bin/env node
import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { SchemaError, readRunCsv, readSummaryCsv, Table } from "./csv.js";
import { buildAttitudeFigure, buildTiltFigure } from "./figures.js";
import { expandGlob } from "./glob.js";

export function renderFromFiles(figure: "tilt" | "attitude", runsGlob: string,
                                summaryPath: string | undefined, outPath: string): number {
  if (!outPath.endsWith(".svg")) {
    console.error(`unsupported output format for ${outPath}: this tool emits SVG`);
    return 2;
  }
  const runFiles = expandGlob(runsGlob);
  if (runFiles.length === 0) {
    console.error(`no run CSVs match ${runsGlob}`);
    return 2;
  }
  const runs: Table[] = runFiles.map(readRunCsv);
  const summary = summaryPath ? readSummaryCsv(summaryPath) : null;
  const svg = figure === "tilt" ? buildTiltFigure(runs, summary)
    : buildAttitudeFigure(runs, summary);
  writeFileSync(outPath, svg, "utf8");
  console.log(`${figure} figure (${runFiles.length} runs) written to ${outPath}`);
  return 0;
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .command("$0 <figure>", "render a campaign figure from CSV exports", (y) =>
      y.positional("figure", {
        describe: "which figure to render",
        choices: ["tilt", "attitude"] as const,
        demandOption: true,
      }))
    .option("runs", { type: "string", demandOption: true, describe: "glob of run CSVs" })
    .option("summary", { type: "string", describe: "summary CSV with quantile envelopes" })
    .option("out", { type: "string", demandOption: true, describe: "output .svg path" })
    .strict()
    .parse();

  try {
    return renderFromFiles(args.figure as "tilt" | "attitude", args.runs,
                           args.summary, args.out);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1] && import.meta.url.endsWith(
  process.argv[1].split("/").pop() ?? "",
);
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
