#!/usr/bin/env node
/**
 * Render a paper-style figure from a sweep CSV.
 *
 * Usage: node dist/main.js <sweep.csv> <kind> <output.(svg|png)>
 * Kinds: size_lines, improvement_ratio, gate_error_sweep, coherence_sweep,
 *        cx_ratio_sweep
 */

import { readFileSync, writeFileSync } from "node:fs";
import { buildChart, ChartError } from "./chart.js";
import { parseSweepCsv, SchemaError } from "./csv.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";
import { PLOT_KINDS, PlotKind } from "./types.js";

export function render(inputPath: string, kind: PlotKind, outputPath: string): number {
  const rows = parseSweepCsv(readFileSync(inputPath, "utf-8"));
  const model = buildChart(kind, rows);
  if (model.skippedRows > 0) {
    console.error(`skipped ${model.skippedRows} rows with an error column`);
  }
  if (outputPath.endsWith(".png")) {
    writeFileSync(outputPath, renderPng(model));
  } else if (outputPath.endsWith(".svg")) {
    writeFileSync(outputPath, renderSvg(model), "utf-8");
  } else {
    console.error(`unsupported output extension on ${outputPath}`);
    return 2;
  }
  console.log(`wrote ${outputPath}`);
  return 0;
}

function main(argv: string[]): number {
  if (argv.length !== 3) {
    console.error(
      "usage: main.js <sweep.csv> <kind> <output.(svg|png)>\n" +
        `kinds: ${PLOT_KINDS.join(", ")}`,
    );
    return 2;
  }
  const [input, kind, output] = argv;
  if (!(PLOT_KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown figure kind ${kind}`);
    return 2;
  }
  try {
    return render(input, kind as PlotKind, output);
  } catch (err) {
    if (err instanceof SchemaError || err instanceof ChartError) {
      console.error(String(err.message));
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
