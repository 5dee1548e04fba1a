import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildChart, ChartError } from "../src/chart.js";
import { parseSweepCsv, SchemaError } from "../src/csv.js";
import { renderPng } from "../src/png.js";
import { renderSvg } from "../src/svg.js";
import { PLOT_KINDS, PlotKind } from "../src/types.js";

const HEADER =
  "family,n_qubits,strategy,axis,axis_value,gate_eps,coherence_eps," +
  "total_eps,mean_fidelity,std_error,n_states,duration_ns,swap_count,seed,error";

function sizeRow(
  strategy: string, size: number, qubits: number, fidelity: number,
  err = 0.01, errorText = "",
): string {
  return (
    `cnu,${qubits},${strategy},circuit_size,${size},0.9,0.9,0.81,` +
    `${fidelity},${err},200,5000,2,1,${errorText}`
  );
}

function sizeCsv(): string {
  const rows = [HEADER];
  for (const [i, size] of [3, 4, 5].entries()) {
    rows.push(sizeRow("qubit-only-8cx", size, 2 * size - 1, 0.7 - 0.1 * i));
    rows.push(sizeRow("mixed-radix-ccz", size, 2 * size - 1, 0.85 - 0.05 * i));
    rows.push(sizeRow("full-ququart-ccz", size, 2 * size - 1, 0.95 - 0.03 * i));
  }
  return rows.join("\n") + "\n";
}

function axisCsv(axis: string): string {
  const rows = [HEADER];
  for (const v of [1, 2, 4]) {
    rows.push(
      `cuccaro,8,full-ququart-ccz,${axis},${v},0.9,0.9,0.81,` +
        `${0.9 / v},0.02,200,7000,3,1,`,
    );
  }
  return rows.join("\n") + "\n";
}

describe("csv parsing", () => {
  it("round-trips the sweep schema", () => {
    const rows = parseSweepCsv(sizeCsv());
    expect(rows).toHaveLength(9);
    expect(rows[0].strategy).toBe("qubit-only-8cx");
    expect(rows[0].mean_fidelity).toBeCloseTo(0.7);
  });

  it("reports missing columns by name", () => {
    const broken = "family,strategy\ncnu,qubit-only-8cx\n";
    expect(() => parseSweepCsv(broken)).toThrowError(/missing columns:.*axis/);
  });

  it("keeps error rows with empty numeric fields", () => {
    const csv =
      HEADER + "\ncnu,0,qubit-only-8cx,circuit_size,1,,,,,,0,,,1,boom\n";
    const rows = parseSweepCsv(csv);
    expect(rows[0].error).toBe("boom");
    expect(rows[0].mean_fidelity).toBeNull();
  });
});

describe("chart building", () => {
  it("groups size lines by strategy", () => {
    const model = buildChart("size_lines", parseSweepCsv(sizeCsv()));
    expect(model.series.map((s) => s.name).sort()).toEqual([
      "full-ququart-ccz", "mixed-radix-ccz", "qubit-only-8cx",
    ]);
    expect(model.series[0].points).toHaveLength(3);
    expect(model.series[0].points.map((p) => p.x)).toEqual([5, 7, 9]);
  });

  it("baseline against itself gives the constant one line", () => {
    const model = buildChart("improvement_ratio", parseSweepCsv(sizeCsv()));
    const baseline = model.series.find((s) => s.name === "qubit-only-8cx")!;
    for (const point of baseline.points) {
      expect(point.y).toBeCloseTo(1.0, 12);
    }
    const full = model.series.find((s) => s.name === "full-ququart-ccz")!;
    expect(full.points.every((p) => p.y > 1)).toBe(true);
  });

  it("skips and counts error rows", () => {
    const rows = parseSweepCsv(
      sizeCsv() + sizeRow("qubit-only-8cx", 6, 11, 0, 0, "CapacityError: no"),
    );
    const model = buildChart("size_lines", rows);
    expect(model.skippedRows).toBe(1);
    const baseline = model.series.find((s) => s.name === "qubit-only-8cx")!;
    expect(baseline.points).toHaveLength(3);
  });

  it("sweep kinds select rows by axis", () => {
    const model = buildChart(
      "gate_error_sweep",
      parseSweepCsv(axisCsv("ququart_gate_error_multiplier")),
    );
    expect(model.series).toHaveLength(1);
    expect(model.series[0].points.map((p) => p.x)).toEqual([1, 2, 4]);
    expect(() =>
      buildChart("coherence_sweep", parseSweepCsv(sizeCsv())),
    ).toThrowError(ChartError);
  });

  it("single-row csv still renders", () => {
    const csv = HEADER + "\n" + sizeRow("qubit-only-8cx", 3, 5, 0.8);
    const model = buildChart("size_lines", parseSweepCsv(csv));
    const svg = renderSvg(model);
    expect(svg).toContain("<svg");
  });
});

describe("image output", () => {
  it("svg contains every series", () => {
    const svg = renderSvg(buildChart("size_lines", parseSweepCsv(sizeCsv())));
    expect(svg).toContain("full-ququart-ccz");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("svg output is deterministic", () => {
    const rows = parseSweepCsv(sizeCsv());
    const a = renderSvg(buildChart("size_lines", rows));
    const b = renderSvg(buildChart("size_lines", rows));
    expect(a).toBe(b);
  });

  it("png carries a valid signature and IHDR", () => {
    const png = renderPng(buildChart("size_lines", parseSweepCsv(sizeCsv())));
    expect([...png.subarray(0, 8)]).toEqual([
      0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a,
    ]);
    expect(png.subarray(12, 16).toString("ascii")).toBe("IHDR");
    expect(png.readUInt32BE(16)).toBe(800);
    expect(png.readUInt32BE(20)).toBe(520);
    expect(png.subarray(png.length - 8, png.length - 4).toString("ascii"))
      .toBe("IEND");
  });
});

describe("cli entry point", () => {
  it("renders every figure kind from fixture CSVs and exits 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const fixtures: Record<PlotKind, string> = {
      size_lines: sizeCsv(),
      improvement_ratio: sizeCsv(),
      gate_error_sweep: axisCsv("ququart_gate_error_multiplier"),
      coherence_sweep: axisCsv("coherence_multiplier"),
      cx_ratio_sweep: axisCsv("cx_fraction"),
    };
    for (const kind of PLOT_KINDS) {
      const input = join(dir, `${kind}.csv`);
      writeFileSync(input, fixtures[kind]);
      for (const ext of ["svg", "png"]) {
        const output = join(dir, `${kind}.${ext}`);
        execFileSync("node", ["dist/main.js", input, kind, output], {
          cwd: join(__dirname, ".."),
        });
        expect(existsSync(output)).toBe(true);
        expect(readFileSync(output).length).toBeGreaterThan(100);
      }
    }
  });

  it("rejects unknown kinds with exit 2", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const input = join(dir, "x.csv");
    writeFileSync(input, sizeCsv());
    let code = 0;
    try {
      execFileSync("node", ["dist/main.js", input, "volcano", "out.svg"], {
        cwd: join(__dirname, ".."),
      });
    } catch (err: any) {
      code = err.status;
    }
    expect(code).toBe(2);
  });

  it("schema mismatch exits non-zero naming the columns", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const input = join(dir, "bad.csv");
    writeFileSync(input, "family,strategy\ncnu,qubit-only-8cx\n");
    let failed = false;
    try {
      execFileSync(
        "node", ["dist/main.js", input, "size_lines", join(dir, "o.svg")],
        { cwd: join(__dirname, "..") },
      );
    } catch (err: any) {
      failed = true;
      expect(String(err.stderr)).toContain("missing columns");
    }
    expect(failed).toBe(true);
  });
});
