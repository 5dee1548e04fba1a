import { ChartModel, PlotKind, Series, SweepRow } from "./types.js";

export class ChartError extends Error {}

// palette roughly matching the usual strategy colouring: qubit-only black,
// iToffoli red, mixed-radix blues/greens, full-ququart greys/pinks
const STRATEGY_COLORS: Record<string, string> = {
  "qubit-only-8cx": "#000000",
  "qubit-only-itoffoli": "#d62728",
  "mixed-radix-ccx": "#e377c2",
  "mixed-radix-retarget": "#17becf",
  "mixed-radix-ccz": "#2ca02c",
  "mixed-radix-cswap": "#bcbd22",
  "full-ququart-ccx": "#8c564b",
  "full-ququart-ccz": "#7f7f7f",
  "full-ququart-cswap": "#ff1493",
  "full-ququart-cswap-basic": "#1f77b4",
};

const FALLBACK_COLORS = ["#1f77b4", "#ff7f0e", "#9467bd", "#aec7e8", "#98df8a"];

const KIND_AXIS: Record<PlotKind, string> = {
  size_lines: "circuit_size",
  improvement_ratio: "circuit_size",
  gate_error_sweep: "ququart_gate_error_multiplier",
  coherence_sweep: "coherence_multiplier",
  cx_ratio_sweep: "cx_fraction",
};

const KIND_XLABEL: Record<PlotKind, string> = {
  size_lines: "number of qubits",
  improvement_ratio: "number of qubits",
  gate_error_sweep: "ququart gate error multiplier",
  coherence_sweep: "high-level coherence rate multiplier",
  cx_ratio_sweep: "cx fraction",
};

function colorFor(strategy: string, index: number): string {
  return STRATEGY_COLORS[strategy] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function groupByStrategy(rows: SweepRow[]): Map<string, SweepRow[]> {
  const groups = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.strategy) ?? [];
    bucket.push(row);
    groups.set(row.strategy, bucket);
  }
  return groups;
}

function xValue(kind: PlotKind, row: SweepRow): number {
  // size plots read qubit counts; sensitivity plots read the axis value
  return kind === "size_lines" || kind === "improvement_ratio"
    ? row.n_qubits
    : row.axis_value;
}

/** Build the chart model for one figure kind from validated sweep rows. */
export function buildChart(kind: PlotKind, rows: SweepRow[]): ChartModel {
  const expectedAxis = KIND_AXIS[kind];
  const skipped = rows.filter((r) => r.error !== "").length;
  const usable = rows.filter(
    (r) => r.error === "" && r.axis === expectedAxis && r.mean_fidelity !== null,
  );
  if (usable.length === 0) {
    throw new ChartError(
      `no usable rows with axis=${expectedAxis} and a mean_fidelity value`,
    );
  }
  const family = usable[0].family;
  const series: Series[] = [];

  if (kind === "improvement_ratio") {
    const groups = groupByStrategy(usable);
    const baselineName = ["qubit-only-8cx", "qubit-only-itoffoli"].find((s) =>
      groups.has(s),
    );
    if (!baselineName) {
      throw new ChartError("improvement ratio needs a qubit-only baseline");
    }
    const baseline = new Map<number, number>();
    for (const row of groups.get(baselineName)!) {
      baseline.set(xValue(kind, row), row.mean_fidelity!);
    }
    let index = 0;
    for (const [strategy, group] of [...groups.entries()].sort()) {
      const points = group
        .filter((r) => baseline.has(xValue(kind, r)))
        .map((r) => ({
          x: xValue(kind, r),
          y: r.mean_fidelity! / baseline.get(xValue(kind, r))!,
        }))
        .sort((a, b) => a.x - b.x);
      series.push({ name: strategy, color: colorFor(strategy, index), points });
      index += 1;
    }
    return {
      title: `${family}: fidelity improvement over ${baselineName}`,
      xLabel: KIND_XLABEL[kind],
      yLabel: "improvement ratio",
      series,
      skippedRows: skipped,
    };
  }

  let index = 0;
  for (const [strategy, group] of [...groupByStrategy(usable).entries()].sort()) {
    const points = group
      .map((r) => ({
        x: xValue(kind, r),
        y: r.mean_fidelity!,
        err: r.std_error ?? 0,
      }))
      .sort((a, b) => a.x - b.x);
    series.push({ name: strategy, color: colorFor(strategy, index), points });
    index += 1;
  }
  return {
    title: `${family}: mean fidelity (${KIND_XLABEL[kind]})`,
    xLabel: KIND_XLABEL[kind],
    yLabel: "mean fidelity",
    series,
    skippedRows: skipped,
  };
}
