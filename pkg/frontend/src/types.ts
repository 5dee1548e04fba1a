export const SWEEP_COLUMNS = [
  "family", "n_qubits", "strategy", "axis", "axis_value",
  "gate_eps", "coherence_eps", "total_eps",
  "mean_fidelity", "std_error", "n_states",
  "duration_ns", "swap_count", "seed", "error",
] as const;

export interface SweepRow {
  family: string;
  n_qubits: number;
  strategy: string;
  axis: string;
  axis_value: number;
  gate_eps: number | null;
  coherence_eps: number | null;
  total_eps: number | null;
  mean_fidelity: number | null;
  std_error: number | null;
  n_states: number;
  duration_ns: number | null;
  swap_count: number | null;
  seed: string;
  error: string;
}

export const PLOT_KINDS = [
  "size_lines",
  "improvement_ratio",
  "gate_error_sweep",
  "coherence_sweep",
  "cx_ratio_sweep",
] as const;

export type PlotKind = (typeof PLOT_KINDS)[number];

export interface Point {
  x: number;
  y: number;
  err?: number;
}

export interface Series {
  name: string;
  color: string;
  points: Point[];
}

export interface ChartModel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  skippedRows: number;
}
