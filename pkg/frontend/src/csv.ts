import Papa from "papaparse";
import { SWEEP_COLUMNS, SweepRow } from "./types.js";

export class SchemaError extends Error {}

function num(value: string): number | null {
  if (value === undefined || value.trim() === "") return null;
  const parsed = Number(value);
  if (Number.isNaN(parsed)) throw new SchemaError(`not a number: ${value}`);
  return parsed;
}

/** Parse a sweep CSV, failing loudly when schema columns are missing. */
export function parseSweepCsv(text: string): SweepRow[] {
  const result = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new SchemaError(`CSV parse failure: ${result.errors[0].message}`);
  }
  const fields = result.meta.fields ?? [];
  const missing = SWEEP_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`missing columns: ${missing.join(", ")}`);
  }
  return result.data.map((raw) => ({
    family: raw.family,
    n_qubits: num(raw.n_qubits) ?? 0,
    strategy: raw.strategy,
    axis: raw.axis,
    axis_value: num(raw.axis_value) ?? 0,
    gate_eps: num(raw.gate_eps),
    coherence_eps: num(raw.coherence_eps),
    total_eps: num(raw.total_eps),
    mean_fidelity: num(raw.mean_fidelity),
    std_error: num(raw.std_error),
    n_states: num(raw.n_states) ?? 0,
    duration_ns: num(raw.duration_ns),
    swap_count: num(raw.swap_count),
    seed: raw.seed,
    error: raw.error ?? "",
  }));
}
