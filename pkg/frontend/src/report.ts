/**
 * Report JSON schema: loading and validation.
 *
 * The renderer consumes only the aggregated report produced by the bench
 * harness (`report.json`); it never reads raw per-iteration CSVs and
 * performs no aggregation of its own.
 */

export interface InstanceRow {
  instance_id: string;
  group_key: number;
  iterations: number;
  excluded_rows: number;
  /** null when every iteration of the instance was flagged or infinite. */
  mean_required_gate_time: number | null;
  mean_kappa_lb: number;
  mean_col_density: number;
  mean_classical_iter_seconds: number;
}

export interface CurvePoint {
  gate_time: number;
  fraction: number;
}

export interface Report {
  schema: number;
  reference_gate_seconds: number;
  instances: InstanceRow[];
  advantage_curve: CurvePoint[];
}

/** Raised on schema violations; the CLI maps it to a nonzero exit. */
export class ReportError extends Error {}

const INSTANCE_COLUMNS: Array<keyof InstanceRow> = [
  "instance_id",
  "group_key",
  "iterations",
  "excluded_rows",
  "mean_required_gate_time",
  "mean_kappa_lb",
  "mean_col_density",
  "mean_classical_iter_seconds",
];

const CURVE_COLUMNS: Array<keyof CurvePoint> = ["gate_time", "fraction"];

function requireColumns(
  row: Record<string, unknown>,
  columns: readonly string[],
  where: string,
): void {
  for (const col of columns) {
    if (!(col in row)) {
      throw new ReportError(`missing column "${col}" in ${where}`);
    }
  }
}

export function parseReport(text: string): Report {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new ReportError(`report is not valid JSON: ${(e as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ReportError("report must be a JSON object");
  }
  const doc = raw as Record<string, unknown>;
  requireColumns(doc, ["schema", "reference_gate_seconds", "instances", "advantage_curve"], "report");
  if (doc.schema !== 1) {
    throw new ReportError(`unsupported report schema ${JSON.stringify(doc.schema)}`);
  }
  if (!Array.isArray(doc.instances) || !Array.isArray(doc.advantage_curve)) {
    throw new ReportError('"instances" and "advantage_curve" must be arrays');
  }
  doc.instances.forEach((row, i) => {
    if (typeof row !== "object" || row === null) {
      throw new ReportError(`instances[${i}] is not an object`);
    }
    requireColumns(row as Record<string, unknown>, INSTANCE_COLUMNS, `instances[${i}]`);
  });
  doc.advantage_curve.forEach((row, i) => {
    if (typeof row !== "object" || row === null) {
      throw new ReportError(`advantage_curve[${i}] is not an object`);
    }
    requireColumns(row as Record<string, unknown>, CURVE_COLUMNS, `advantage_curve[${i}]`);
  });
  return doc as unknown as Report;
}
