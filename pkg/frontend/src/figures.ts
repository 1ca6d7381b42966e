/**
 * The three figure kinds, each a pure function from a parsed report to a
 * scene. No aggregation happens here: every plotted value is taken
 * verbatim from the report.
 */

import { linearScale, logScale, tickLabel, type Primitive, type Scene } from "./scene.js";
import { ReportError, type Report } from "./report.js";

export const KINDS = ["gate_time_scatter", "advantage_curve", "sparsity_condition"] as const;
export type FigureKind = (typeof KINDS)[number];

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 80, right: 80, top: 40, bottom: 55 };
const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,
  y1: MARGIN.top,
};

function frame(title: string, xLabel: string, yLabel: string): Primitive[] {
  return [
    { kind: "rect", x: 0, y: 0, w: WIDTH, h: HEIGHT, fill: "white" },
    { kind: "text", x: WIDTH / 2, y: MARGIN.top - 16, s: title, size: 14, anchor: "middle", fill: "black" },
    { kind: "line", x1: PLOT.x0, y1: PLOT.y0, x2: PLOT.x1, y2: PLOT.y0, stroke: "black", width: 1 },
    { kind: "line", x1: PLOT.x0, y1: PLOT.y0, x2: PLOT.x0, y2: PLOT.y1, stroke: "black", width: 1 },
    { kind: "text", x: (PLOT.x0 + PLOT.x1) / 2, y: HEIGHT - 12, s: xLabel, size: 12, anchor: "middle", fill: "black" },
    { kind: "text", x: 16, y: MARGIN.top - 16, s: yLabel, size: 12, anchor: "start", fill: "black" },
  ];
}

function xTicks(scale: { (v: number): number; ticks: number[] }): Primitive[] {
  const out: Primitive[] = [];
  for (const t of scale.ticks) {
    const x = scale(t);
    out.push({ kind: "line", x1: x, y1: PLOT.y0, x2: x, y2: PLOT.y0 + 5, stroke: "black", width: 1 });
    out.push({ kind: "text", x, y: PLOT.y0 + 20, s: tickLabel(t), size: 10, anchor: "middle", fill: "black" });
  }
  return out;
}

function yTicks(
  scale: { (v: number): number; ticks: number[] },
  side: "left" | "right" = "left",
): Primitive[] {
  const out: Primitive[] = [];
  const edge = side === "left" ? PLOT.x0 : PLOT.x1;
  const dir = side === "left" ? -1 : 1;
  for (const t of scale.ticks) {
    const y = scale(t);
    out.push({ kind: "line", x1: edge, y1: y, x2: edge + 5 * dir, y2: y, stroke: "black", width: 1 });
    out.push({
      kind: "text",
      x: edge + 9 * dir,
      y: y + 3,
      s: tickLabel(t),
      size: 10,
      anchor: side === "left" ? "end" : "start",
      fill: "black",
    });
  }
  return out;
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

export function gateTimeScatter(report: Report): Scene {
  const points = report.instances
    .filter(
      (r): r is typeof r & { mean_required_gate_time: number } =>
        r.mean_required_gate_time !== null && Number.isFinite(r.mean_required_gate_time),
    )
    .map((r) => ({ x: r.group_key, y: r.mean_required_gate_time }));
  if (points.length === 0) {
    throw new ReportError("empty plot: no instance has a finite mean_required_gate_time");
  }
  const ref = report.reference_gate_seconds;
  const [xLo, xHi] = extent(points.map((p) => p.x));
  const [yLo, yHi] = extent(points.map((p) => p.y).concat([ref]));
  const sx = logScale(xLo, xHi, PLOT.x0, PLOT.x1);
  // pad the y-domain so extreme points and the reference line stay off the border
  const sy = logScale(yLo / 3, yHi * 3, PLOT.y0, PLOT.y1);
  const primitives = frame(
    "Minimum required gate time per instance",
    "instance size min(m, n)",
    "mean required gate time [s]",
  );
  primitives.push(...xTicks(sx), ...yTicks(sy));
  primitives.push({
    kind: "line",
    cls: "reference-line",
    x1: PLOT.x0,
    y1: sy(ref),
    x2: PLOT.x1,
    y2: sy(ref),
    stroke: "black",
    width: 1,
    dash: "6 4",
  });
  primitives.push({
    kind: "text",
    x: PLOT.x1,
    y: sy(ref) - 5,
    s: `fastest gate (${tickLabel(ref)} s)`,
    size: 10,
    anchor: "end",
    fill: "black",
  });
  for (const p of points) {
    primitives.push({ kind: "circle", cx: sx(p.x), cy: sy(p.y), r: 3, fill: "#1f3b73" });
  }
  return { width: WIDTH, height: HEIGHT, primitives };
}

export function advantageCurve(report: Report): Scene {
  const curve = report.advantage_curve;
  if (curve.length === 0) {
    throw new ReportError("empty plot: advantage_curve has no points");
  }
  const [xLo, xHi] = extent(curve.map((c) => c.gate_time));
  const sx = logScale(xLo, xHi, PLOT.x0, PLOT.x1);
  const sy = linearScale(0, 1, PLOT.y0, PLOT.y1);
  const primitives = frame(
    "Instances with quantum advantage",
    "gate time [s]",
    "fraction of instances",
  );
  primitives.push(...xTicks(sx), ...yTicks(sy));
  primitives.push({
    kind: "polyline",
    points: curve.map((c) => [sx(c.gate_time), sy(c.fraction)] as [number, number]),
    stroke: "#1f3b73",
    width: 1.5,
  });
  return { width: WIDTH, height: HEIGHT, primitives };
}

export function sparsityCondition(report: Report): Scene {
  const rows = report.instances;
  if (rows.length === 0) {
    throw new ReportError("empty plot: report has no instances");
  }
  const [xLo, xHi] = extent(rows.map((r) => r.group_key));
  const sx = logScale(xLo, xHi, PLOT.x0, PLOT.x1);
  const kappas = rows.map((r) => r.mean_kappa_lb);
  const sKappa = logScale(Math.min(...kappas), Math.max(...kappas), PLOT.y0, PLOT.y1);
  const sDensity = linearScale(0, 1, PLOT.y0, PLOT.y1);
  const primitives = frame(
    "Basis condition number and column density",
    "instance size min(m, n)",
    "mean kappa lower bound (left) / mean column density (right)",
  );
  primitives.push(...xTicks(sx), ...yTicks(sKappa, "left"), ...yTicks(sDensity, "right"));
  for (const r of rows) {
    primitives.push({
      kind: "circle",
      cx: sx(r.group_key),
      cy: sKappa(r.mean_kappa_lb),
      r: 3,
      fill: "#1f3b73",
    });
    primitives.push({
      kind: "rect",
      x: sx(r.group_key) - 2.5,
      y: sDensity(r.mean_col_density) - 2.5,
      w: 5,
      h: 5,
      fill: "#b2182b",
    });
  }
  primitives.push(
    { kind: "circle", cx: PLOT.x0 + 10, cy: PLOT.y1 + 12, r: 3, fill: "#1f3b73" },
    { kind: "text", x: PLOT.x0 + 18, y: PLOT.y1 + 15, s: "mean kappa lower bound", size: 10, anchor: "start", fill: "black" },
    { kind: "rect", x: PLOT.x0 + 190, y: PLOT.y1 + 9, w: 5, h: 5, fill: "#b2182b" },
    { kind: "text", x: PLOT.x0 + 200, y: PLOT.y1 + 15, s: "mean column density d_c/m", size: 10, anchor: "start", fill: "black" },
  );
  return { width: WIDTH, height: HEIGHT, primitives };
}

export function buildScene(kind: FigureKind, report: Report): Scene {
  switch (kind) {
    case "gate_time_scatter":
      return gateTimeScatter(report);
    case "advantage_curve":
      return advantageCurve(report);
    case "sparsity_condition":
      return sparsityCondition(report);
  }
}
