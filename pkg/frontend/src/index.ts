export { buildScene, gateTimeScatter, advantageCurve, sparsityCondition, KINDS } from "./figures.js";
export type { FigureKind } from "./figures.js";
export { parseReport, ReportError } from "./report.js";
export type { Report, InstanceRow, CurvePoint } from "./report.js";
export { toSvg } from "./svg.js";
export { toPng } from "./png.js";
export type { Scene, Primitive } from "./scene.js";
