/**
 * Minimal deterministic drawing model.
 *
 * Figures are built as a flat list of primitives which both the SVG
 * serializer and the PNG rasterizer consume. Coordinates are rounded to a
 * fixed number of decimals at serialization time so output is stable and
 * golden-diffable; nothing here depends on the clock or the environment.
 */

export type Primitive =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      stroke: string;
      width: number;
      dash?: string;
      cls?: string;
    }
  | {
      kind: "polyline";
      points: Array<[number, number]>;
      stroke: string;
      width: number;
    }
  | { kind: "circle"; cx: number; cy: number; r: number; fill: string }
  | {
      kind: "text";
      x: number;
      y: number;
      s: string;
      size: number;
      anchor: "start" | "middle" | "end";
      fill: string;
    };

export interface Scene {
  width: number;
  height: number;
  primitives: Primitive[];
}

/** Fixed-point formatting: two decimals, trailing zeros stripped. */
export function fmt(x: number): string {
  const s = x.toFixed(2).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

export interface LogScale {
  (value: number): number;
  ticks: number[];
}

/** Map [lo, hi] (positive, log10) onto pixel range [a, b]; decade ticks. */
export function logScale(lo: number, hi: number, a: number, b: number): LogScale {
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error(`log scale requires positive domain, got [${lo}, ${hi}]`);
  }
  let llo = Math.log10(lo);
  let lhi = Math.log10(hi);
  if (llo === lhi) {
    llo -= 0.5;
    lhi += 0.5;
  }
  const scale = ((value: number) =>
    a + ((Math.log10(value) - llo) / (lhi - llo)) * (b - a)) as LogScale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e += 1) {
    ticks.push(10 ** e);
  }
  scale.ticks = ticks;
  return scale;
}

export interface LinearScale {
  (value: number): number;
  ticks: number[];
}

/** Map [lo, hi] onto pixel range [a, b] with ~5 round ticks. */
export function linearScale(lo: number, hi: number, a: number, b: number): LinearScale {
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const scale = ((value: number) =>
    a + ((value - lo) / (hi - lo)) * (b - a)) as LinearScale;
  const step = niceStep((hi - lo) / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // snap away float drift so tick labels stay clean
    ticks.push(Number(t.toPrecision(12)));
  }
  scale.ticks = ticks;
  return scale;
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(raw));
  const frac = raw / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

/** Compact tick label: decades as "1e-18", small integers plainly. */
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const e = Math.log10(Math.abs(value));
  if (value > 0 && Number.isInteger(e) && (e < -3 || e > 4)) {
    return `1e${e < 0 ? "" : "+"}${e}`;
  }
  if (Math.abs(value) >= 1e-3 && Math.abs(value) < 1e5) {
    return String(Number(value.toPrecision(6)));
  }
  return value.toExponential(1);
}
