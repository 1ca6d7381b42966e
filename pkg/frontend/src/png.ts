/**
 * Scene → PNG convenience raster.
 *
 * SVG is the canonical, diffable output; this rasterizer exists so figures
 * can be dropped into places that want a bitmap. It draws rects, lines,
 * polylines and circles with simple solid-color software rendering and
 * skips text labels. Encoding uses zlib from the standard library, so the
 * bytes are deterministic for a fixed scene.
 */

import { deflateSync } from "node:zlib";
import type { Primitive, Scene } from "./scene.js";

type RGB = [number, number, number];

const NAMED: Record<string, RGB> = {
  white: [255, 255, 255],
  black: [0, 0, 0],
  none: [255, 255, 255],
};

function parseColor(color: string): RGB {
  const named = NAMED[color];
  if (named) return named;
  const m = /^#([0-9a-fA-F]{6})$/.exec(color);
  if (m) {
    const v = parseInt(m[1]!, 16);
    return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
  }
  return [0, 0, 0];
}

class Canvas {
  readonly data: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.data = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const i = (yi * this.width + xi) * 3;
    this.data[i] = r;
    this.data[i + 1] = g;
    this.data[i + 2] = b;
  }

  fillRect(x: number, y: number, w: number, h: number, c: RGB): void {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy += 1) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx += 1) {
        this.set(xx, yy, c);
      }
    }
  }

  stroke(x1: number, y1: number, x2: number, y2: number, width: number, c: RGB): void {
    const steps = Math.max(1, Math.ceil(Math.hypot(x2 - x1, y2 - y1)));
    const r = Math.max(0, Math.round(width / 2) - 0) || 0;
    for (let s = 0; s <= steps; s += 1) {
      const x = x1 + ((x2 - x1) * s) / steps;
      const y = y1 + ((y2 - y1) * s) / steps;
      if (r === 0) {
        this.set(x, y, c);
      } else {
        this.fillRect(x - r, y - r, 2 * r + 1, 2 * r + 1, c);
      }
    }
  }

  disc(cx: number, cy: number, radius: number, c: RGB): void {
    for (let y = Math.floor(cy - radius); y <= Math.ceil(cy + radius); y += 1) {
      for (let x = Math.floor(cx - radius); x <= Math.ceil(cx + radius); x += 1) {
        if ((x - cx) ** 2 + (y - cy) ** 2 <= radius ** 2) this.set(x, y, c);
      }
    }
  }
}

function draw(canvas: Canvas, p: Primitive): void {
  switch (p.kind) {
    case "rect":
      if (p.fill !== "none") canvas.fillRect(p.x, p.y, p.w, p.h, parseColor(p.fill));
      return;
    case "line": {
      const c = parseColor(p.stroke);
      if (!p.dash) {
        canvas.stroke(p.x1, p.y1, p.x2, p.y2, p.width, c);
        return;
      }
      // dashed: alternate 6px-on / 4px-off along the segment
      const len = Math.hypot(p.x2 - p.x1, p.y2 - p.y1);
      const period = 10;
      for (let t = 0; t < len; t += period) {
        const t2 = Math.min(t + 6, len);
        canvas.stroke(
          p.x1 + ((p.x2 - p.x1) * t) / len,
          p.y1 + ((p.y2 - p.y1) * t) / len,
          p.x1 + ((p.x2 - p.x1) * t2) / len,
          p.y1 + ((p.y2 - p.y1) * t2) / len,
          p.width,
          c,
        );
      }
      return;
    }
    case "polyline": {
      const c = parseColor(p.stroke);
      for (let i = 1; i < p.points.length; i += 1) {
        const [x1, y1] = p.points[i - 1]!;
        const [x2, y2] = p.points[i]!;
        canvas.stroke(x1, y1, x2, y2, p.width, c);
      }
      return;
    }
    case "circle":
      canvas.disc(p.cx, p.cy, p.r, parseColor(p.fill));
      return;
    case "text":
      return; // labels live in the canonical SVG only
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n += 1) {
    let c = n;
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const byte of buf) {
    c = CRC_TABLE[(c ^ byte) & 0xff]! ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, body: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(body.length, 0);
  head.write(type, 4, "ascii");
  const crcInput = Buffer.concat([head.subarray(4), body]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(crcInput), 0);
  return Buffer.concat([head, body, tail]);
}

export function toPng(scene: Scene): Buffer {
  const canvas = new Canvas(scene.width, scene.height);
  for (const p of scene.primitives) draw(canvas, p);

  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(canvas.width, 0);
  ihdr.writeUInt32BE(canvas.height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type: truecolor RGB
  const stride = canvas.width * 3;
  const raw = Buffer.alloc((stride + 1) * canvas.height);
  for (let y = 0; y < canvas.height; y += 1) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(canvas.data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", new Uint8Array(0)),
  ]);
}
