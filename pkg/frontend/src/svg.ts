/** Scene → SVG serializer. Output is byte-deterministic: fixed attribute
 * order, fixed float formatting, no timestamps or generator comments. */

import { fmt, type Primitive, type Scene } from "./scene.js";

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function element(p: Primitive): string {
  switch (p.kind) {
    case "rect":
      return `<rect x="${fmt(p.x)}" y="${fmt(p.y)}" width="${fmt(p.w)}" height="${fmt(p.h)}" fill="${p.fill}"/>`;
    case "line": {
      const cls = p.cls ? ` class="${p.cls}"` : "";
      const dash = p.dash ? ` stroke-dasharray="${p.dash}"` : "";
      return `<line${cls} x1="${fmt(p.x1)}" y1="${fmt(p.y1)}" x2="${fmt(p.x2)}" y2="${fmt(p.y2)}" stroke="${p.stroke}" stroke-width="${fmt(p.width)}"${dash}/>`;
    }
    case "polyline": {
      const pts = p.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
      return `<polyline points="${pts}" fill="none" stroke="${p.stroke}" stroke-width="${fmt(p.width)}"/>`;
    }
    case "circle":
      return `<circle cx="${fmt(p.cx)}" cy="${fmt(p.cy)}" r="${fmt(p.r)}" fill="${p.fill}"/>`;
    case "text":
      return `<text x="${fmt(p.x)}" y="${fmt(p.y)}" font-family="sans-serif" font-size="${fmt(p.size)}" text-anchor="${p.anchor}" fill="${p.fill}">${esc(p.s)}</text>`;
  }
}

export function toSvg(scene: Scene): string {
  const lines = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
    ...scene.primitives.map(element),
    "</svg>",
  ];
  return lines.join("\n") + "\n";
}
