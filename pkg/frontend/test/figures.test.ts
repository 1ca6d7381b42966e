import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const __dirname = dirname(fileURLToPath(import.meta.url));

import { main } from "../src/cli.js";
import { advantageCurve, buildScene, gateTimeScatter, KINDS, sparsityCondition } from "../src/figures.js";
import { toPng } from "../src/png.js";
import { parseReport, ReportError, type Report } from "../src/report.js";
import { toSvg } from "../src/svg.js";

const FIXTURE_PATH = join(__dirname, "fixtures", "report.json");
const GOLDEN_DIR = join(__dirname, "golden");
const FIXTURE_TEXT = readFileSync(FIXTURE_PATH, "utf8");

function fixture(): Report {
  return parseReport(FIXTURE_TEXT);
}

describe("report parsing", () => {
  it("accepts the fixture", () => {
    const rep = fixture();
    expect(rep.schema).toBe(1);
    expect(rep.reference_gate_seconds).toBe(6.5e-9);
    expect(rep.instances).toHaveLength(2);
    expect(rep.advantage_curve).toHaveLength(37);
  });

  it("names the missing column", () => {
    const doc = JSON.parse(FIXTURE_TEXT);
    delete doc.instances[0].mean_kappa_lb;
    expect(() => parseReport(JSON.stringify(doc))).toThrow(
      /missing column "mean_kappa_lb"/,
    );
  });

  it("names a missing curve column", () => {
    const doc = JSON.parse(FIXTURE_TEXT);
    delete doc.advantage_curve[3].fraction;
    expect(() => parseReport(JSON.stringify(doc))).toThrow(
      /missing column "fraction"/,
    );
  });

  it("rejects non-JSON and wrong schema", () => {
    expect(() => parseReport("not json")).toThrow(ReportError);
    const doc = JSON.parse(FIXTURE_TEXT);
    doc.schema = 2;
    expect(() => parseReport(JSON.stringify(doc))).toThrow(/schema/);
  });
});

describe("scenes", () => {
  it("renders every kind to SVG", () => {
    for (const kind of KINDS) {
      const svg = toSvg(buildScene(kind, fixture()));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
    }
  });

  it("is deterministic", () => {
    for (const kind of KINDS) {
      expect(toSvg(buildScene(kind, fixture()))).toBe(
        toSvg(buildScene(kind, fixture())),
      );
    }
  });

  it("scatter contains exactly one dashed reference line", () => {
    const svg = toSvg(gateTimeScatter(fixture()));
    const refs = svg.match(/class="reference-line"/g) ?? [];
    expect(refs).toHaveLength(1);
    const line = svg.split("\n").find((l) => l.includes("reference-line"))!;
    expect(line).toContain("stroke-dasharray");
  });

  it("scatter plots one marker per finite-mean instance", () => {
    const scene = gateTimeScatter(fixture());
    const dots = scene.primitives.filter((p) => p.kind === "circle");
    expect(dots).toHaveLength(2);
  });

  it("advantage curve passes through 0.5 at 1e-16", () => {
    const rep = fixture();
    const idx = rep.advantage_curve.findIndex((c) => c.gate_time === 1e-16);
    expect(rep.advantage_curve[idx]!.fraction).toBe(0.5);
    const scene = advantageCurve(rep);
    const poly = scene.primitives.find((p) => p.kind === "polyline")!;
    expect(poly.kind).toBe("polyline");
    if (poly.kind !== "polyline") return;
    expect(poly.points).toHaveLength(37);
    // fraction 0.5 maps to the vertical midpoint of the plot area
    const ys = poly.points.map(([, y]) => y);
    const mid = (Math.max(...ys) + Math.min(...ys)) / 2;
    expect(poly.points[idx]![1]).toBeCloseTo(mid, 10);
  });

  it("sparsity figure carries both series verbatim", () => {
    const scene = sparsityCondition(fixture());
    const dots = scene.primitives.filter((p) => p.kind === "circle");
    const squares = scene.primitives.filter(
      (p) => p.kind === "rect" && p.fill === "#b2182b",
    );
    // 2 instances + 1 legend marker each
    expect(dots).toHaveLength(3);
    expect(squares).toHaveLength(3);
  });

  it("rejects empty data with a plot error", () => {
    const doc = JSON.parse(FIXTURE_TEXT);
    doc.instances = [];
    const empty = parseReport(JSON.stringify(doc));
    expect(() => gateTimeScatter(empty)).toThrow(/empty plot/);
    expect(() => sparsityCondition(empty)).toThrow(/empty plot/);
    doc.advantage_curve = [];
    expect(() => advantageCurve(parseReport(JSON.stringify(doc)))).toThrow(
      /empty plot/,
    );
  });

  it("rejects all-null gate times", () => {
    const doc = JSON.parse(FIXTURE_TEXT);
    for (const inst of doc.instances) inst.mean_required_gate_time = null;
    expect(() => gateTimeScatter(parseReport(JSON.stringify(doc)))).toThrow(
      /empty plot/,
    );
  });
});

describe("golden SVGs", () => {
  for (const kind of KINDS) {
    it(`matches ${kind} byte for byte`, () => {
      const golden = readFileSync(join(GOLDEN_DIR, `${kind}.svg`), "utf8");
      expect(toSvg(buildScene(kind, fixture()))).toBe(golden);
    });
  }
});

describe("png raster", () => {
  it("emits a valid deterministic PNG", () => {
    const a = toPng(buildScene("gate_time_scatter", fixture()));
    const b = toPng(buildScene("gate_time_scatter", fixture()));
    expect([...a.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    expect(a.equals(b)).toBe(true);
    expect(a.length).toBeGreaterThan(100);
  });
});

describe("cli", () => {
  it("renders svg and png via render", () => {
    const dir = mkdtempSync(join(tmpdir(), "figures-"));
    const out = join(dir, "fig.svg");
    const png = join(dir, "fig.png");
    const code = main([
      "render", "--kind", "gate_time_scatter",
      "--in", FIXTURE_PATH, "--out", out, "--png", png,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("reference-line");
    expect(readFileSync(png)[1]).toBe(0x50);
  });

  it("usage errors exit 2", () => {
    expect(main([])).toBe(2);
    expect(main(["render", "--kind", "pie", "--in", "x", "--out", "y"])).toBe(2);
    expect(main(["render", "--in", "x", "--out", "y"])).toBe(2);
    expect(main(["render", "--kind", "advantage_curve", "--in", "x",
                 "--out", "y", "--bogus", "z"])).toBe(2);
  });

  it("runtime errors exit 1", () => {
    const dir = mkdtempSync(join(tmpdir(), "figures-"));
    expect(main(["render", "--kind", "advantage_curve",
                 "--in", join(dir, "missing.json"),
                 "--out", join(dir, "f.svg")])).toBe(1);
    const empty = join(dir, "empty.json");
    const doc = JSON.parse(FIXTURE_TEXT);
    doc.advantage_curve = [];
    writeFileSync(empty, JSON.stringify(doc));
    expect(main(["render", "--kind", "advantage_curve", "--in", empty,
                 "--out", join(dir, "f.svg")])).toBe(1);
  });
});
