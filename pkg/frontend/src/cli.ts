#!/usr/bin/env node
/**
 * figures render --kind <gate_time_scatter|advantage_curve|sparsity_condition>
 *                --in report.json --out fig.svg [--png fig.png]
 *
 * Writes SVG when --out ends in .svg (canonical) or PNG when it ends in
 * .png; --png additionally writes a raster next to an SVG --out.
 * Exit codes: 0 success, 1 runtime error (bad report, empty data, I/O),
 * 2 usage error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";
import { buildScene, KINDS, type FigureKind } from "./figures.js";
import { toPng } from "./png.js";
import { parseReport, ReportError } from "./report.js";
import { toSvg } from "./svg.js";

const USAGE =
  "usage: figures render --kind <" + KINDS.join("|") + "> --in report.json --out fig.svg [--png fig.png]";

class UsageError extends Error {}

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  png?: string;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command ${JSON.stringify(argv[0] ?? "")}`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i]!;
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new UsageError(`malformed flag ${JSON.stringify(flag)}`);
    }
    flags.set(flag.slice(2), value);
  }
  const kind = flags.get("kind");
  const input = flags.get("in");
  const output = flags.get("out");
  if (!kind || !input || !output) {
    throw new UsageError("--kind, --in and --out are required");
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown figure kind ${JSON.stringify(kind)}`);
  }
  for (const key of flags.keys()) {
    if (!["kind", "in", "out", "png"].includes(key)) {
      throw new UsageError(`unknown flag --${key}`);
    }
  }
  return { kind: kind as FigureKind, input, output, png: flags.get("png") };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n${USAGE}\n`);
    return 2;
  }
  try {
    const report = parseReport(readFileSync(args.input, "utf8"));
    const scene = buildScene(args.kind, report);
    if (args.output.endsWith(".png")) {
      writeFileSync(args.output, toPng(scene));
    } else {
      writeFileSync(args.output, toSvg(scene));
    }
    if (args.png) {
      writeFileSync(args.png, toPng(scene));
    }
    return 0;
  } catch (e) {
    if (e instanceof ReportError || (e as NodeJS.ErrnoException).code) {
      process.stderr.write(`error: ${(e as Error).message}\n`);
      return 1;
    }
    throw e;
  }
}

const entry = process.argv[1];
if (entry && (entry.endsWith("cli.ts") || entry.endsWith("cli.js") || entry.endsWith("figures"))) {
  process.exit(main(process.argv.slice(2)));
}
