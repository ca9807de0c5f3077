#!/usr/bin/env node
/**
 * Contour-figure CLI for curvmhd field dumps.
 *
 *   curvmhd-plot --in out/fields_final.csv --field bsq \
 *                --levels 20 --min 3e-9 --max 5.2e-7 --out loop.svg [--grid]
 *   curvmhd-plot --figure field_loop_Bsq --in out/fields_final.csv --out f.png
 *
 * `--figure` pulls levels/min/max/field from figures.manifest; explicit
 * flags override.  Output format follows the file extension (.svg or .png).
 * Rendering is read-only and idempotent.
 */

import { writeFileSync, readFileSync } from "fs";
import { dirname, join } from "path";
import { fileURLToPath } from "url";
import { parseFieldCsv, fieldValues } from "./csv.js";
import { contourLevels, contoursInPhysicalSpace } from "./contour.js";
import { frameFor, gridOverlay, renderPng, renderSvg } from "./render.js";

export interface FigureSpec {
  field: string;
  levels: number;
  min: number;
  max: number;
  grid?: boolean;
}

export function loadManifest(path?: string): Record<string, FigureSpec> {
  const here = dirname(fileURLToPath(import.meta.url));
  const file = path ?? join(here, "..", "figures.manifest");
  return JSON.parse(readFileSync(file, "utf8"));
}

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let k = 0; k < argv.length; k++) {
    const arg = argv[k];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument "${arg}"`);
    }
    const name = arg.slice(2);
    if (name === "grid") {
      out.set(name, "1");
    } else {
      const val = argv[++k];
      if (val === undefined) throw new Error(`missing value for --${name}`);
      out.set(name, val);
    }
  }
  return out;
}

export function makeFigure(opts: {
  input: string; field: string; levels: number; min: number; max: number;
  out: string; grid?: boolean; title?: string;
}): void {
  const grid = parseFieldCsv(opts.input);
  const vals = fieldValues(grid, opts.field);
  const levels = contourLevels(opts.min, opts.max, opts.levels);
  const contours = contoursInPhysicalSpace(grid, vals, levels);
  const frame = frameFor(grid);
  const overlay = opts.grid ? gridOverlay(grid) : null;
  if (opts.out.endsWith(".png")) {
    writeFileSync(opts.out, renderPng(frame, contours, overlay));
  } else if (opts.out.endsWith(".svg")) {
    const title = opts.title ??
      `${opts.field}: ${opts.levels} levels in [${opts.min}, ${opts.max}]`;
    writeFileSync(opts.out, renderSvg(frame, contours, overlay, title));
  } else {
    throw new Error(`unsupported output format for "${opts.out}" ` +
      `(use .svg or .png)`);
  }
}

export function main(argv: string[]): number {
  let args: Map<string, string>;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  try {
    let spec: Partial<FigureSpec> = {};
    if (args.has("figure")) {
      const manifest = loadManifest(args.get("manifest"));
      const fig = manifest[args.get("figure")!];
      if (!fig) {
        throw new Error(`unknown figure "${args.get("figure")}"; known: ` +
          Object.keys(manifest).join(", "));
      }
      spec = fig;
    }
    const need = (name: string): string => {
      const v = args.get(name);
      if (v === undefined) throw new Error(`--${name} is required`);
      return v;
    };
    const input = need("in");
    const out = need("out");
    const field = args.get("field") ?? spec.field;
    if (!field) throw new Error("--field is required without --figure");
    const levels = Number(args.get("levels") ?? spec.levels);
    const min = Number(args.get("min") ?? spec.min);
    const max = Number(args.get("max") ?? spec.max);
    if (!Number.isFinite(levels) || !Number.isFinite(min)
        || !Number.isFinite(max)) {
      throw new Error("--levels/--min/--max are required without --figure");
    }
    makeFigure({
      input, out, field, levels, min, max,
      grid: args.has("grid") || Boolean(spec.grid),
      title: args.get("figure"),
    });
    console.log(`wrote ${out}`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
