#!/usr/bin/env node
/**
 * plotkit FIGURE_KIND --in PATH [--in PATH2] --out PATH
 *
 * Renders an SVG figure from mima3d CSV outputs.
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseCsv } from "./csv.js";
import { FIGURE_INPUTS, FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";

const USAGE = `usage: plotkit FIGURE_KIND --in PATH [--in PATH2] --out PATH

figure kinds and their inputs:
${FIGURE_KINDS.map((k) => `  ${k.padEnd(22)} ${FIGURE_INPUTS[k].join(", ")}`).join("\n")}
`;

export interface CliArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): CliArgs {
  if (argv.length === 0) throw new Error("missing FIGURE_KIND");
  const kind = argv[0];
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown figure kind ${JSON.stringify(kind)}`);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--in") {
      if (i + 1 >= argv.length) throw new Error("--in needs a path");
      inputs.push(argv[++i]);
    } else if (arg === "--out") {
      if (i + 1 >= argv.length) throw new Error("--out needs a path");
      out = argv[++i];
    } else {
      throw new Error(`unexpected argument ${JSON.stringify(arg)}`);
    }
  }
  if (inputs.length === 0) throw new Error("at least one --in PATH is required");
  if (out === undefined) throw new Error("--out PATH is required");
  return { kind: kind as FigureKind, inputs, out };
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n\n${USAGE}`);
    return 1;
  }
  try {
    const tables = args.inputs.map((p) => parseCsv(readFileSync(p, "utf-8")));
    const svg = renderFigure(args.kind, tables);
    writeFileSync(args.out, svg, "utf-8");
    process.stdout.write(`wrote ${args.out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
