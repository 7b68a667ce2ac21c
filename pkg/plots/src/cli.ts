#!/usr/bin/env node
/**
 * plot --spec KIND --in DIR --out FILE [--window N]
 *
 * Renders one figure from simulator outputs into an SVG file. The SVG is
 * built fully in memory first; on any error nothing is written.
 */

import { writeFileSync } from "node:fs";

import { PLOT_KINDS, PlotKind, render } from "./render.js";

function usage(): string {
  return `usage: plot --spec KIND --in DIR --out FILE [--window N]\n  KIND: ${PLOT_KINDS.join(", ")}`;
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      console.error(usage());
      return 2;
    }
    args.set(key.slice(2), value);
  }
  const kind = args.get("spec");
  const inputDir = args.get("in");
  const outFile = args.get("out");
  const window = Number(args.get("window") ?? "5");
  if (!kind || !inputDir || !outFile) {
    console.error(usage());
    return 2;
  }
  if (!(PLOT_KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown plot kind ${JSON.stringify(kind)}\n${usage()}`);
    return 2;
  }
  try {
    const svg = render({ kind: kind as PlotKind, inputDir, window });
    writeFileSync(outFile, svg);
    console.log(`wrote ${outFile}`);
    return 0;
  } catch (err) {
    console.error(`plot failed: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
