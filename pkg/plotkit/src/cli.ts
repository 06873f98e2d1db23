#!/usr/bin/env node
/**
 * plotkit <spec.json> [-o out.png]
 *
 * Renders the estimate CSVs named in the spec into one multi-panel figure
 * (.png or .svg).  The output path comes from -o, falling back to the
 * spec's "output" field.  Exits nonzero with a message naming the
 * offending file on any error.
 */

import { readSpec } from "./spec.js";
import { renderToFile } from "./render.js";

function usage(): never {
  console.error("usage: plotkit <spec.json> [-o <figure.png|figure.svg>]");
  process.exit(2);
}

export async function main(argv: string[]): Promise<number> {
  let specPath: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--output") {
      output = argv[++i];
      if (output === undefined) usage();
    } else if (arg === "-h" || arg === "--help") {
      usage();
    } else if (specPath === undefined) {
      specPath = arg;
    } else {
      usage();
    }
  }
  if (specPath === undefined) usage();

  const spec = readSpec(specPath);
  const target = output ?? spec.output;
  if (!target) {
    console.error(`${specPath}: no output path (pass -o or set "output" in the spec)`);
    return 2;
  }
  await renderToFile(spec, target);
  console.log(`wrote ${target} (${spec.panels.length} panel${spec.panels.length === 1 ? "" : "s"})`);
  return 0;
}

const isDirectRun = import.meta.url === `file://${process.argv[1]}`;
if (isDirectRun) {
  main(process.argv.slice(2))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error(String(err instanceof Error ? err.message : err));
      process.exit(1);
    });
}
