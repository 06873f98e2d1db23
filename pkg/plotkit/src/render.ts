/** Tie the pieces together: spec -> estimate files -> one image on disk. */

import { writeFileSync } from "node:fs";
import { extname } from "node:path";

import { readEstimate } from "./csv.js";
import type { PanelSpec } from "./spec.js";
import { renderFigure } from "./svg.js";

export class RenderError extends Error {}

export async function renderToFile(spec: PanelSpec, outputPath: string): Promise<void> {
  const panels = spec.panels.map((p) => ({ data: readEstimate(p.file), label: p.label }));
  const svg = renderFigure(panels, {
    xlim: spec.xlim,
    ylim: spec.ylim,
    reference: spec.reference,
  });

  const ext = extname(outputPath).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(outputPath, svg);
  } else if (ext === ".png") {
    const { Resvg } = await import("@resvg/resvg-js");
    const png = new Resvg(svg).render().asPng();
    writeFileSync(outputPath, png);
  } else {
    throw new RenderError(`unsupported output extension ${ext || "(none)"}; use .png or .svg`);
  }
}
