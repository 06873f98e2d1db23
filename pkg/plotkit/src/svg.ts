/**
 * SVG figure assembly: a grid of panels, each drawing one estimate as a
 * right-continuous step curve (the estimate jumps at every sample radius,
 * starting from the implicit (0, 0)) and, when present and enabled, the
 * reference column as a plain line.
 */

import type { EstimateData } from "./csv.js";
import { formatTick, linearScale, ticks } from "./scale.js";

export interface PanelInput {
  data: EstimateData;
  label: string;
}

export interface FigureOptions {
  xlim?: [number, number];
  ylim?: [number, number];
  reference: boolean;
}

const PANEL_W = 360;
const PANEL_H = 300;
const MARGIN = { top: 34, right: 16, bottom: 40, left: 56 };

const ESTIMATE_STYLE = 'fill="none" stroke="#c02020" stroke-width="1.8"';
const REFERENCE_STYLE = 'fill="none" stroke="#202020" stroke-width="1.2"';

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function stepPath(xs: number[], ys: number[], x0: number, xEnd: number, y0: number): string {
  // Right-continuous steps: hold each value until the next radius.
  let d = `M ${fmt(x0)} ${fmt(y0)}`;
  for (let i = 0; i < xs.length; i++) {
    d += ` H ${fmt(xs[i])} V ${fmt(ys[i])}`;
  }
  d += ` H ${fmt(xEnd)}`;
  return d;
}

function linePath(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${i === 0 ? "M" : "L"} ${fmt(x)} ${fmt(ys[i])}`).join(" ");
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderPanel(panel: PanelInput, ox: number, oy: number, opts: FigureOptions): string {
  const { data, label } = panel;
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;

  const xMax = opts.xlim ? opts.xlim[1] : Math.max(...data.r, 0) * 1.05 || 1;
  const xMin = opts.xlim ? opts.xlim[0] : 0;
  const allY = data.value.concat(opts.reference && data.reference ? data.reference : []);
  const yMax = opts.ylim ? opts.ylim[1] : Math.max(...allY, 0) * 1.05 || 1;
  const yMin = opts.ylim ? opts.ylim[0] : 0;

  const sx = linearScale([xMin, xMax], [MARGIN.left, MARGIN.left + innerW]);
  const sy = linearScale([yMin, yMax], [MARGIN.top + innerH, MARGIN.top]);

  const parts: string[] = [];
  parts.push(`<g transform="translate(${ox},${oy})">`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="#fdfdfd" stroke="#606060" stroke-width="1"/>`,
  );

  for (const t of ticks(xMin, xMax)) {
    const x = fmt(sx(t));
    const yb = MARGIN.top + innerH;
    parts.push(`<line x1="${x}" y1="${yb}" x2="${x}" y2="${yb + 4}" stroke="#606060"/>`);
    parts.push(
      `<text x="${x}" y="${yb + 16}" font-size="10" text-anchor="middle" fill="#303030">${formatTick(t)}</text>`,
    );
  }
  for (const t of ticks(yMin, yMax)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left - 4}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#606060"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 7}" y="${y}" font-size="10" text-anchor="end" dominant-baseline="middle" fill="#303030">${formatTick(t)}</text>`,
    );
  }

  const clipId = `clip-${ox}-${oy}`;
  parts.push(
    `<clipPath id="${clipId}"><rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}"/></clipPath>`,
  );
  parts.push(`<g clip-path="url(#${clipId})">`);
  if (opts.reference && data.reference) {
    parts.push(
      `<path d="${linePath(data.r.map(sx), data.reference.map(sy))}" ${REFERENCE_STYLE}/>`,
    );
  }
  if (data.r.length > 0) {
    parts.push(
      `<path d="${stepPath(data.r.map(sx), data.value.map(sy), sx(Math.max(xMin, 0)), sx(xMax), sy(0))}" ${ESTIMATE_STYLE}/>`,
    );
  }
  parts.push("</g>");

  const title = label || data.meta["estimator"] || "";
  parts.push(
    `<text x="${MARGIN.left + innerW / 2}" y="${MARGIN.top - 12}" font-size="12" text-anchor="middle" fill="#101010">${escapeXml(title)}</text>`,
  );
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(panels: PanelInput[], opts: FigureOptions): string {
  const cols = Math.ceil(Math.sqrt(panels.length));
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H;
  const body = panels
    .map((p, i) => renderPanel(p, (i % cols) * PANEL_W, Math.floor(i / cols) * PANEL_H, opts))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n${body}\n</svg>\n`
  );
}

export function panelGrid(count: number): { cols: number; rows: number } {
  const cols = Math.ceil(Math.sqrt(count));
  return { cols, rows: Math.ceil(count / cols) };
}
