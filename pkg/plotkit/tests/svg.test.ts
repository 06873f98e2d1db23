import { describe, expect, it } from "vitest";

import type { EstimateData } from "../src/csv.js";
import { linearScale, ticks } from "../src/scale.js";
import { panelGrid, renderFigure } from "../src/svg.js";

function fakeEstimate(withRef = true): EstimateData {
  const base = {
    r: [0.1, 0.2, 0.4],
    value: [0.1, 0.3, 0.9],
    meta: { estimator: "kpoints" },
  };
  return withRef ? { ...base, reference: [0.03, 0.13, 0.5] } : base;
}

describe("scales", () => {
  it("maps domain ends to range ends", () => {
    const s = linearScale([0, 2], [10, 110]);
    expect(s(0)).toBe(10);
    expect(s(2)).toBe(110);
    expect(s(1)).toBe(60);
  });

  it("produces 1-2-5 ticks inside the domain", () => {
    const t = ticks(0, 1.05);
    expect(t[0]).toBe(0);
    expect(t[t.length - 1]).toBeLessThanOrEqual(1.05);
    expect(t.length).toBeGreaterThanOrEqual(4);
  });
});

describe("renderFigure", () => {
  it("draws estimate steps plus the reference line", () => {
    const svg = renderFigure([{ data: fakeEstimate(), label: "uniform" }], { reference: true });
    expect(svg).toContain("<svg");
    expect((svg.match(/<path/g) ?? []).length).toBe(2);
    expect(svg).toContain("uniform");
  });

  it("omits the reference when toggled off", () => {
    const svg = renderFigure([{ data: fakeEstimate(), label: "" }], { reference: false });
    expect((svg.match(/<path/g) ?? []).length).toBe(1);
  });

  it("lays four panels on a 2x2 grid", () => {
    const panels = Array.from({ length: 4 }, () => ({ data: fakeEstimate(), label: "p" }));
    const svg = renderFigure(panels, { reference: true });
    expect(panelGrid(4)).toEqual({ cols: 2, rows: 2 });
    expect(svg).toContain('width="720"');
    expect(svg).toContain('height="600"');
  });

  it("is deterministic for identical inputs", () => {
    const a = renderFigure([{ data: fakeEstimate(), label: "x" }], { reference: true });
    const b = renderFigure([{ data: fakeEstimate(), label: "x" }], { reference: true });
    expect(a).toBe(b);
  });

  it("honors axis limits", () => {
    const svg = renderFigure([{ data: fakeEstimate(), label: "" }], {
      reference: true,
      xlim: [0, 1],
      ylim: [0, 2],
    });
    expect(svg).toContain(">1<");
    expect(svg).toContain(">2<");
  });
});
