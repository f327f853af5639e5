import { describe, expect, it } from "vitest";

import { approxDecimal, displayExact, formatFrac, parseFrac, snapToGrid } from "../src/fraction.js";
import { cornerTypeText, energyText, germText, markovLabel } from "../src/inspector.js";
import { clientRender } from "../src/render.js";

describe("fraction strings", () => {
  it("parses and formats exactly", () => {
    expect(formatFrac(parseFrac("3/8"))).toBe("3/8");
    expect(formatFrac(parseFrac("-6/4"))).toBe("-3/2");
    expect(formatFrac(parseFrac("7"))).toBe("7");
    expect(formatFrac(parseFrac("0/5"))).toBe("0");
  });

  it("marks decimal approximations explicitly", () => {
    expect(displayExact("1/3")).toBe("1/3 (≈ 0.3333)");
    expect(displayExact("2")).toBe("2");
    expect(approxDecimal(parseFrac("-1/8"))).toBe("-0.1250");
  });

  it("snaps picks to the rational grid", () => {
    expect(snapToGrid(0.5)).toBe("1/2");
    expect(snapToGrid(0.50001)).toBe("1/2");
    expect(snapToGrid(1.234, 64)).toBe("79/64");
    expect(snapToGrid(2)).toBe("2");
  });
});

describe("inspector formatting", () => {
  it("renders corner types", () => {
    expect(cornerTypeText({ d: 1, p: 2, q_class: 1 })).toBe("(1,2,1)");
    expect(cornerTypeText({ error: "NotIsolated" })).toBe("type unavailable: NotIsolated");
  });

  it("renders energies", () => {
    expect(energyText({ status: "exact", value: "2" })).toBe("e = 2");
    expect(energyText({ status: "unknown" })).toBe("unknown (left open on the node ray)");
  });

  it("renders germs with the class", () => {
    expect(
      germText({
        germ: { a: "1", gradients: [["1", "0"], ["0", "1"]] },
        class: { a: "1", k: 1, p: 1, q_class: 0 },
        on_ray: true,
      }),
    ).toBe("1 + min{b1, b2}   [k=1, p=1, q=0]");
    expect(
      germText({
        germ: { a: "1/2", gradients: [["1", "0"]] },
        class: { a: "1/2", k: 0 },
        on_ray: false,
      }),
    ).toBe("1/2 + b1   [k=0]");
  });

  it("builds markov labels from corner p-values", () => {
    const node = {
      diagram: { kind: "compact" as const },
      corner_types: [
        { d: 1, p: 2, q_class: 1 },
        { d: 1, p: 1, q_class: 0 },
        { d: 1, p: 1, q_class: 0 },
      ],
      vertex_kinds: [],
      validation: [],
      digest: "x",
    };
    expect(markovLabel(node)).toBe("(1,1,2)");
  });
});

describe("client-side fallback rendering", () => {
  it("renders a compact diagram from its JSON payload", () => {
    const svg = clientRender({
      kind: "compact",
      vertices: [
        ["0", "0"],
        ["3", "0"],
        ["0", "3"],
      ],
      corners: [{ anchor: ["0", "0"], v: [1, 1], nodes: ["3/8"] }],
    });
    expect(svg).toContain("<svg");
    expect(svg).toContain("polygon");
    expect(svg.match(/stroke-dasharray="6,4"/g)?.length).toBe(1); // the cut
    expect(svg).toContain("</svg>");
  });

  it("renders the half-plane model's nodes and outward cut", () => {
    const svg = clientRender({
      kind: "bdpq",
      bdpq: { d: 2, p: 1, q: 0, cut_side: "outward", nodes: ["1", "2"] },
    });
    expect(svg).toContain("<svg");
    expect(svg.match(/stroke-dasharray="6,4"/g)?.length).toBe(1);
  });
});
