/**
 * Figure renderers. Each takes parsed CSV tables from the mima3d CLI and
 * returns an SVG string. No numerics happen here beyond summation for the
 * budget overlay: every plotted number comes straight from the CSV.
 */

import { CsvTable, column, rawColumn } from "./csv.js";
import {
  DEFAULT_FRAME,
  PALETTE,
  axes,
  circles,
  document as svgDocument,
  extent,
  legend,
  linearScale,
  logPad,
  logScale,
  plotArea,
  polyline,
  text,
} from "./svg.js";

export const FIGURE_KINDS = [
  "energy_budget",
  "enstrophy_margin",
  "convergence",
  "continuous_dependence",
  "inequality_ratios",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

/** CSV kind(s) each figure expects, in --in order. */
export const FIGURE_INPUTS: Record<FigureKind, string[]> = {
  energy_budget: ["diagnostics"],
  enstrophy_margin: ["enstrophy-series"],
  convergence: ["convergence"],
  continuous_dependence: ["cdep", "cdep-fit"],
  inequality_ratios: ["inequality", "inequality-constants"],
};

/** Budget sum E(t) + D_visc(t) + D_eps(t); conserved up to energy_residual. */
export function budgetSum(table: CsvTable): number[] {
  const energy = column(table, "energy");
  const dVisc = column(table, "d_visc");
  const dEps = column(table, "d_eps");
  return energy.map((e, i) => e + dVisc[i] + dEps[i]);
}

export function energyBudget(table: CsvTable): string {
  const t = column(table, "t");
  const energy = column(table, "energy");
  const dVisc = column(table, "d_visc");
  const dEps = column(table, "d_eps");
  const total = budgetSum(table);
  const frame = DEFAULT_FRAME;
  const area = plotArea(frame);
  const xS = linearScale(extent(t), area.x);
  const yS = linearScale(extent([...energy, ...dVisc, ...dEps, ...total, 0]), area.y);
  const series = [
    { ys: energy, label: "E(t)", color: PALETTE[0] },
    { ys: dVisc, label: "viscous dissipation (cumulative)", color: PALETTE[1] },
    { ys: dEps, label: "vertical dissipation (cumulative)", color: PALETTE[2] },
  ];
  const body = [
    axes(frame, xS, yS, { x: "t", y: "energy", title: "Energy budget" }),
    ...series.map((s) => polyline(t.map(xS), s.ys.map(yS), s.color)),
    polyline(t.map(xS), total.map(yS), "#333", { dash: "6 3" }),
    legend(frame, [
      ...series.map((s) => ({ label: s.label, color: s.color })),
      { label: "E + dissipation (should be flat)", color: "#333", dash: "6 3" },
    ]),
  ];
  return svgDocument(frame, body);
}

export function enstrophyMargin(table: CsvTable): string {
  const t = column(table, "t");
  const lhs = column(table, "lhs");
  const rhs = column(table, "rhs");
  const slack = column(table, "slack");
  const rhsSlack = rhs.map((v, i) => v + slack[i]);
  const frame = DEFAULT_FRAME;
  const area = plotArea(frame);
  const xS = linearScale(extent(t), area.x);
  const yS = linearScale(extent([...lhs, ...rhs, ...rhsSlack]), area.y);
  const body = [
    axes(frame, xS, yS, { x: "t", y: "enstrophy rate", title: "Enstrophy inequality margin" }),
    polyline(t.map(xS), lhs.map(yS), PALETTE[0]),
    polyline(t.map(xS), rhs.map(yS), PALETTE[1]),
    polyline(t.map(xS), rhsSlack.map(yS), PALETTE[1], { dash: "5 3" }),
    legend(frame, [
      { label: "d/dt enstrophy (lhs)", color: PALETTE[0] },
      { label: "dissipation bound (rhs)", color: PALETTE[1] },
      { label: "rhs + discretization slack", color: PALETTE[1], dash: "5 3" },
    ]),
  ];
  return svgDocument(frame, body);
}

export function convergence(table: CsvTable): string {
  const m = column(table, "m");
  const diffW = column(table, "diff_w");
  const diffU = column(table, "diff_u");
  const frame = DEFAULT_FRAME;
  const area = plotArea(frame);
  const xS = linearScale(extent(m), area.x);
  const positive = [...diffW, ...diffU].filter((v) => v > 0);
  if (positive.length === 0) {
    throw new Error("convergence differences are all zero; nothing to plot on a log axis");
  }
  const yS = logScale(logPad(extent(positive)), area.y);
  const clamp = (v: number) => Math.max(v, yS.domain[0]);
  const body = [
    axes(
      frame,
      xS,
      yS,
      { x: "Galerkin radius m", y: "difference vs next radius", title: "Galerkin self-convergence" },
      { yLog: true },
    ),
    polyline(m.map(xS), diffW.map((v) => yS(clamp(v))), PALETTE[0]),
    circles(m.map(xS), diffW.map((v) => yS(clamp(v))), PALETTE[0]),
    polyline(m.map(xS), diffU.map((v) => yS(clamp(v))), PALETTE[1]),
    circles(m.map(xS), diffU.map((v) => yS(clamp(v))), PALETTE[1]),
    legend(frame, [
      { label: "|w_m - w_next|", color: PALETTE[0] },
      { label: "|u_m - u_next|", color: PALETTE[1] },
    ]),
  ];
  return svgDocument(frame, body);
}

export function continuousDependence(table: CsvTable, fits?: CsvTable): string {
  const delta = column(table, "delta");
  const t = column(table, "t");
  const d = column(table, "d");
  const deltas = [...new Set(delta)];
  const frame = DEFAULT_FRAME;
  const area = plotArea(frame);
  const xS = linearScale(extent(t), area.x);
  const positive = d.filter((v) => v > 0);
  if (positive.length === 0) {
    throw new Error("all perturbation distances are zero; nothing to plot on a log axis");
  }
  const yS = logScale(logPad(extent(positive)), area.y);
  const rateByDelta = new Map<number, number>();
  if (fits) {
    const fd = column(fits, "delta");
    const fr = column(fits, "rate");
    fd.forEach((dv, i) => rateByDelta.set(dv, fr[i]));
  }
  const body: string[] = [
    axes(
      frame,
      xS,
      yS,
      { x: "t", y: "distance between trajectories", title: "Continuous dependence on initial data" },
      { yLog: true },
    ),
  ];
  const entries: { label: string; color: string }[] = [];
  deltas.forEach((dv, k) => {
    const xs: number[] = [];
    const ys: number[] = [];
    delta.forEach((row, i) => {
      if (row === dv && d[i] > 0) {
        xs.push(xS(t[i]));
        ys.push(yS(d[i]));
      }
    });
    const color = PALETTE[k % PALETTE.length];
    body.push(polyline(xs, ys, color));
    const rate = rateByDelta.get(dv);
    const label =
      rate !== undefined
        ? `delta=${dv.toExponential(0)} (rate ${rate.toPrecision(3)})`
        : `delta=${dv.toExponential(0)}`;
    entries.push({ label, color });
  });
  body.push(legend(frame, entries));
  return svgDocument(frame, body);
}

export function inequalityRatios(table: CsvTable, constants?: CsvTable): string {
  const cases = column(table, "case");
  const ratio = column(table, "ratio");
  const frame = DEFAULT_FRAME;
  const area = plotArea(frame);
  const xS = linearScale(extent(cases), area.x);
  let maxRatio: number | undefined;
  if (constants) {
    const values = column(constants, "max_ratio");
    maxRatio = values[0];
  }
  const yDomainSrc = maxRatio === undefined ? ratio : [...ratio, maxRatio];
  const yS = linearScale(extent([...yDomainSrc, 0]), area.y);
  const names = rawColumn(table, "inequality");
  const title =
    names.length > 0 && typeof names[0] === "string"
      ? `Inequality ratios: ${names[0]}`
      : "Inequality ratios";
  const body = [
    axes(frame, xS, yS, { x: "case index", y: "lhs / rhs", title }),
    circles(cases.map(xS), ratio.map(yS), PALETTE[0], 1.8),
  ];
  if (maxRatio !== undefined) {
    const y = yS(maxRatio);
    body.push(polyline([area.x[0], area.x[1]], [y, y], PALETTE[1], { dash: "6 3" }));
    body.push(
      text(area.x[1] - 6, y - 6, `max ratio = ${maxRatio.toPrecision(6)}`, {
        anchor: "end",
        size: 11,
        color: PALETTE[1],
      }),
    );
  }
  return svgDocument(frame, body);
}

export function renderFigure(kind: FigureKind, tables: CsvTable[]): string {
  const expected = FIGURE_INPUTS[kind];
  const required = kind === "continuous_dependence" || kind === "inequality_ratios" ? 1 : expected.length;
  if (tables.length < required || tables.length > expected.length) {
    throw new Error(
      `${kind} takes ${required === expected.length ? expected.length : `${required} or ${expected.length}`} input(s): ${expected.join(", ")}`,
    );
  }
  tables.forEach((tbl, i) => {
    if (tbl.kind !== expected[i]) {
      throw new Error(`${kind} input ${i + 1} must be a ${expected[i]} CSV, got ${tbl.kind}`);
    }
  });
  switch (kind) {
    case "energy_budget":
      return energyBudget(tables[0]);
    case "enstrophy_margin":
      return enstrophyMargin(tables[0]);
    case "convergence":
      return convergence(tables[0]);
    case "continuous_dependence":
      return continuousDependence(tables[0], tables[1]);
    case "inequality_ratios":
      return inequalityRatios(tables[0], tables[1]);
  }
}
