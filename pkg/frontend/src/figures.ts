/**
 * The five figure kinds, each consuming the corresponding versioned CSV
 * schema and never recomputing any mathematics.
 *
 *  profile  eval-kernel/v1     kernel radial profile (typically log-log)
 *  band     heat-kernel/v1     interacting kernel with free-kernel envelope band
 *  curve    spectrum/v1 (xN)   spectral value lambda_beta against beta
 *  overlay  simulate/v1        Monte Carlo variance vs the oracle line
 *  blowup   wellposedness/v1 (xN)  moment estimate blow-up against p
 */

import { numericColumn, parseTable, requireRows, Table } from "./csv.js";
import { Axes, document, Frame, RenderError, Scale } from "./svg.js";

export type FigureKind = "profile" | "band" | "curve" | "overlay" | "blowup";

export interface FigureSpec {
  kind: FigureKind;
  /** raw CSV contents; curve and blowup accept several files (one point each or more) */
  inputs: string[];
  xScale?: Scale;
  yScale?: Scale;
  title?: string;
}

const COLORS = { main: "#1f77b4", secondary: "#d62728", band: "#1f77b4" };

function one(inputs: string[], schema: string): Table {
  if (inputs.length !== 1) {
    throw new RenderError(`figure expects exactly one ${schema} input`);
  }
  const table = parseTable(inputs[0], schema);
  requireRows(table);
  return table;
}

function profile(spec: FigureSpec): string {
  const table = one(spec.inputs, "eval-kernel");
  const xs = numericColumn(table, "radius");
  const ys = numericColumn(table, "value");
  const axes: Axes = {
    xScale: spec.xScale ?? "log",
    yScale: spec.yScale ?? "log",
    xLabel: "radius",
    yLabel: "kernel value",
    title: spec.title ?? "kernel radial profile",
  };
  const frame = new Frame(axes, xs, ys);
  return document([frame.chrome(), frame.polyline(xs, ys, COLORS.main), frame.markers(xs, ys, COLORS.main)].join("\n"));
}

function band(spec: FigureSpec): string {
  const table = one(spec.inputs, "heat-kernel");
  const xs = numericColumn(table, "radius");
  const upper = numericColumn(table, "g_beta");
  const free = numericColumn(table, "p_free");
  const cLow = numericColumn(table, "c_lower_bound");
  const lower = free.map((v, i) => v * cLow[i]);
  const response = numericColumn(table, "r_beta");
  const axes: Axes = {
    xScale: spec.xScale ?? "linear",
    yScale: spec.yScale ?? "linear",
    xLabel: "|y|",
    yLabel: "kernel value",
    title: spec.title ?? "interacting kernel envelope band",
  };
  const frame = new Frame(axes, xs, [...upper, ...lower, ...response]);
  return document(
    [
      frame.chrome(),
      frame.band(xs, lower, upper, COLORS.band),
      frame.polyline(xs, upper, COLORS.main),
      frame.polyline(xs, lower, COLORS.main, "4 3"),
      frame.polyline(xs, response, COLORS.secondary),
    ].join("\n"),
  );
}

function curve(spec: FigureSpec): string {
  if (spec.inputs.length === 0) throw new RenderError("curve figure needs spectrum inputs");
  const points: { beta: number; lam: number }[] = [];
  for (const text of spec.inputs) {
    const table = parseTable(text, "spectrum");
    requireRows(table);
    const betas = numericColumn(table, "beta");
    const lams = numericColumn(table, "lam");
    points.push({ beta: betas[0], lam: lams[0] });
  }
  points.sort((a, b) => a.beta - b.beta);
  const xs = points.map((p) => p.beta);
  const ys = points.map((p) => p.lam);
  const axes: Axes = {
    xScale: spec.xScale ?? "linear",
    yScale: spec.yScale ?? "linear",
    xLabel: "beta",
    yLabel: "lambda_beta",
    title: spec.title ?? "spectral value against the boundary parameter",
  };
  const frame = new Frame(axes, xs, ys);
  return document([frame.chrome(), frame.polyline(xs, ys, COLORS.main), frame.markers(xs, ys, COLORS.main)].join("\n"));
}

function overlay(spec: FigureSpec): string {
  const table = one(spec.inputs, "simulate");
  const ts = numericColumn(table, "time");
  const variance = numericColumn(table, "variance");
  const oracle = numericColumn(table, "variance_oracle_terminal")[0];
  const axes: Axes = {
    xScale: spec.xScale ?? "linear",
    yScale: spec.yScale ?? "linear",
    xLabel: "time",
    yLabel: "variance",
    title: spec.title ?? "Monte Carlo variance against the oracle",
  };
  const frame = new Frame(axes, ts, [...variance, oracle]);
  return document(
    [frame.chrome(), frame.polyline(ts, variance, COLORS.main), frame.hline(oracle, COLORS.secondary)].join("\n"),
  );
}

function blowup(spec: FigureSpec): string {
  if (spec.inputs.length === 0) throw new RenderError("blowup figure needs wellposedness inputs");
  const points: { p: number; estimate: number }[] = [];
  for (const text of spec.inputs) {
    const table = parseTable(text, "wellposedness");
    requireRows(table);
    const ps = numericColumn(table, "p");
    const estimates = numericColumn(table, "estimate");
    for (let i = 0; i < ps.length; i++) points.push({ p: ps[i], estimate: estimates[i] });
  }
  points.sort((a, b) => a.p - b.p);
  const xs = points.map((q) => q.p);
  const ys = points.map((q) => q.estimate);
  const axes: Axes = {
    xScale: spec.xScale ?? "linear",
    yScale: spec.yScale ?? "log",
    xLabel: "p",
    yLabel: "moment estimate",
    title: spec.title ?? "moment blow-up toward the critical exponent",
  };
  const frame = new Frame(axes, xs, ys);
  return document([frame.chrome(), frame.polyline(xs, ys, COLORS.main), frame.markers(xs, ys, COLORS.main)].join("\n"));
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "profile":
      return profile(spec);
    case "band":
      return band(spec);
    case "curve":
      return curve(spec);
    case "overlay":
      return overlay(spec);
    case "blowup":
      return blowup(spec);
  }
}
