/**
 * Minimal deterministic SVG plotting: fixed canvas, fixed style, no
 * timestamps or random ids, so identical inputs yield identical bytes.
 */

export type Scale = "linear" | "log";

export interface Axes {
  xScale: Scale;
  yScale: Scale;
  xLabel: string;
  yLabel: string;
  title: string;
}

export const WIDTH = 640;
export const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 40, bottom: 50 };

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export class RenderError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "RenderError";
  }
}

function fmt(x: number): string {
  // fixed short representation for coordinates: deterministic and stable
  return x.toFixed(2);
}

export class Frame {
  private xMin: number;
  private xMax: number;
  private yMin: number;
  private yMax: number;

  constructor(
    readonly axes: Axes,
    xValues: number[],
    yValues: number[],
  ) {
    const xs = xValues.filter((v) => Number.isFinite(v) && (axes.xScale !== "log" || v > 0));
    const ys = yValues.filter((v) => Number.isFinite(v) && (axes.yScale !== "log" || v > 0));
    if (xs.length === 0 || ys.length === 0) {
      throw new RenderError("no finite data points in plotting range");
    }
    this.xMin = Math.min(...xs);
    this.xMax = Math.max(...xs);
    this.yMin = Math.min(...ys);
    this.yMax = Math.max(...ys);
    if (this.xMin === this.xMax) {
      this.xMin -= 0.5;
      this.xMax += 0.5;
    }
    if (this.yMin === this.yMax) {
      this.yMin -= 0.5;
      this.yMax += 0.5;
    }
  }

  private tx(v: number): number {
    const { xScale } = this.axes;
    const [a, b] =
      xScale === "log" ? [Math.log(this.xMin), Math.log(this.xMax)] : [this.xMin, this.xMax];
    const t = ((xScale === "log" ? Math.log(v) : v) - a) / (b - a);
    return MARGIN.left + t * PLOT_W;
  }

  private ty(v: number): number {
    const { yScale } = this.axes;
    const [a, b] =
      yScale === "log" ? [Math.log(this.yMin), Math.log(this.yMax)] : [this.yMin, this.yMax];
    const t = ((yScale === "log" ? Math.log(v) : v) - a) / (b - a);
    return MARGIN.top + (1 - t) * PLOT_H;
  }

  inDomain(x: number, y: number): boolean {
    if (!Number.isFinite(x) || !Number.isFinite(y)) return false;
    if (this.axes.xScale === "log" && x <= 0) return false;
    if (this.axes.yScale === "log" && y <= 0) return false;
    return true;
  }

  polyline(xs: number[], ys: number[], stroke: string, dash?: string): string {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (this.inDomain(xs[i], ys[i])) {
        pts.push(`${fmt(this.tx(xs[i]))},${fmt(this.ty(ys[i]))}`);
      }
    }
    if (pts.length === 0) throw new RenderError("polyline has no drawable points");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    return `<polyline fill="none" stroke="${stroke}" stroke-width="1.5"${dashAttr} points="${pts.join(" ")}"/>`;
  }

  band(xs: number[], lo: number[], hi: number[], fill: string): string {
    const fwd: string[] = [];
    const back: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (this.inDomain(xs[i], lo[i]) && this.inDomain(xs[i], hi[i])) {
        fwd.push(`${fmt(this.tx(xs[i]))},${fmt(this.ty(hi[i]))}`);
        back.push(`${fmt(this.tx(xs[i]))},${fmt(this.ty(lo[i]))}`);
      }
    }
    if (fwd.length === 0) throw new RenderError("band has no drawable points");
    back.reverse();
    return `<polygon fill="${fill}" fill-opacity="0.25" stroke="none" points="${fwd.join(" ")} ${back.join(" ")}"/>`;
  }

  markers(xs: number[], ys: number[], fill: string): string {
    const out: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (this.inDomain(xs[i], ys[i])) {
        out.push(
          `<circle cx="${fmt(this.tx(xs[i]))}" cy="${fmt(this.ty(ys[i]))}" r="3" fill="${fill}"/>`,
        );
      }
    }
    return out.join("\n");
  }

  hline(y: number, stroke: string): string {
    const yy = fmt(this.ty(y));
    return `<line x1="${MARGIN.left}" y1="${yy}" x2="${MARGIN.left + PLOT_W}" y2="${yy}" stroke="${stroke}" stroke-width="1.5" stroke-dasharray="6 3"/>`;
  }

  private ticks(scale: Scale, min: number, max: number): number[] {
    if (scale === "log") {
      const lo = Math.ceil(Math.log10(min));
      const hi = Math.floor(Math.log10(max));
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(Math.pow(10, e));
      if (out.length === 0) out.push(min, max);
      return out;
    }
    const span = max - min;
    const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
    const mult = span / step > 20 ? 5 : span / step > 8 ? 2 : 1;
    const s = step * mult;
    const out: number[] = [];
    for (let v = Math.ceil(min / s) * s; v <= max + 1e-12 * span; v += s) out.push(v);
    return out;
  }

  private tickLabel(v: number): string {
    if (v === 0) return "0";
    const e = Math.floor(Math.log10(Math.abs(v)));
    if (e < -3 || e > 4) return v.toExponential(0);
    return Number(v.toPrecision(3)).toString();
  }

  chrome(): string {
    const parts: string[] = [];
    parts.push(
      `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const v of this.ticks(this.axes.xScale, this.xMin, this.xMax)) {
      const x = fmt(this.tx(v));
      parts.push(
        `<line x1="${x}" y1="${MARGIN.top + PLOT_H}" x2="${x}" y2="${MARGIN.top + PLOT_H + 5}" stroke="#333"/>`,
        `<text x="${x}" y="${MARGIN.top + PLOT_H + 18}" font-size="11" text-anchor="middle">${this.tickLabel(v)}</text>`,
      );
    }
    for (const v of this.ticks(this.axes.yScale, this.yMin, this.yMax)) {
      const y = fmt(this.ty(v));
      parts.push(
        `<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#333"/>`,
        `<text x="${MARGIN.left - 8}" y="${y}" font-size="11" text-anchor="end" dominant-baseline="middle">${this.tickLabel(v)}</text>`,
      );
    }
    parts.push(
      `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle">${this.axes.xLabel}</text>`,
      `<text x="18" y="${MARGIN.top + PLOT_H / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${this.axes.yLabel}</text>`,
      `<text x="${MARGIN.left + PLOT_W / 2}" y="24" font-size="15" text-anchor="middle">${this.axes.title}</text>`,
    );
    return parts.join("\n");
  }
}

export function document(body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
