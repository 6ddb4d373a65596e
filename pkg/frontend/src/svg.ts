/**
 * Minimal deterministic SVG builder: linear/log scales, polylines, axes,
 * scatter markers, and text labels assembled into a plain SVG string.
 */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

function fmt(v: number): string {
  // Fixed 6-significant-digit formatting keeps output byte-deterministic.
  if (!isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  const s = v.toPrecision(6);
  return s.includes(".") || s.includes("e")
    ? s.replace(/\.?0+($|e)/, "$1")
    : s;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const inner = linearScale([Math.log10(d0), Math.log10(d1)], range);
  const f = ((v: number) => {
    if (v <= 0) throw new Error(`log scale got non-positive value ${v}`);
    return inner(Math.log10(v));
  }) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function extent(values: number[]): [number, number] {
  if (values.length === 0) throw new Error("extent of empty array");
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) throw new Error("extent: no finite values");
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - pad, hi + pad];
  }
  return [lo, hi];
}

/** Expand a positive extent multiplicatively for log axes. */
export function logPad(domain: [number, number], factor = 1.5): [number, number] {
  return [domain[0] / factor, domain[1] * factor];
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 720,
  height: 480,
  margin: { top: 40, right: 30, bottom: 50, left: 70 },
};

export function plotArea(frame: Frame): { x: [number, number]; y: [number, number] } {
  return {
    x: [frame.margin.left, frame.width - frame.margin.right],
    y: [frame.height - frame.margin.bottom, frame.margin.top],
  };
}

export function polyline(
  xs: number[],
  ys: number[],
  color: string,
  opts: { dash?: string; width?: number } = {},
): string {
  const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
  const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
  const w = opts.width ?? 1.5;
  return `<polyline fill="none" stroke="${color}" stroke-width="${w}"${dash} points="${pts}"/>`;
}

export function circles(xs: number[], ys: number[], color: string, r = 2.5): string {
  return xs
    .map((x, i) => `<circle cx="${fmt(x)}" cy="${fmt(ys[i])}" r="${r}" fill="${color}"/>`)
    .join("");
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { anchor?: string; size?: number; color?: string; rotate?: boolean } = {},
): string {
  const anchor = opts.anchor ?? "start";
  const size = opts.size ?? 12;
  const color = opts.color ?? "#000";
  const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
    `font-family="sans-serif" font-size="${size}" fill="${color}"${transform}>${escapeXml(content)}</text>`
  );
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function logTicks(domain: [number, number]): number[] {
  const ticks: number[] = [];
  const lo = Math.ceil(Math.log10(domain[0]) - 1e-9);
  const hi = Math.floor(Math.log10(domain[1]) + 1e-9);
  for (let e = lo; e <= hi; e++) ticks.push(Math.pow(10, e));
  if (ticks.length === 0) ticks.push(domain[0], domain[1]);
  return ticks;
}

function linearTicks(domain: [number, number], count = 6): number[] {
  const span = domain[1] - domain[0];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((c) => span / c <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(domain[0] / chosen) * chosen; v <= domain[1] + 1e-12 * span; v += chosen) {
    ticks.push(Math.abs(v) < chosen * 1e-9 ? 0 : v);
  }
  return ticks;
}

function tickLabel(v: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

export function axes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  labels: { x: string; y: string; title: string },
  opts: { xLog?: boolean; yLog?: boolean } = {},
): string {
  const area = plotArea(frame);
  const parts: string[] = [];
  const [x0, x1] = area.x;
  const [y0, y1] = area.y; // y0 bottom, y1 top
  parts.push(
    `<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" height="${fmt(y0 - y1)}" fill="none" stroke="#333"/>`,
  );
  const xTicks = opts.xLog ? logTicks(xScale.domain) : linearTicks(xScale.domain);
  for (const v of xTicks) {
    if (v < xScale.domain[0] - 1e-12 || v > xScale.domain[1] * (opts.xLog ? 1 + 1e-12 : 1) + 1e-12)
      continue;
    const px = xScale(v);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 5)}" stroke="#333"/>`);
    parts.push(text(px, y0 + 18, tickLabel(v, !!opts.xLog), { anchor: "middle", size: 10 }));
  }
  const yTicks = opts.yLog ? logTicks(yScale.domain) : linearTicks(yScale.domain);
  for (const v of yTicks) {
    const py = yScale(v);
    parts.push(`<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#333"/>`);
    parts.push(text(x0 - 8, py + 3, tickLabel(v, !!opts.yLog), { anchor: "end", size: 10 }));
  }
  parts.push(text((x0 + x1) / 2, frame.height - 12, labels.x, { anchor: "middle" }));
  parts.push(text(18, (y0 + y1) / 2, labels.y, { anchor: "middle", rotate: true }));
  parts.push(text((x0 + x1) / 2, frame.margin.top - 16, labels.title, { anchor: "middle", size: 14 }));
  return parts.join("\n");
}

export function legend(frame: Frame, entries: { label: string; color: string; dash?: string }[]): string {
  const area = plotArea(frame);
  const x = area.x[0] + 10;
  let y = area.y[1] + 14;
  const parts: string[] = [];
  for (const e of entries) {
    const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(y - 4)}" x2="${fmt(x + 22)}" y2="${fmt(y - 4)}" stroke="${e.color}" stroke-width="2"${dash}/>`);
    parts.push(text(x + 28, y, e.label, { size: 11 }));
    y += 16;
  }
  return parts.join("\n");
}

export function document(frame: Frame, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" ` +
    `viewBox="0 0 ${frame.width} ${frame.height}">\n` +
    `<rect width="${frame.width}" height="${frame.height}" fill="#fff"/>\n` +
    body.join("\n") +
    `\n</svg>\n`
  );
}
