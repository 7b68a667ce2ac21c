/**
 * Minimal dependency-free SVG charts. Everything renders in grayscale with
 * distinct dash patterns and markers, so printed or desaturated figures stay
 * readable.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  dash?: string;
  width?: number;
  gray?: number; // 0 = black .. 255 = white
  marker?: boolean;
}

export interface HLine {
  y: number;
  label?: string;
  dash?: string;
}

export interface AxisOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  y2Label?: string;
  hlines?: HLine[];
  xTickLabels?: string[]; // categorical x positions 0..n-1
}

const W = 760;
const H = 440;
const MARGIN = { left: 70, right: 80, top: 44, bottom: 56 };

export const DASH_CYCLE = ["", "8 4", "2 3", "10 3 2 3", "5 5", "1 4"];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Scale {
  (v: number): number;
  min: number;
  max: number;
}

function makeScale(values: number[], outLo: number, outHi: number, pad = 0.05): Scale {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (!Number.isFinite(min) || !Number.isFinite(max)) {
    throw new Error("cannot scale non-finite data");
  }
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const span = max - min;
  min -= pad * span;
  max += pad * span;
  const f = (v: number) => outLo + ((v - min) / (max - min)) * (outHi - outLo);
  return Object.assign(f, { min, max });
}

function ticks(lo: number, hi: number, count = 5): number[] {
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(rawStep) || 1)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rawStep) ?? rawStep;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += step) out.push(Number(v.toPrecision(12)));
  return out;
}

function fmt(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e5 || a < 1e-3)) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

function gray(level: number | undefined): string {
  const g = level ?? 0;
  return `rgb(${g},${g},${g})`;
}

function frame(title: string, xLabel: string, yLabel: string, y2Label?: string): string[] {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${W / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`,
    `<text x="${(MARGIN.left + W - MARGIN.right) / 2}" y="${H - 12}" text-anchor="middle" font-size="13">${esc(xLabel)}</text>`,
    `<text x="18" y="${(MARGIN.top + H - MARGIN.bottom) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(MARGIN.top + H - MARGIN.bottom) / 2})">${esc(yLabel)}</text>`,
  ];
  if (y2Label) {
    parts.push(
      `<text x="${W - 16}" y="${(MARGIN.top + H - MARGIN.bottom) / 2}" text-anchor="middle" font-size="13" transform="rotate(90 ${W - 16} ${(MARGIN.top + H - MARGIN.bottom) / 2})">${esc(y2Label)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${W - MARGIN.left - MARGIN.right}" height="${H - MARGIN.top - MARGIN.bottom}" fill="none" stroke="black"/>`,
  );
  return parts;
}

function legend(labels: { label: string; dash?: string; gray?: number }[]): string {
  const entries = labels.map((s, i) => {
    const y = MARGIN.top + 14 + 18 * i;
    const x = MARGIN.left + 12;
    return (
      `<line x1="${x}" y1="${y}" x2="${x + 30}" y2="${y}" stroke="${gray(s.gray)}" stroke-width="1.7" stroke-dasharray="${s.dash ?? ""}"/>` +
      `<text x="${x + 36}" y="${y + 4}" font-size="12">${esc(s.label)}</text>`
    );
  });
  return entries.join("");
}

function polyline(xs: number[], ys: number[], sx: Scale, sy: Scale, s: Series): string {
  const pts = xs.map((x, i) => `${sx(x).toFixed(2)},${sy(ys[i]!).toFixed(2)}`).join(" ");
  let out = `<polyline points="${pts}" fill="none" stroke="${gray(s.gray)}" stroke-width="${s.width ?? 1.7}" stroke-dasharray="${s.dash ?? ""}"/>`;
  if (s.marker) {
    out += xs
      .map((x, i) => `<circle cx="${sx(x).toFixed(2)}" cy="${sy(ys[i]!).toFixed(2)}" r="3" fill="${gray(s.gray)}"/>`)
      .join("");
  }
  return out;
}

function xAxis(parts: string[], sx: Scale, labels?: string[]): void {
  const y0 = H - MARGIN.bottom;
  if (labels) {
    labels.forEach((label, i) => {
      const x = sx(i);
      parts.push(`<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 5}" stroke="black"/>`);
      parts.push(`<text x="${x}" y="${y0 + 20}" text-anchor="middle" font-size="12">${esc(label)}</text>`);
    });
  } else {
    for (const t of ticks(sx.min, sx.max)) {
      const x = sx(t);
      parts.push(`<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 5}" stroke="black"/>`);
      parts.push(`<text x="${x}" y="${y0 + 20}" text-anchor="middle" font-size="12">${fmt(t)}</text>`);
    }
  }
}

function yAxis(parts: string[], sy: Scale, side: "left" | "right" = "left"): void {
  const x0 = side === "left" ? MARGIN.left : W - MARGIN.right;
  const dx = side === "left" ? -5 : 5;
  const anchor = side === "left" ? "end" : "start";
  for (const t of ticks(sy.min, sy.max)) {
    const y = sy(t);
    parts.push(`<line x1="${x0}" y1="${y}" x2="${x0 + dx}" y2="${y}" stroke="black"/>`);
    parts.push(`<text x="${x0 + dx * 2}" y="${y + 4}" text-anchor="${anchor}" font-size="12">${fmt(t)}</text>`);
  }
}

export function lineChart(series: Series[], opts: AxisOptions): string {
  if (series.length === 0 || series.every((s) => s.x.length === 0)) {
    throw new Error("line chart needs at least one non-empty series");
  }
  const xsAll = series.flatMap((s) => s.x);
  const ysAll = series.flatMap((s) => s.y).concat((opts.hlines ?? []).map((h) => h.y));
  const sx = makeScale(xsAll, MARGIN.left, W - MARGIN.right, 0.02);
  const sy = makeScale(ysAll, H - MARGIN.bottom, MARGIN.top);
  const parts = frame(opts.title, opts.xLabel, opts.yLabel);
  xAxis(parts, sx, opts.xTickLabels);
  yAxis(parts, sy);
  for (const h of opts.hlines ?? []) {
    const y = sy(h.y);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${W - MARGIN.right}" y2="${y}" stroke="black" stroke-width="1" stroke-dasharray="${h.dash ?? "3 3"}"/>`,
    );
    if (h.label) {
      parts.push(`<text x="${W - MARGIN.right - 4}" y="${y - 4}" text-anchor="end" font-size="11">${esc(h.label)}</text>`);
    }
  }
  series.forEach((s, i) => {
    parts.push(polyline(s.x, s.y, sx, sy, { dash: DASH_CYCLE[i % DASH_CYCLE.length], gray: 0, ...s }));
  });
  parts.push(legend(series.map((s, i) => ({ label: s.label, dash: s.dash ?? DASH_CYCLE[i % DASH_CYCLE.length], gray: s.gray }))));
  parts.push("</svg>");
  return parts.join("\n");
}

export interface DualSeries {
  label: string;
  x: number[];
  y: number[];
  axis: "left" | "right";
  dash?: string;
  marker?: boolean;
}

export function dualAxisChart(series: DualSeries[], opts: AxisOptions): string {
  const left = series.filter((s) => s.axis === "left");
  const right = series.filter((s) => s.axis === "right");
  if (left.length === 0 || right.length === 0) {
    throw new Error("dual-axis chart needs series on both axes");
  }
  const sx = makeScale(series.flatMap((s) => s.x), MARGIN.left, W - MARGIN.right, 0.02);
  const syL = makeScale(left.flatMap((s) => s.y), H - MARGIN.bottom, MARGIN.top);
  const syR = makeScale(right.flatMap((s) => s.y), H - MARGIN.bottom, MARGIN.top);
  const parts = frame(opts.title, opts.xLabel, opts.yLabel, opts.y2Label);
  xAxis(parts, sx, opts.xTickLabels);
  yAxis(parts, syL, "left");
  yAxis(parts, syR, "right");
  series.forEach((s, i) => {
    const sy = s.axis === "left" ? syL : syR;
    parts.push(polyline(s.x, s.y, sx, sy, {
      label: s.label, x: s.x, y: s.y, marker: s.marker,
      dash: s.dash ?? DASH_CYCLE[i % DASH_CYCLE.length], gray: 0,
    }));
  });
  parts.push(legend(series.map((s, i) => ({
    label: `${s.label} (${s.axis})`, dash: s.dash ?? DASH_CYCLE[i % DASH_CYCLE.length], gray: 0,
  }))));
  parts.push("</svg>");
  return parts.join("\n");
}

export interface BarGroup {
  label: string; // x-axis group label
  values: number[]; // one bar per series
}

export function groupedBarChart(groups: BarGroup[], seriesLabels: string[],
                                opts: AxisOptions): string {
  if (groups.length === 0 || seriesLabels.length === 0) {
    throw new Error("bar chart needs groups and series");
  }
  const all = groups.flatMap((g) => g.values);
  const sy = makeScale([0, ...all], H - MARGIN.bottom, MARGIN.top, 0.02);
  const parts = frame(opts.title, opts.xLabel, opts.yLabel);
  yAxis(parts, sy);
  const plotW = W - MARGIN.left - MARGIN.right;
  const groupW = plotW / groups.length;
  const barW = (groupW * 0.7) / seriesLabels.length;
  const shades = seriesLabels.map((_, i) =>
    Math.round((i * 200) / Math.max(1, seriesLabels.length - 1)));
  groups.forEach((g, gi) => {
    const x0 = MARGIN.left + gi * groupW + groupW * 0.15;
    g.values.forEach((v, si) => {
      const y = sy(v);
      const base = sy(Math.max(0, sy.min));
      parts.push(
        `<rect x="${(x0 + si * barW).toFixed(2)}" y="${Math.min(y, base).toFixed(2)}" width="${barW.toFixed(2)}" height="${Math.abs(base - y).toFixed(2)}" fill="${gray(shades[si])}" stroke="black" stroke-width="0.6"/>`,
      );
    });
    parts.push(
      `<text x="${MARGIN.left + gi * groupW + groupW / 2}" y="${H - MARGIN.bottom + 20}" text-anchor="middle" font-size="12">${esc(g.label)}</text>`,
    );
  });
  const legendEntries = seriesLabels.map((label, i) => {
    const y = MARGIN.top + 14 + 18 * i;
    const x = MARGIN.left + 12;
    return (
      `<rect x="${x}" y="${y - 8}" width="14" height="10" fill="${gray(shades[i])}" stroke="black" stroke-width="0.6"/>` +
      `<text x="${x + 20}" y="${y + 1}" font-size="12">${esc(label)}</text>`
    );
  });
  parts.push(legendEntries.join(""));
  parts.push("</svg>");
  return parts.join("\n");
}
