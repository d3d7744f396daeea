/** Minimal headless SVG line-chart builder (no DOM, deterministic output). */

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

/** 1-2-5 tick positions covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

export function extent(arrays: ArrayLike<number>[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const a of arrays) {
    for (let i = 0; i < a.length; i++) {
      const v = a[i];
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) {
    const pad = Math.abs(lo) || 1;
    return [lo - 0.05 * pad, hi + 0.05 * pad];
  }
  const pad = 0.04 * (hi - lo);
  return [lo - pad, hi + pad];
}

const fmt = (v: number) => (Math.round(v * 100) / 100).toString();

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return parseFloat(v.toPrecision(6)).toString();
}

export interface Trace {
  x: ArrayLike<number>;
  y: ArrayLike<number>;
  stroke: string;
  width?: number;
  opacity?: number;
  dash?: string;
}

export interface Band {
  x: ArrayLike<number>;
  lo: ArrayLike<number>;
  hi: ArrayLike<number>;
  fill: string;
  opacity?: number;
}

export interface PanelSpec {
  ylabel: string;
  traces: Trace[];
  bands?: Band[];
  yDomain?: [number, number];
}

const MAX_POINTS = 1200;

function polyline(xs: Scale, ys: Scale, t: Trace): string {
  const n = t.x.length;
  const step = Math.max(1, Math.ceil(n / MAX_POINTS));
  const pts: string[] = [];
  for (let i = 0; i < n; i += step) pts.push(`${fmt(xs(t.x[i]))},${fmt(ys(t.y[i]))}`);
  if ((n - 1) % step !== 0) pts.push(`${fmt(xs(t.x[n - 1]))},${fmt(ys(t.y[n - 1]))}`);
  const dash = t.dash ? ` stroke-dasharray="${t.dash}"` : "";
  return `<polyline fill="none" stroke="${t.stroke}" stroke-width="${t.width ?? 1}"` +
    ` stroke-opacity="${t.opacity ?? 1}"${dash} points="${pts.join(" ")}"/>`;
}

function bandPath(xs: Scale, ys: Scale, b: Band): string {
  const n = b.x.length;
  const step = Math.max(1, Math.ceil(n / MAX_POINTS));
  const fwd: string[] = [];
  const back: string[] = [];
  for (let i = 0; i < n; i += step) {
    fwd.push(`${fmt(xs(b.x[i]))},${fmt(ys(b.lo[i]))}`);
    back.push(`${fmt(xs(b.x[i]))},${fmt(ys(b.hi[i]))}`);
  }
  back.reverse();
  return `<path fill="${b.fill}" fill-opacity="${b.opacity ?? 0.25}" stroke="none" ` +
    `d="M${fwd.join(" L")} L${back.join(" L")} Z"/>`;
}

const WIDTH = 960;
const PANEL_H = 170;
const MARGIN = { left: 64, right: 16, top: 26, bottom: 40 };

/** Stack panels over a shared time axis into one SVG document. */
export function renderFigure(title: string, xlabel: string, xDomain: [number, number],
                             panels: PanelSpec[]): string {
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const height = MARGIN.top + panels.length * PANEL_H + MARGIN.bottom;
  const xs = linearScale(xDomain, [MARGIN.left, MARGIN.left + innerW]);
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${height}" ` +
    `viewBox="0 0 ${WIDTH} ${height}" font-family="sans-serif" font-size="11">`);
  parts.push(`<rect width="${WIDTH}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="16" text-anchor="middle" font-size="14">${title}</text>`);

  panels.forEach((panel, pi) => {
    const top = MARGIN.top + pi * PANEL_H;
    const bot = top + PANEL_H - 28;
    const yDomain = panel.yDomain ??
      extent([...panel.traces.map((t) => t.y), ...(panel.bands ?? []).flatMap((b) => [b.lo, b.hi])]);
    const ys = linearScale(yDomain, [bot, top + 8]);
    parts.push(`<g data-panel="${panel.ylabel}">`);
    parts.push(`<rect x="${MARGIN.left}" y="${top + 8}" width="${innerW}" ` +
      `height="${bot - top - 8}" fill="none" stroke="#999"/>`);
    for (const tv of niceTicks(yDomain[0], yDomain[1], 4)) {
      const y = fmt(ys(tv));
      parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + innerW}" y2="${y}" ` +
        `stroke="#ddd" stroke-width="0.5"/>`);
      parts.push(`<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" ` +
        `dominant-baseline="middle">${fmtTick(tv)}</text>`);
    }
    for (const tv of niceTicks(xDomain[0], xDomain[1], 8)) {
      const x = fmt(xs(tv));
      parts.push(`<line x1="${x}" y1="${bot}" x2="${x}" y2="${bot + 4}" stroke="#666"/>`);
      if (pi === panels.length - 1) {
        parts.push(`<text x="${x}" y="${bot + 16}" text-anchor="middle">${fmtTick(tv)}</text>`);
      }
    }
    for (const b of panel.bands ?? []) parts.push(bandPath(xs, ys, b));
    for (const t of panel.traces) parts.push(polyline(xs, ys, t));
    parts.push(`<text transform="rotate(-90)" x="${-(top + (PANEL_H - 20) / 2)}" ` +
      `y="16" text-anchor="middle">${panel.ylabel}</text>`);
    parts.push("</g>");
  });

  parts.push(`<text x="${MARGIN.left + innerW / 2}" y="${height - 8}" ` +
    `text-anchor="middle">${xlabel}</text>`);
  parts.push("</svg>");
  return parts.join("\n");
}

/** Deterministic per-run stroke colour. */
export function runColor(index: number, total: number): string {
  const hue = Math.round((360 * index) / Math.max(total, 1));
  return `hsl(${hue},60%,45%)`;
}
