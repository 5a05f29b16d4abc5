/**
 * Minimal dependency-free SVG line-plot rendering.
 *
 * A figure is a vertical stack of panels; each panel draws polyline series
 * against linear axes with tick labels, a title, and an optional legend or
 * annotation string.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dashed?: boolean;
}

export interface PanelSpec {
  title: string;
  xlabel: string;
  ylabel: string;
  series: Series[];
  annotation?: string;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];
const PANEL_W = 640;
const PANEL_H = 240;
const MARGIN = { left: 70, right: 20, top: 32, bottom: 40 };

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 1e-3 : 1;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const best = candidates.find((s) => span / s <= count + 1) ?? 10 * step;
  const first = Math.ceil(lo / best) * best;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += best) out.push(v);
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function renderPanel(panel: PanelSpec, yOffset: number): string {
  const xs = panel.series.flatMap((s) => s.x);
  const ys = panel.series.flatMap((s) => s.y);
  const [x0, x1] = extent(xs);
  const [y0, y1] = extent(ys);
  const plotW = PANEL_W - MARGIN.left - MARGIN.right;
  const plotH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const px = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * plotW;
  const py = (v: number) => yOffset + MARGIN.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<rect x="${MARGIN.left}" y="${yOffset + MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#999"/>`,
  );
  for (const t of ticks(x0, x1)) {
    const x = px(t);
    parts.push(`<line x1="${x}" y1="${yOffset + MARGIN.top + plotH}" x2="${x}" y2="${yOffset + MARGIN.top + plotH + 4}" stroke="#333"/>`);
    parts.push(`<text x="${x}" y="${yOffset + MARGIN.top + plotH + 16}" font-size="10" text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of ticks(y0, y1)) {
    const y = py(t);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#333"/>`);
    parts.push(`<text x="${MARGIN.left - 7}" y="${y + 3}" font-size="10" text-anchor="end">${fmt(t)}</text>`);
  }
  panel.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const pts = s.x.map((v, idx) => `${px(v).toFixed(2)},${py(s.y[idx]).toFixed(2)}`).join(" ");
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`);
    const lx = MARGIN.left + plotW - 120;
    const ly = yOffset + MARGIN.top + 14 + 13 * i;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 18}" y2="${ly - 4}" stroke="${color}" stroke-width="1.5"${dash}/>`);
    parts.push(`<text x="${lx + 22}" y="${ly}" font-size="10">${esc(s.label)}</text>`);
  });
  parts.push(`<text x="${MARGIN.left}" y="${yOffset + 18}" font-size="12" font-weight="bold">${esc(panel.title)}</text>`);
  if (panel.annotation) {
    parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${yOffset + 18}" font-size="10" fill="#555" text-anchor="middle">${esc(panel.annotation)}</text>`);
  }
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${yOffset + PANEL_H - 8}" font-size="10" text-anchor="middle">${esc(panel.xlabel)}</text>`);
  parts.push(
    `<text x="16" y="${yOffset + MARGIN.top + plotH / 2}" font-size="10" text-anchor="middle" transform="rotate(-90 16 ${yOffset + MARGIN.top + plotH / 2})">${esc(panel.ylabel)}</text>`,
  );
  return parts.join("\n");
}

export function renderFigure(panels: PanelSpec[]): string {
  const height = panels.length * PANEL_H;
  const body = panels.map((p, i) => renderPanel(p, i * PANEL_H)).join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL_W}" height="${height}" viewBox="0 0 ${PANEL_W} ${height}">\n` +
    `<rect width="${PANEL_W}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
