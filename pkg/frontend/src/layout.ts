import { ChartModel } from "./types.js";

/** Drawing primitives implemented by both the SVG and PNG back ends. */
export interface Painter {
  rect(x: number, y: number, w: number, h: number, color: string): void;
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void;
  circle(cx: number, cy: number, r: number, color: string): void;
  text(x: number, y: number, s: string, color: string, size: number): void;
  textWidth(s: string, size: number): number;
}

export const WIDTH = 800;
export const HEIGHT = 520;
const MARGIN = { left: 72, right: 220, top: 48, bottom: 56 };
const AXIS = "#333333";
const GRID = "#dddddd";

function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 0.5;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= target)!;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push(Number(t.toFixed(12)));
  }
  return ticks;
}

function fmt(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toFixed(3);
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

/** Draw the whole figure through a painter; identical for SVG and PNG. */
export function drawChart(model: ChartModel, p: Painter): void {
  p.rect(0, 0, WIDTH, HEIGHT, "#ffffff");
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const xs = model.series.flatMap((s) => s.points.map((pt) => pt.x));
  const ys = model.series.flatMap((s) =>
    s.points.flatMap((pt) => [pt.y - (pt.err ?? 0), pt.y + (pt.err ?? 0)]),
  );
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys, 0);
  let yHi = Math.max(...ys);
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  yHi += (yHi - yLo) * 0.05 || 0.5;

  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    p.line(MARGIN.left, y, MARGIN.left + plotW, y, GRID, 1);
    p.line(MARGIN.left - 4, y, MARGIN.left, y, AXIS, 1);
    const label = fmt(t);
    p.text(MARGIN.left - 8 - p.textWidth(label, 11), y + 4, label, AXIS, 11);
  }
  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    p.line(x, MARGIN.top + plotH, x, MARGIN.top + plotH + 4, AXIS, 1);
    const label = fmt(t);
    p.text(x - p.textWidth(label, 11) / 2, MARGIN.top + plotH + 18, label, AXIS, 11);
  }
  p.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, AXIS, 1.5);
  p.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW,
         MARGIN.top + plotH, AXIS, 1.5);

  p.text(MARGIN.left, MARGIN.top - 18, model.title, "#000000", 14);
  p.text(
    MARGIN.left + plotW / 2 - p.textWidth(model.xLabel, 12) / 2,
    HEIGHT - 14, model.xLabel, AXIS, 12,
  );
  p.text(8, MARGIN.top - 18, model.yLabel, AXIS, 12);

  for (const series of model.series) {
    const pts = series.points;
    for (let i = 1; i < pts.length; i++) {
      p.line(sx(pts[i - 1].x), sy(pts[i - 1].y), sx(pts[i].x), sy(pts[i].y),
             series.color, 2);
    }
    for (const pt of pts) {
      if (pt.err && pt.err > 0) {
        const x = sx(pt.x);
        p.line(x, sy(pt.y - pt.err), x, sy(pt.y + pt.err), series.color, 1);
        p.line(x - 4, sy(pt.y - pt.err), x + 4, sy(pt.y - pt.err), series.color, 1);
        p.line(x - 4, sy(pt.y + pt.err), x + 4, sy(pt.y + pt.err), series.color, 1);
      }
      p.circle(sx(pt.x), sy(pt.y), 3.2, series.color);
    }
  }

  let legendY = MARGIN.top + 8;
  const legendX = MARGIN.left + plotW + 16;
  for (const series of model.series) {
    p.line(legendX, legendY - 4, legendX + 22, legendY - 4, series.color, 2.5);
    p.text(legendX + 28, legendY, series.name, "#000000", 11);
    legendY += 18;
  }
  if (model.skippedRows > 0) {
    p.text(legendX, HEIGHT - 14, `skipped rows: ${model.skippedRows}`,
           "#aa0000", 11);
  }
}
