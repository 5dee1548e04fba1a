import { Painter, WIDTH, HEIGHT, drawChart } from "./layout.js";
import { ChartModel } from "./types.js";

const MONO_ADVANCE = 0.615; // em advance of the monospace stack we request

class SvgPainter implements Painter {
  parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, color: string): void {
    this.parts.push(
      `<rect x="${x}" y="${y}" width="${w}" height="${h}" fill="${color}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void {
    this.parts.push(
      `<line x1="${r(x1)}" y1="${r(y1)}" x2="${r(x2)}" y2="${r(y2)}" ` +
        `stroke="${color}" stroke-width="${width}" stroke-linecap="round"/>`,
    );
  }

  circle(cx: number, cy: number, radius: number, color: string): void {
    this.parts.push(
      `<circle cx="${r(cx)}" cy="${r(cy)}" r="${radius}" fill="${color}"/>`,
    );
  }

  text(x: number, y: number, s: string, color: string, size: number): void {
    const escaped = s
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${r(x)}" y="${r(y)}" fill="${color}" font-size="${size}" ` +
        `font-family="DejaVu Sans Mono, Menlo, monospace">${escaped}</text>`,
    );
  }

  textWidth(s: string, size: number): number {
    return s.length * size * MONO_ADVANCE;
  }
}

function r(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

export function renderSvg(model: ChartModel): string {
  const painter = new SvgPainter();
  drawChart(model, painter);
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
    `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    painter.parts.join("\n") +
    "\n</svg>\n"
  );
}
