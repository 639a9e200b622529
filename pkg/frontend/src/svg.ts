/** Minimal deterministic SVG document builder (no DOM, plain strings). */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const rounded = Math.round(x * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

/** Tick label: short round-trip-ish representation. */
export function fmtTick(x: number): string {
  if (x === 0) return "0";
  const magnitude = Math.abs(x);
  if (magnitude >= 0.01 && magnitude < 10000) {
    return String(Math.round(x * 1000) / 1000);
  }
  return x.toExponential(1).replace("e+", "e");
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, width = 1.5, dash = ""): void {
    if (points.length === 0) return;
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    const coords = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${coords}" fill="none" stroke="${stroke}" ` +
        `stroke-width="${width}"${dashAttr} stroke-linejoin="round"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  /** Distinct marker for quality-flagged points: a small saltire. */
  flagMarker(x: number, y: number, size = 4, stroke = "#d62728"): void {
    this.line(x - size, y - size, x + size, y + size, stroke, 1.4);
    this.line(x - size, y + size, x + size, y - size, stroke, 1.4);
  }

  text(x: number, y: number, content: string, size = 12, anchor = "start", rotate?: number): void {
    const escaped = content
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    const transform = rotate !== undefined ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}"${transform}>` +
        `${escaped}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export interface AxisMap {
  toPx(value: number): number;
  min: number;
  max: number;
  ticks: number[];
}

export function linearAxis(min: number, max: number, pxLo: number, pxHi: number, nTicks = 6): AxisMap {
  const span = max - min || 1;
  const ticks: number[] = [];
  for (let i = 0; i < nTicks; i++) ticks.push(min + (span * i) / (nTicks - 1));
  return {
    min,
    max,
    ticks,
    toPx: (v: number) => pxLo + ((v - min) / span) * (pxHi - pxLo),
  };
}

export function logAxis(min: number, max: number, pxLo: number, pxHi: number, nTicks = 6): AxisMap {
  const lo = Math.log10(min);
  const hi = Math.log10(max);
  const span = hi - lo || 1;
  const ticks: number[] = [];
  for (let i = 0; i < nTicks; i++) ticks.push(Math.pow(10, lo + (span * i) / (nTicks - 1)));
  return {
    min,
    max,
    ticks,
    toPx: (v: number) => pxLo + ((Math.log10(v) - lo) / span) * (pxHi - pxLo),
  };
}
