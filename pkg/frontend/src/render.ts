/**
 * Renderers: one SVG per recipe. Line figures draw one styled curve per
 * distinct value of the series column (solid / dashed / dot-dashed, then
 * repeating with new colours); surface figures draw a heatmap with contour
 * lines on top. Quality-flagged rows get a saltire marker (on the curve
 * when the value exists, on the lower frame when it does not, at the cell
 * centre on surfaces) and are listed in the sidecar report.
 */

import { CsvError, Table, flaggedRows, parseCsv, requireColumn } from "./csv.js";
import { colormap } from "./colormap.js";
import { contourLevels, contourSegments } from "./contour.js";
import { FigureRecipe } from "./recipe.js";
import { AxisMap, Svg, fmtTick, linearAxis, logAxis } from "./svg.js";

export interface RenderResult {
  svg: string;
  flaggedRowCount: number;
  flaggedRowIndices: number[];
}

const MARGIN = { left: 70, right: 90, top: 40, bottom: 55 };
const SERIES_STYLES = ["", "10 5", "2 4 10 4"]; // solid, dashed, dot-dashed
const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

function xValue(recipe: FigureRecipe, raw: number): number {
  return recipe.xTransform === "reciprocal" ? 1 / raw : raw;
}

function frame(svg: Svg, recipe: FigureRecipe, xAxis: AxisMap, yAxis: AxisMap): void {
  const x0 = MARGIN.left;
  const x1 = recipe.width - MARGIN.right;
  const y0 = recipe.height - MARGIN.bottom;
  const y1 = MARGIN.top;
  svg.line(x0, y0, x1, y0, "#333", 1);
  svg.line(x0, y0, x0, y1, "#333", 1);
  for (const tick of xAxis.ticks) {
    const px = xAxis.toPx(tick);
    svg.line(px, y0, px, y0 + 4, "#333", 1);
    svg.text(px, y0 + 18, fmtTick(tick), 11, "middle");
  }
  for (const tick of yAxis.ticks) {
    const py = yAxis.toPx(tick);
    svg.line(x0 - 4, py, x0, py, "#333", 1);
    svg.text(x0 - 7, py + 4, fmtTick(tick), 11, "end");
  }
  svg.text((x0 + x1) / 2, recipe.height - 12, recipe.xlabel, 13, "middle");
  svg.text(18, (y0 + y1) / 2, recipe.ylabel, 13, "middle", -90);
  if (recipe.title) svg.text((x0 + x1) / 2, 24, recipe.title, 15, "middle");
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 0.5;
    return [lo - pad, hi + pad];
  }
  return [lo, hi];
}

export function renderLine(recipe: FigureRecipe, table: Table): RenderResult {
  const source = recipe.sourceCsv;
  if (table.rowCount === 0) {
    throw new CsvError(`${source}: no rows to plot`);
  }
  const xsRaw = requireColumn(table, recipe.x, source);
  const ys = requireColumn(table, recipe.y, source);
  const seriesCol = recipe.seriesBy ? requireColumn(table, recipe.seriesBy, source) : null;
  const flagged = flaggedRows(table);

  const xs = xsRaw.map((v) => (v === null ? null : xValue(recipe, v)));
  const finiteX = xs.filter((v): v is number => v !== null);
  const finiteY = ys.filter((v): v is number => v !== null && Number.isFinite(v));
  const [xLo, xHi] = extent(finiteX);
  const [yLo, yHi] = extent(finiteY.length ? finiteY : [0]);

  const svg = new Svg(recipe.width, recipe.height);
  const makeAxis = recipe.xScale === "log" ? logAxis : linearAxis;
  const xAxis = makeAxis(xLo, xHi, MARGIN.left, recipe.width - MARGIN.right);
  const yAxis = linearAxis(yLo, yHi, recipe.height - MARGIN.bottom, MARGIN.top);
  frame(svg, recipe, xAxis, yAxis);

  const seriesKeys: (number | null)[] = [];
  if (seriesCol) {
    for (const v of seriesCol) {
      if (!seriesKeys.some((k) => Object.is(k, v))) seriesKeys.push(v);
    }
  } else {
    seriesKeys.push(null);
  }

  seriesKeys.forEach((key, si) => {
    const stroke = SERIES_COLORS[si % SERIES_COLORS.length];
    const dash = SERIES_STYLES[si % SERIES_STYLES.length];
    const points: [number, number][] = [];
    let run: [number, number][] = [];
    for (let i = 0; i < table.rowCount; i++) {
      if (seriesCol && !Object.is(seriesCol[i], key)) continue;
      const x = xs[i];
      const y = ys[i];
      if (x === null || y === null || !Number.isFinite(y)) {
        if (run.length) {
          svg.polyline(run, stroke, 1.6, dash);
          run = [];
        }
        continue;
      }
      const px = xAxis.toPx(x);
      const py = yAxis.toPx(y);
      run.push([px, py]);
      points.push([px, py]);
    }
    if (run.length > 1) svg.polyline(run, stroke, 1.6, dash);
    if (points.length === 1) svg.circle(points[0][0], points[0][1], 3, stroke);
    // legend entry
    const lx = recipe.width - MARGIN.right + 8;
    const ly = MARGIN.top + 16 * si + 6;
    svg.line(lx, ly - 4, lx + 22, ly - 4, stroke, 1.6, dash);
    const label = seriesCol ? `${recipe.seriesBy}=${fmtTick(key as number)}` : recipe.y;
    svg.text(lx + 26, ly, label, 10);
  });

  for (const i of flagged) {
    const x = xs[i];
    if (x === null) continue;
    const px = xAxis.toPx(x);
    const y = ys[i];
    if (y !== null && Number.isFinite(y)) {
      svg.flagMarker(px, yAxis.toPx(y));
    } else {
      svg.flagMarker(px, recipe.height - MARGIN.bottom, 3);
    }
  }
  return { svg: svg.render(), flaggedRowCount: flagged.length, flaggedRowIndices: flagged };
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

export function renderSurface(recipe: FigureRecipe, table: Table): RenderResult {
  const source = recipe.sourceCsv;
  if (table.rowCount === 0) {
    throw new CsvError(`${source}: no rows to plot`);
  }
  const xs = requireColumn(table, recipe.x, source);
  const ys = requireColumn(table, recipe.y, source);
  const zs = requireColumn(table, recipe.z!, source);
  const flagged = flaggedRows(table);

  const xVals = uniqueSorted(xs.filter((v): v is number => v !== null));
  const yVals = uniqueSorted(ys.filter((v): v is number => v !== null));
  const nx = xVals.length;
  const ny = yVals.length;
  const xIndex = new Map(xVals.map((v, i) => [v, i]));
  const yIndex = new Map(yVals.map((v, i) => [v, i]));

  // field[iy][ix]; missing or flagged-missing cells stay null
  const field: (number | null)[][] = Array.from({ length: ny }, () =>
    Array.from({ length: nx }, () => null as number | null),
  );
  const cellFlagged: boolean[][] = Array.from({ length: ny }, () =>
    Array.from({ length: nx }, () => false),
  );
  const flaggedSet = new Set(flagged);
  for (let i = 0; i < table.rowCount; i++) {
    const x = xs[i];
    const y = ys[i];
    if (x === null || y === null) continue;
    const ix = xIndex.get(x)!;
    const iy = yIndex.get(y)!;
    const z = zs[i];
    field[iy][ix] = z !== null && Number.isFinite(z) ? z : null;
    if (flaggedSet.has(i)) cellFlagged[iy][ix] = true;
  }

  const finite = field.flat().filter((v): v is number => v !== null);
  const [zLo, zHi] = extent(finite.length ? finite : [0]);

  const svg = new Svg(recipe.width, recipe.height);
  // index-space axes label a subset of grid values, which renders linear
  // and log grids alike
  const x0 = MARGIN.left;
  const x1 = recipe.width - MARGIN.right;
  const y0 = recipe.height - MARGIN.bottom;
  const y1 = MARGIN.top;
  const cellW = (x1 - x0) / Math.max(1, nx);
  const cellH = (y0 - y1) / Math.max(1, ny);

  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      const value = field[iy][ix];
      const px = x0 + ix * cellW;
      const py = y0 - (iy + 1) * cellH;
      if (value === null) {
        svg.rect(px, py, cellW + 0.3, cellH + 0.3, "#dddddd");
      } else {
        const t = zHi > zLo ? (value - zLo) / (zHi - zLo) : 0.5;
        svg.rect(px, py, cellW + 0.3, cellH + 0.3, colormap(t));
      }
    }
  }

  for (const level of contourLevels(zLo, zHi)) {
    for (const [ax, ay, bx, by] of contourSegments(field, level)) {
      svg.line(
        x0 + (ax + 0.5) * cellW,
        y0 - (ay + 0.5) * cellH,
        x0 + (bx + 0.5) * cellW,
        y0 - (by + 0.5) * cellH,
        "rgba(255,255,255,0.75)",
        0.8,
      );
    }
  }

  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      if (cellFlagged[iy][ix]) {
        svg.flagMarker(x0 + (ix + 0.5) * cellW, y0 - (iy + 0.5) * cellH, Math.min(3, cellW));
      }
    }
  }

  // frame, ticks from grid values, colorbar
  svg.line(x0, y0, x1, y0, "#333", 1);
  svg.line(x0, y0, x0, y1, "#333", 1);
  const nTicks = 6;
  for (let i = 0; i < nTicks; i++) {
    const ix = Math.round(((nx - 1) * i) / (nTicks - 1));
    const px = x0 + (ix + 0.5) * cellW;
    svg.line(px, y0, px, y0 + 4, "#333", 1);
    if (nx > 0) svg.text(px, y0 + 18, fmtTick(xVals[ix]), 11, "middle");
    const iy = Math.round(((ny - 1) * i) / (nTicks - 1));
    const py = y0 - (iy + 0.5) * cellH;
    svg.line(x0 - 4, py, x0, py, "#333", 1);
    if (ny > 0) svg.text(x0 - 7, py + 4, fmtTick(yVals[iy]), 11, "end");
  }
  svg.text((x0 + x1) / 2, recipe.height - 12, recipe.xlabel, 13, "middle");
  svg.text(18, (y0 + y1) / 2, recipe.ylabel, 13, "middle", -90);
  if (recipe.title) svg.text((x0 + x1) / 2, 24, recipe.title, 15, "middle");

  const barX = recipe.width - MARGIN.right + 20;
  const barSteps = 40;
  const barH = (y0 - y1) / barSteps;
  for (let i = 0; i < barSteps; i++) {
    svg.rect(barX, y0 - (i + 1) * barH, 14, barH + 0.3, colormap(i / (barSteps - 1)));
  }
  svg.text(barX + 18, y0 + 4, fmtTick(zLo), 10);
  svg.text(barX + 18, y1 + 8, fmtTick(zHi), 10);
  svg.text(barX + 7, y1 - 8, recipe.z ?? "", 11, "middle");

  return { svg: svg.render(), flaggedRowCount: flagged.length, flaggedRowIndices: flagged };
}

export function render(recipe: FigureRecipe, csvText: string): RenderResult {
  const table = parseCsv(csvText, recipe.sourceCsv);
  return recipe.kind === "line" ? renderLine(recipe, table) : renderSurface(recipe, table);
}
