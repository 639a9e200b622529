export { parseConfig, ConfigView, ConfigError } from "./config.js";
export { parseCsv, requireColumn, flaggedRows, CsvError } from "./csv.js";
export type { Table } from "./csv.js";
export { parseRecipe } from "./recipe.js";
export type { FigureRecipe } from "./recipe.js";
export { contourSegments, contourLevels } from "./contour.js";
export { colormap } from "./colormap.js";
export { render, renderLine, renderSurface } from "./render.js";
export type { RenderResult } from "./render.js";
export { renderAll, main } from "./cli.js";
