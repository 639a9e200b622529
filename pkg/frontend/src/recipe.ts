/**
 * Figure recipes: data files (same key = value grammar as the simulation
 * config) that say which CSV to read and how to draw it, so axis or label
 * tweaks never touch code.
 *
 * Fields:
 *   source_csv   file name, resolved against the input directory
 *   kind         line | surface
 *   x, y         column names; for kind=surface these are the two grid axes
 *   z            value column (surface only)
 *   series_by    column whose distinct values split the curves (line only)
 *   x.scale      linear | log          (line plots; default linear)
 *   x.transform  none | reciprocal     (e.g. beta -> kbT; default none)
 *   title, xlabel, ylabel              free text
 *   out          output image name     (default: recipe name + .svg)
 *   format       svg                   (the only built-in format)
 *   width, height                      pixels (defaults 800 x 560)
 */

import { ConfigError, ConfigView, parseConfig } from "./config.js";

export interface FigureRecipe {
  name: string;
  sourceCsv: string;
  kind: "line" | "surface";
  x: string;
  y: string;
  z?: string;
  seriesBy?: string;
  xScale: "linear" | "log";
  xTransform: "none" | "reciprocal";
  title: string;
  xlabel: string;
  ylabel: string;
  out: string;
  format: "svg";
  width: number;
  height: number;
}

export function parseRecipe(text: string, name: string): FigureRecipe {
  const cfg = new ConfigView(parseConfig(text, name), name);
  const kind = cfg.getEnum("kind", ["line", "surface"]);
  if (kind === undefined) throw new ConfigError(`${name}: missing required field 'kind'`);
  const z = cfg.raw("z");
  if (kind === "surface" && z === undefined) {
    throw new ConfigError(`${name}: kind=surface needs a 'z' value column`);
  }
  if (kind === "line" && z !== undefined) {
    throw new ConfigError(`${name}: 'z' is only valid for kind=surface`);
  }
  return {
    name,
    sourceCsv: cfg.require("source_csv"),
    kind: kind as "line" | "surface",
    x: cfg.require("x"),
    y: cfg.require("y"),
    z,
    seriesBy: cfg.raw("series_by"),
    xScale: (cfg.getEnum("x.scale", ["linear", "log"], "linear") ?? "linear") as "linear" | "log",
    xTransform: (cfg.getEnum("x.transform", ["none", "reciprocal"], "none") ?? "none") as
      | "none"
      | "reciprocal",
    title: cfg.raw("title", "") ?? "",
    xlabel: cfg.raw("xlabel", cfg.require("x")) ?? "",
    ylabel: cfg.raw("ylabel", cfg.require("y")) ?? "",
    out: cfg.raw("out", `${baseName(name)}.svg`) ?? "",
    format: (cfg.getEnum("format", ["svg"], "svg") ?? "svg") as "svg",
    width: cfg.getInt("width", 800) ?? 800,
    height: cfg.getInt("height", 560) ?? 560,
  };
}

function baseName(name: string): string {
  const file = name.split("/").pop() ?? name;
  return file.replace(/\.recipe$/, "");
}
