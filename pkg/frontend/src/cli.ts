#!/usr/bin/env node
/**
 * render-all --in DIR --out DIR [--recipes DIR]
 *
 * Loads every *.recipe file (shipped alongside the package by default),
 * reads each recipe's source CSV from the input directory, writes one SVG
 * per recipe into the output directory plus a sidecar report
 * `render_report.txt` listing every quality-flagged row. Read-only with
 * respect to the input directory. Exit status 0 on success, 2 on usage or
 * data errors (the offending file or column is named).
 */

import { readFileSync, readdirSync, writeFileSync, mkdirSync, existsSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { ConfigError } from "./config.js";
import { CsvError } from "./csv.js";
import { parseRecipe } from "./recipe.js";
import { render } from "./render.js";

function defaultRecipeDir(): string {
  const here = dirname(fileURLToPath(import.meta.url));
  for (const candidate of [join(here, "..", "recipes"), join(here, "recipes")]) {
    if (existsSync(candidate)) return candidate;
  }
  return join(here, "..", "recipes");
}

interface Args {
  inDir: string;
  outDir: string;
  recipeDir: string;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render-all") {
    throw new ConfigError(`unknown command ${JSON.stringify(argv[0])}; expected 'render-all'`);
  }
  let inDir: string | undefined;
  let outDir: string | undefined;
  let recipeDir = defaultRecipeDir();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new ConfigError(`flag ${flag} needs a value`);
    if (flag === "--in") inDir = value;
    else if (flag === "--out") outDir = value;
    else if (flag === "--recipes") recipeDir = value;
    else throw new ConfigError(`unknown flag ${JSON.stringify(flag)}`);
  }
  if (!inDir) throw new ConfigError("missing required flag --in DIR");
  if (!outDir) throw new ConfigError("missing required flag --out DIR");
  return { inDir: resolve(inDir), outDir: resolve(outDir), recipeDir: resolve(recipeDir) };
}

export interface RenderAllSummary {
  images: string[];
  totalFlagged: number;
  reportPath: string;
}

export function renderAll(inDir: string, outDir: string, recipeDir: string): RenderAllSummary {
  const recipeFiles = readdirSync(recipeDir)
    .filter((name) => name.endsWith(".recipe"))
    .sort();
  if (recipeFiles.length === 0) {
    throw new ConfigError(`no *.recipe files in ${recipeDir}`);
  }
  mkdirSync(outDir, { recursive: true });
  const reportLines: string[] = [];
  const images: string[] = [];
  let totalFlagged = 0;
  for (const file of recipeFiles) {
    const recipe = parseRecipe(readFileSync(join(recipeDir, file), "utf8"), file);
    const csvPath = join(inDir, recipe.sourceCsv);
    if (!existsSync(csvPath)) {
      throw new CsvError(`${file}: source CSV not found: ${csvPath}`);
    }
    const result = render(recipe, readFileSync(csvPath, "utf8"));
    const outPath = join(outDir, recipe.out);
    writeFileSync(outPath, result.svg);
    images.push(outPath);
    totalFlagged += result.flaggedRowCount;
    reportLines.push(`${recipe.name}: flagged_rows = ${result.flaggedRowCount}`);
    for (const row of result.flaggedRowIndices) {
      reportLines.push(`${recipe.name}: row ${row + 2} of ${recipe.sourceCsv}`); // 1-based incl. header
    }
  }
  reportLines.push(`total: flagged_rows = ${totalFlagged}`);
  const reportPath = join(outDir, "render_report.txt");
  writeFileSync(reportPath, reportLines.join("\n") + "\n");
  return { images, totalFlagged, reportPath };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const summary = renderAll(args.inDir, args.outDir, args.recipeDir);
    for (const image of summary.images) console.log(`wrote ${image}`);
    console.log(`wrote ${summary.reportPath} (${summary.totalFlagged} flagged rows)`);
    return 0;
  } catch (err) {
    if (err instanceof ConfigError || err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const entry = process.argv[1] ? resolve(process.argv[1]) : "";
if (entry === fileURLToPath(import.meta.url)) {
  process.exit(main(process.argv.slice(2)));
}
