/**
 * Reader for the sweep CSV dialect: comma separated, header row mandatory,
 * '.' decimal separator, empty field = value not computed. The dialect never
 * quotes fields, so a plain split is exact.
 */

export interface Table {
  header: string[];
  /** numeric columns; null marks an empty (not computed) field */
  columns: Map<string, (number | null)[]>;
  /** raw string columns (quality_flag) */
  rawColumns: Map<string, string[]>;
  rowCount: number;
}

export class CsvError extends Error {}

const STRING_COLUMNS = new Set(["quality_flag"]);

export function parseCsv(text: string, source = "<csv>"): Table {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new CsvError(`${source}: empty file`);
  }
  const header = lines[0].split(",");
  const columns = new Map<string, (number | null)[]>();
  const rawColumns = new Map<string, string[]>();
  for (const name of header) {
    if (STRING_COLUMNS.has(name)) rawColumns.set(name, []);
    else columns.set(name, []);
  }
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvError(
        `${source}:${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    for (let j = 0; j < header.length; j++) {
      const name = header[j];
      if (STRING_COLUMNS.has(name)) {
        rawColumns.get(name)!.push(fields[j]);
        continue;
      }
      if (fields[j] === "") {
        columns.get(name)!.push(null);
        continue;
      }
      const value = Number(fields[j]);
      if (!Number.isFinite(value)) {
        throw new CsvError(`${source}:${i + 1}: bad number ${JSON.stringify(fields[j])} in column '${name}'`);
      }
      columns.get(name)!.push(value);
    }
  }
  return { header, columns, rawColumns, rowCount: lines.length - 1 };
}

export function requireColumn(table: Table, name: string, source = "<csv>"): (number | null)[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new CsvError(
      `${source}: column '${name}' not found (header: ${table.header.join(", ")})`,
    );
  }
  return col;
}

export function flaggedRows(table: Table): number[] {
  const flags = table.rawColumns.get("quality_flag");
  if (!flags) return [];
  const out: number[] = [];
  flags.forEach((flag, i) => {
    if (flag !== "") out.push(i);
  });
  return out;
}
