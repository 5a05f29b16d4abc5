/**
 * Parser for capflow trajectory / sweep CSV files.
 *
 * The files carry `#`-prefixed header comments (version, config hash,
 * column schema), then a plain CSV header row and numeric data rows.
 */

export interface CsvTable {
  columns: string[];
  rows: number[][];
  meta: Record<string, string>;
}

export class SchemaError extends Error {}

export function parseCsv(text: string): CsvTable {
  const meta: Record<string, string> = {};
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  let headerIdx = -1;
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (line.startsWith("#")) {
      const m = line.slice(1).match(/^\s*([\w-]+)\s*=\s*(.*)$/);
      if (m) meta[m[1]] = m[2].trim();
      continue;
    }
    headerIdx = i;
    break;
  }
  if (headerIdx < 0) {
    throw new SchemaError("no CSV header row found (only comments or empty file)");
  }
  const columns = lines[headerIdx].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = headerIdx + 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1}: expected ${columns.length} fields, found ${parts.length}`,
      );
    }
    rows.push(parts.map((value) => Number(value)));
  }
  if (rows.length === 0) {
    throw new SchemaError("CSV has a header but no data rows");
  }
  return { columns, rows, meta };
}

/** Column indices for the requested names; throws listing every missing one. */
export function requireColumns(table: CsvTable, names: string[]): number[] {
  const missing = names.filter((n) => !table.columns.includes(n));
  if (missing.length > 0) {
    throw new SchemaError(`schema mismatch: missing columns: ${missing.join(", ")}`);
  }
  return names.map((n) => table.columns.indexOf(n));
}

export function column(table: CsvTable, name: string): number[] {
  const [idx] = requireColumns(table, [name]);
  return table.rows.map((r) => r[idx]);
}
