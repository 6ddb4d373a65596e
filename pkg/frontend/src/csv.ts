/**
 * Reader for the versioned CSV files emitted by the mima3d CLI.
 *
 * Every file starts with a schema line `# mima3d <kind>-csv v<N>` followed
 * by a header row. Cells parse as numbers when possible, otherwise stay
 * strings ("true"/"false" become booleans).
 */

export type Cell = number | string | boolean;

export interface CsvTable {
  kind: string;
  version: number;
  columns: string[];
  rows: Cell[][];
}

const SCHEMA_RE = /^# mima3d ([a-z-]+)-csv v(\d+)$/;

function parseCell(raw: string): Cell {
  if (raw === "true") return true;
  if (raw === "false") return false;
  if (raw !== "" && !isNaN(Number(raw))) return Number(raw);
  return raw;
}

export function parseCsv(text: string, expectedKind?: string): CsvTable {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) {
    throw new Error("CSV too short: need a schema line and a header row");
  }
  const m = SCHEMA_RE.exec(lines[0].trim());
  if (!m) {
    throw new Error(`missing schema line, got ${JSON.stringify(lines[0])}`);
  }
  const kind = m[1];
  const version = Number(m[2]);
  if (expectedKind !== undefined && kind !== expectedKind) {
    throw new Error(`expected ${expectedKind} CSV, got ${kind}`);
  }
  const columns = lines[1].split(",");
  const rows: Cell[][] = [];
  for (let i = 2; i < lines.length; i++) {
    if (lines[i] === "") continue;
    const cells = lines[i].split(",").map(parseCell);
    if (cells.length !== columns.length) {
      throw new Error(
        `row ${i + 1} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    rows.push(cells);
  }
  return { kind, version, columns, rows };
}

/** Numeric column by name; throws when absent or non-numeric. */
export function column(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`no column ${JSON.stringify(name)} in ${table.kind} CSV`);
  }
  return table.rows.map((row, i) => {
    const v = row[idx];
    if (typeof v !== "number") {
      throw new Error(`non-numeric value in column ${name}, row ${i}: ${v}`);
    }
    return v;
  });
}

/** Raw (possibly non-numeric) column by name. */
export function rawColumn(table: CsvTable, name: string): Cell[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`no column ${JSON.stringify(name)} in ${table.kind} CSV`);
  }
  return table.rows.map((row) => row[idx]);
}
