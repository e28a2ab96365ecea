/**
 * Reader for the simulator's CSV outputs.
 *
 * Files start with `#` comment lines (seed + configuration echo), then a
 * header row, then numeric rows. Array snapshots have no header, just a
 * numeric matrix. Values are plotted exactly as parsed, never rescaled or
 * resampled.
 */

export interface Table {
  columns: string[];
  /** column name -> values, in file order */
  data: Map<string, number[]>;
  rowCount: number;
}

export class CsvError extends Error {}

function contentLines(text: string): string[] {
  return text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
}

/** Parse a header + numeric rows file and require the given columns. */
export function readTable(text: string, required: string[]): Table {
  const lines = contentLines(text);
  if (lines.length === 0) throw new CsvError("empty input");
  const columns = lines[0].split(",").map((c) => c.trim());
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new CsvError(`missing column '${col}' (found: ${columns.join(", ")})`);
    }
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new CsvError(`row ${i} has ${parts.length} fields, expected ${columns.length}`);
    }
    for (let j = 0; j < columns.length; j++) {
      const v = Number(parts[j]);
      if (!Number.isFinite(v)) {
        throw new CsvError(`row ${i}, column '${columns[j]}': not a number: '${parts[j]}'`);
      }
      data.get(columns[j])!.push(v);
    }
  }
  if (data.get(columns[0])!.length === 0) throw new CsvError("no data rows");
  return { columns, data, rowCount: data.get(columns[0])!.length };
}

/** Parse a headerless numeric matrix (array conductance snapshot). */
export function readMatrix(text: string): number[][] {
  const lines = contentLines(text);
  if (lines.length === 0) throw new CsvError("empty matrix");
  const rows: number[][] = [];
  for (const line of lines) {
    const row = line.split(",").map((tok) => {
      const v = Number(tok);
      if (!Number.isFinite(v)) throw new CsvError(`not a number: '${tok}'`);
      return v;
    });
    if (rows.length > 0 && row.length !== rows[0].length) {
      throw new CsvError(`ragged matrix: ${row.length} vs ${rows[0].length} columns`);
    }
    rows.push(row);
  }
  return rows;
}

export function column(t: Table, name: string): number[] {
  const v = t.data.get(name);
  if (v === undefined) throw new CsvError(`missing column '${name}'`);
  return v;
}
