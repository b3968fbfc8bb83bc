/**
 * Reader for the versioned CSV contract emitted by the punctlap CLI:
 * first line `# schema=<name>/v1`, then a header row, then data rows with
 * floats printed at 17 significant digits (lossless round trip).
 */

export interface Table {
  schema: string;
  version: string;
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatchError";
  }
}

export class EmptyInputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInputError";
  }
}

const SUPPORTED_VERSION = "v1";

export function parseTable(text: string, expectedSchema?: string): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length < 2) {
    throw new SchemaMismatchError("input is missing the schema and header lines");
  }
  const m = lines[0].match(/^# schema=([A-Za-z0-9_-]+)\/(v\d+)$/);
  if (!m) {
    throw new SchemaMismatchError(`first line is not a schema marker: ${lines[0]}`);
  }
  const [, schema, version] = m;
  if (version !== SUPPORTED_VERSION) {
    throw new SchemaMismatchError(
      `schema ${schema} has version ${version}; this reader supports ${SUPPORTED_VERSION}`,
    );
  }
  if (expectedSchema !== undefined && schema !== expectedSchema) {
    throw new SchemaMismatchError(`expected schema ${expectedSchema}, found ${schema}`);
  }
  const columns = lines[1].split(",");
  const rows: Record<string, string>[] = [];
  for (const ln of lines.slice(2)) {
    const fields = ln.split(",");
    if (fields.length !== columns.length) {
      throw new SchemaMismatchError(
        `row has ${fields.length} fields, header has ${columns.length}: ${ln}`,
      );
    }
    rows.push(Object.fromEntries(columns.map((c, i) => [c, fields[i]])));
  }
  return { schema, version, columns, rows };
}

/** Numeric column accessor; "inf"/"-inf"/"nan" follow the CLI encoding. */
export function numericColumn(table: Table, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new SchemaMismatchError(`schema ${table.schema} has no column ${name}`);
  }
  return table.rows.map((row) => {
    const text = row[name];
    if (text === "inf") return Infinity;
    if (text === "-inf") return -Infinity;
    const value = Number(text);
    if (Number.isNaN(value) && text !== "nan") {
      throw new SchemaMismatchError(`non-numeric value in column ${name}: ${text}`);
    }
    return value;
  });
}

export function requireRows(table: Table): void {
  if (table.rows.length === 0) {
    throw new EmptyInputError(`schema ${table.schema} input contains no data rows`);
  }
}
