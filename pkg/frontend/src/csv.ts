import { readFileSync } from 'fs';

/** A sweep CSV: `# key=value` metadata lines, a header row, numeric rows. */
export interface SweepTable {
  meta: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

const SUPPORTED_SCHEMA = '1';

/** Floats arrive as Python repr(); cover the non-finite spellings. */
export function parseNumber(text: string): number {
  const t = text.trim();
  if (t === 'inf' || t === 'Infinity') return Infinity;
  if (t === '-inf' || t === '-Infinity') return -Infinity;
  if (t === 'nan' || t === '-nan') return NaN;
  if (t === '') throw new SchemaError('empty numeric field');
  const v = Number(t);
  if (Number.isNaN(v)) throw new SchemaError(`not a number: "${text}"`);
  return v;
}

export function parseSweepCsv(text: string): SweepTable {
  const meta: Record<string, string> = {};
  const lines = text.split('\n');
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i];
    if (!line.startsWith('#')) break;
    const body = line.replace(/^#\s*/, '');
    const eq = body.indexOf('=');
    if (eq < 0) throw new SchemaError(`metadata line without "=": "${line}"`);
    meta[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
  }
  if (meta['schema'] !== SUPPORTED_SCHEMA) {
    throw new SchemaError(
      `unsupported schema "${meta['schema'] ?? 'missing'}" (supported: ${SUPPORTED_SCHEMA})`);
  }
  if (meta['kind'] !== 'sweep') {
    throw new SchemaError(`expected a sweep CSV, got kind "${meta['kind'] ?? 'missing'}"`);
  }
  const header = lines[i];
  if (header === undefined || header.trim() === '') {
    throw new SchemaError('missing header row');
  }
  const columns = header.split(',').map((c) => c.trim());
  const rows: number[][] = [];
  for (i = i + 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === '') continue;
    const cells = line.split(',');
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${rows.length + 1} has ${cells.length} fields, header has ${columns.length}`);
    }
    rows.push(cells.map(parseNumber));
  }
  if (rows.length === 0) throw new SchemaError('sweep CSV has no data rows');
  return { meta, columns, rows };
}

export function readSweepCsv(path: string): SweepTable {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  try {
    return parseSweepCsv(text);
  } catch (err) {
    if (err instanceof SchemaError) throw new SchemaError(`${path}: ${err.message}`);
    throw err;
  }
}

export function column(table: SweepTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column "${name}" not in CSV (have: ${table.columns.join(', ')})`);
  }
  return table.rows.map((r) => r[idx]);
}

export function metaNumber(table: SweepTable, key: string): number {
  const raw = table.meta[key];
  if (raw === undefined) throw new SchemaError(`metadata key "${key}" missing`);
  return parseNumber(raw);
}
