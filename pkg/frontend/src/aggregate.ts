import { SweepTable, column } from './csv.js';

/** Per-x aggregate of one column over trials, in the data domain.
 *  mean = 10^mean(log10 v), band edges one log-std out. */
export interface Band {
  x: number[];
  mean: number[];
  lo: number[];
  hi: number[];
}

/** Mean and standard deviation of log10 over positive finite entries. */
export function log10Stats(values: number[]): { mean: number; std: number } | null {
  const logs = values.filter((v) => Number.isFinite(v) && v > 0).map(Math.log10);
  if (logs.length === 0) return null;
  const mean = logs.reduce((a, b) => a + b, 0) / logs.length;
  const varsum = logs.reduce((a, b) => a + (b - mean) * (b - mean), 0);
  return { mean, std: Math.sqrt(varsum / logs.length) };
}

/** Group rows by the x column and aggregate the y column across trials.
 *  x values where no positive finite y exists are dropped. */
export function bandOverTrials(table: SweepTable, xName: string, yName: string): Band {
  const xs = column(table, xName);
  const ys = column(table, yName);
  const groups = new Map<number, number[]>();
  for (let i = 0; i < xs.length; i++) {
    const bucket = groups.get(xs[i]);
    if (bucket) bucket.push(ys[i]);
    else groups.set(xs[i], [ys[i]]);
  }
  const band: Band = { x: [], mean: [], lo: [], hi: [] };
  for (const x of [...groups.keys()].sort((a, b) => a - b)) {
    const stats = log10Stats(groups.get(x)!);
    if (!stats) continue;
    band.x.push(x);
    band.mean.push(10 ** stats.mean);
    band.lo.push(10 ** (stats.mean - stats.std));
    band.hi.push(10 ** (stats.mean + stats.std));
  }
  return band;
}

/** Same grouping, but map the x coordinate first (e.g. beta -> 1/beta). */
export function bandOverTrialsMappedX(
  table: SweepTable,
  xName: string,
  yName: string,
  mapX: (x: number) => number,
): Band {
  const raw = bandOverTrials(table, xName, yName);
  const order = raw.x.map((x, i) => [mapX(x), i] as const).sort((a, b) => a[0] - b[0]);
  return {
    x: order.map(([mx]) => mx),
    mean: order.map(([, i]) => raw.mean[i]),
    lo: order.map(([, i]) => raw.lo[i]),
    hi: order.map(([, i]) => raw.hi[i]),
  };
}
