import { writeFileSync } from 'fs';

import { SchemaError, SweepTable, column, metaNumber, readSweepCsv } from './csv.js';
import { Band, bandOverTrials, bandOverTrialsMappedX } from './aggregate.js';
import { Series, VLine, buildChart } from './svg.js';

export const FIGURE_IDS = [
  'fig2',
  'fig3-left',
  'fig3-right',
  'fig4-left',
  'fig4-right',
  'figS1',
  'figS2',
] as const;

export type FigureId = (typeof FIGURE_IDS)[number];

export interface FigureSpec {
  id: FigureId;
  inputs: string[];
  output: string;
  logX: boolean;
  logY: boolean;
}

/** Everything that ends up in the chart, dumped alongside the image so the
 *  plotted values can be diffed without decoding SVG. */
export interface SidecarSeries {
  label: string;
  x: number[];
  y: number[];
  lo?: number[];
  hi?: number[];
}

export interface Sidecar {
  figure: FigureId;
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  vlines: { x: number; label?: string }[];
  series: SidecarSeries[];
}

export interface RenderedFigure {
  svg: string;
  sidecar: Sidecar;
}

const COLORS = {
  lambda0: '#2e8b57',
  lambda1: '#5aa0d0',
  delta: '#c0392b',
  deltaEst: '#8e44ad',
};

interface SeriesDef {
  column: string;
  label: string;
  color: string;
  dash?: string;
}

interface FigureDef {
  experiment: string;
  minInputs: number;
  maxInputs: number;
  logX: boolean;
  logY: boolean;
  title: string;
  xLabel: string;
  build: (tables: SweepTable[]) => {
    series: { chart: Series; side: SidecarSeries }[];
    vlines: VLine[];
  };
}

function requireExperiment(table: SweepTable, expected: string, figure: string): void {
  const got = table.meta['experiment'];
  if (got !== expected) {
    throw new SchemaError(`${figure} expects a ${expected} CSV, got "${got ?? 'missing'}"`);
  }
}

function bandSeries(label: string, band: Band, color: string, dash?: string) {
  const chart: Series = {
    label,
    x: band.x,
    y: band.mean,
    color,
    dash,
    band: { lo: band.lo, hi: band.hi },
  };
  const side: SidecarSeries = { label, x: band.x, y: band.mean, lo: band.lo, hi: band.hi };
  return { chart, side };
}

/** Aggregate the listed columns over the x coordinate; silently drop series
 *  whose values are all zero or non-finite (e.g. noise-free error estimates). */
function standardSeries(
  table: SweepTable,
  xName: string,
  defs: SeriesDef[],
  mapX?: (x: number) => number,
) {
  const out: { chart: Series; side: SidecarSeries }[] = [];
  for (const def of defs) {
    const band = mapX
      ? bandOverTrialsMappedX(table, xName, def.column, mapX)
      : bandOverTrials(table, xName, def.column);
    if (band.x.length === 0) continue;
    out.push(bandSeries(def.label, band, def.color, def.dash));
  }
  if (out.length === 0) throw new SchemaError('no plottable series in CSV');
  return out;
}

const SPECTRUM_DEFS: SeriesDef[] = [
  { column: 'lambda0', label: 'lambda0', color: COLORS.lambda0 },
  { column: 'lambda1', label: 'lambda1', color: COLORS.lambda1 },
  { column: 'delta', label: 'recovery error', color: COLORS.delta },
  { column: 'delta_est', label: 'error estimate', color: COLORS.deltaEst, dash: '6,4' },
];

/** First row index of each support-size group beyond the first marks where
 *  larger constraint windows start entering the ordering. */
function kTransitionLines(table: SweepTable): VLine[] {
  const rowsCol = column(table, 'n_rows');
  const kCol = column(table, 'k_group');
  const firstRow = new Map<number, number>();
  for (let i = 0; i < rowsCol.length; i++) {
    const k = kCol[i];
    const prev = firstRow.get(k);
    if (prev === undefined || rowsCol[i] < prev) firstRow.set(k, rowsCol[i]);
  }
  const ks = [...firstRow.keys()].sort((a, b) => a - b);
  return ks.slice(1).map((k) => ({
    x: firstRow.get(k)!,
    label: `k=${k}`,
    color: '#999999',
    dash: '2,3',
  }));
}

const FIGURES: Record<FigureId, FigureDef> = {
  fig2: {
    experiment: 'groundstate-sweep',
    minInputs: 1,
    maxInputs: 1,
    logX: false,
    logY: true,
    title: 'Kernel spectrum and recovery error vs constraint count',
    xLabel: 'constraint rows',
    build: ([table]) => {
      const series = standardSeries(table, 'n_rows', SPECTRUM_DEFS);
      const mTerms = metaNumber(table, 'm_terms');
      const vlines: VLine[] = [
        { x: mTerms - 1, label: 'rows = terms - 1', color: '#555555' },
        ...kTransitionLines(table),
      ];
      return { series, vlines };
    },
  },
  'fig3-left': {
    experiment: 'gibbs-sweep',
    minInputs: 1,
    maxInputs: 1,
    logX: true,
    logY: true,
    title: 'Thermal-state recovery vs temperature',
    xLabel: 'temperature 1/beta',
    build: ([table]) => ({
      series: standardSeries(table, 'beta', SPECTRUM_DEFS, (beta) => 1 / beta),
      vlines: [],
    }),
  },
  'fig3-right': {
    experiment: 'multistate',
    minInputs: 1,
    maxInputs: 1,
    logX: false,
    logY: true,
    title: 'Recovery from multiple thermal states',
    xLabel: 'number of states',
    build: ([table]) => ({
      series: standardSeries(table, 'n_states', SPECTRUM_DEFS),
      vlines: [],
    }),
  },
  'fig4-left': {
    experiment: 'quench',
    minInputs: 1,
    maxInputs: 1,
    logX: true,
    logY: true,
    title: 'Recovery from a time-averaged quench',
    xLabel: 'averaging time',
    build: ([table]) => ({
      series: standardSeries(table, 't', SPECTRUM_DEFS),
      vlines: [],
    }),
  },
  'fig4-right': {
    experiment: 'driven',
    minInputs: 1,
    maxInputs: 1,
    logX: true,
    logY: true,
    title: 'Recovery under periodic driving',
    xLabel: 'averaging time',
    build: ([table]) => ({
      series: standardSeries(table, 't', [
        { column: 'lambda0', label: 'lambda0', color: COLORS.lambda0 },
        { column: 'lambda1', label: 'lambda1', color: COLORS.lambda1 },
        { column: 'delta_h0', label: 'static-part error', color: COLORS.delta },
        { column: 'delta_v', label: 'drive-part error', color: COLORS.deltaEst, dash: '6,4' },
      ]),
      vlines: [],
    }),
  },
  figS1: {
    experiment: 'xy-gap-scan',
    minInputs: 1,
    maxInputs: 1,
    logX: false,
    logY: true,
    title: 'Spectral gap vs region size',
    xLabel: 'region size',
    build: ([table]) => ({
      series: standardSeries(table, 'region_size', [
        { column: 'lambda1', label: 'lambda1', color: COLORS.lambda1 },
      ]),
      vlines: [],
    }),
  },
  figS2: {
    experiment: 'driven',
    minInputs: 1,
    maxInputs: 4,
    logX: true,
    logY: true,
    title: 'Driving strength and frequency comparison',
    xLabel: 'averaging time',
    build: (tables) => {
      const palette = ['#5aa0d0', '#c0392b', '#2e8b57', '#8e44ad'];
      const series: { chart: Series; side: SidecarSeries }[] = [];
      tables.forEach((table, i) => {
        const amp = table.meta['amplitude'] ?? '?';
        const omega = table.meta['omega'] ?? '?';
        const tag = `J=${amp} w=${omega}`;
        const color = palette[i % palette.length];
        const l1 = bandOverTrials(table, 't', 'lambda1');
        if (l1.x.length > 0) series.push(bandSeries(`lambda1 ${tag}`, l1, color));
        const l0 = bandOverTrials(table, 't', 'lambda0');
        if (l0.x.length > 0) series.push(bandSeries(`lambda0 ${tag}`, l0, color, '4,3'));
      });
      if (series.length === 0) throw new SchemaError('no plottable series in CSV');
      return { series, vlines: [] };
    },
  },
};

export function figureSpec(id: string, inputs: string[], output: string): FigureSpec {
  const def = FIGURES[id as FigureId];
  if (!def) {
    throw new Error(`unknown figure "${id}" (known: ${FIGURE_IDS.join(', ')})`);
  }
  if (inputs.length < def.minInputs || inputs.length > def.maxInputs) {
    const want =
      def.minInputs === def.maxInputs ? `${def.minInputs}` : `${def.minInputs}-${def.maxInputs}`;
    throw new Error(`${id} takes ${want} input CSV(s), got ${inputs.length}`);
  }
  return { id: id as FigureId, inputs, output, logX: def.logX, logY: def.logY };
}

/** Pure step: tables in, SVG text and plotted arrays out. */
export function buildFigure(spec: FigureSpec, tables: SweepTable[]): RenderedFigure {
  const def = FIGURES[spec.id];
  for (const table of tables) requireExperiment(table, def.experiment, spec.id);
  const { series, vlines } = def.build(tables);
  const yLabel = spec.logY ? 'value (log scale)' : 'value';
  const svg = buildChart(
    series.map((s) => s.chart),
    {
      title: def.title,
      xLabel: def.xLabel,
      yLabel,
      logX: spec.logX,
      logY: spec.logY,
      vlines,
    },
  );
  const sidecar: Sidecar = {
    figure: spec.id,
    title: def.title,
    xLabel: def.xLabel,
    yLabel,
    logX: spec.logX,
    logY: spec.logY,
    vlines: vlines.map((v) => ({ x: v.x, label: v.label })),
    series: series.map((s) => s.side),
  };
  return { svg, sidecar };
}

/** Read every input before writing anything, so a bad input never leaves a
 *  partial output behind. */
export function renderFigure(spec: FigureSpec): RenderedFigure {
  const tables = spec.inputs.map(readSweepCsv);
  const rendered = buildFigure(spec, tables);
  writeFileSync(spec.output, rendered.svg);
  writeFileSync(`${spec.output}.json`, JSON.stringify(rendered.sidecar, null, 1));
  return rendered;
}
