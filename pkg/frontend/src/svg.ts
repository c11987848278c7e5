/** Minimal deterministic SVG line charts: no dates, no randomness, so the
 *  same inputs always produce byte-identical output. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: string;
  /** Optional shaded range around the curve (same x grid). */
  band?: { lo: number[]; hi: number[] };
}

export interface VLine {
  x: number;
  label?: string;
  color?: string;
  dash?: string;
}

export interface ChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  logX?: boolean;
  logY?: boolean;
  vlines?: VLine[];
  width?: number;
  height?: number;
}

export function esc(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Round tick positions for a linear axis: 1/2/5 mantissas. */
export function niceTicks(min: number, max: number, count: number): number[] {
  if (!(max > min)) return [min];
  const rawStep = (max - min) / Math.max(1, count);
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Integer-decade tick positions (in log10 units) for a log axis. */
export function decadeTicks(logMin: number, logMax: number, count: number): number[] {
  const lo = Math.ceil(logMin - 1e-9);
  const hi = Math.floor(logMax + 1e-9);
  if (hi < lo) return [logMin];
  const step = Math.max(1, Math.ceil((hi - lo + 1) / Math.max(1, count)));
  const ticks: number[] = [];
  for (let e = lo; e <= hi; e += step) ticks.push(e);
  return ticks;
}

function fmtLinear(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace('+', '');
  return String(Number(v.toPrecision(6)));
}

function fmtDecade(e: number): string {
  if (e === 0) return '1';
  if (e === 1) return '10';
  return `1e${e}`;
}

interface Pt {
  x: number;
  y: number;
}

function transformed(xs: number[], ys: number[], logX: boolean, logY: boolean): Pt[] {
  const pts: Pt[] = [];
  for (let i = 0; i < xs.length; i++) {
    let x = xs[i];
    let y = ys[i];
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    if (logX) {
      if (x <= 0) continue;
      x = Math.log10(x);
    }
    if (logY) {
      if (y <= 0) continue;
      y = Math.log10(y);
    }
    pts.push({ x, y });
  }
  return pts;
}

export function buildChart(series: Series[], opts: ChartOpts): string {
  const width = opts.width ?? 760;
  const height = opts.height ?? 480;
  const margin = { top: 42, right: 20, bottom: 52, left: 72 };
  const pw = width - margin.left - margin.right;
  const ph = height - margin.top - margin.bottom;
  const logX = opts.logX ?? false;
  const logY = opts.logY ?? false;

  const curves = series.map((s) => transformed(s.x, s.y, logX, logY));
  const bands = series.map((s) =>
    s.band
      ? {
          lo: transformed(s.x, s.band.lo, logX, logY),
          hi: transformed(s.x, s.band.hi, logX, logY),
        }
      : null,
  );

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  const see = (p: Pt) => {
    if (p.x < xMin) xMin = p.x;
    if (p.x > xMax) xMax = p.x;
    if (p.y < yMin) yMin = p.y;
    if (p.y > yMax) yMax = p.y;
  };
  curves.forEach((pts) => pts.forEach(see));
  bands.forEach((b) => {
    if (b) {
      b.lo.forEach(see);
      b.hi.forEach(see);
    }
  });
  for (const v of opts.vlines ?? []) {
    const x = logX ? (v.x > 0 ? Math.log10(v.x) : NaN) : v.x;
    if (Number.isFinite(x)) {
      if (x < xMin) xMin = x;
      if (x > xMax) xMax = x;
    }
  }
  if (!Number.isFinite(xMin) || !Number.isFinite(yMin)) {
    throw new Error('no plottable points (all values filtered by the log axes)');
  }
  if (xMax - xMin < 1e-12) {
    xMin -= 0.5;
    xMax += 0.5;
  }
  if (yMax - yMin < 1e-12) {
    yMin -= 0.5;
    yMax += 0.5;
  }
  const padY = 0.04 * (yMax - yMin);
  yMin -= padY;
  yMax += padY;

  const sx = (x: number) => margin.left + ((x - xMin) / (xMax - xMin)) * pw;
  const sy = (y: number) => margin.top + ph - ((y - yMin) / (yMax - yMin)) * ph;

  const xTicks = logX ? decadeTicks(xMin, xMax, 8) : niceTicks(xMin, xMax, 8);
  const yTicks = logY ? decadeTicks(yMin, yMax, 8) : niceTicks(yMin, yMax, 8);
  const fmtX = logX ? fmtDecade : fmtLinear;
  const fmtY = logY ? fmtDecade : fmtLinear;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );

  for (const t of xTicks) {
    const x = sx(t).toFixed(2);
    parts.push(`<line x1="${x}" y1="${margin.top}" x2="${x}" y2="${margin.top + ph}" stroke="#e5e5e5"/>`);
    parts.push(
      `<text x="${x}" y="${margin.top + ph + 18}" text-anchor="middle">${esc(fmtX(t))}</text>`,
    );
  }
  for (const t of yTicks) {
    const y = sy(t).toFixed(2);
    parts.push(`<line x1="${margin.left}" y1="${y}" x2="${margin.left + pw}" y2="${y}" stroke="#e5e5e5"/>`);
    parts.push(
      `<text x="${margin.left - 8}" y="${y}" text-anchor="end" dominant-baseline="middle">${esc(fmtY(t))}</text>`,
    );
  }

  for (const v of opts.vlines ?? []) {
    const tx = logX ? (v.x > 0 ? Math.log10(v.x) : NaN) : v.x;
    if (!Number.isFinite(tx) || tx < xMin || tx > xMax) continue;
    const x = sx(tx).toFixed(2);
    const color = v.color ?? '#777777';
    const dash = v.dash ?? '5,4';
    parts.push(
      `<line x1="${x}" y1="${margin.top}" x2="${x}" y2="${margin.top + ph}" ` +
        `stroke="${color}" stroke-dasharray="${dash}"/>`,
    );
    if (v.label) {
      parts.push(
        `<text x="${x}" y="${margin.top - 4}" text-anchor="middle" fill="${color}" ` +
          `font-size="10">${esc(v.label)}</text>`,
      );
    }
  }

  series.forEach((s, i) => {
    const band = bands[i];
    if (!band || band.lo.length === 0) return;
    const fwd = band.hi.map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`);
    const back = [...band.lo].reverse().map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`);
    parts.push(
      `<polygon points="${[...fwd, ...back].join(' ')}" fill="${s.color}" fill-opacity="0.18"/>`,
    );
  });

  series.forEach((s, i) => {
    const pts = curves[i];
    if (pts.length === 0) return;
    const attr = s.dash ? ` stroke-dasharray="${s.dash}"` : '';
    const coords = pts.map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`).join(' ');
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${s.color}" stroke-width="1.8"${attr}/>`,
    );
    if (pts.length <= 40) {
      for (const p of pts) {
        parts.push(
          `<circle cx="${sx(p.x).toFixed(2)}" cy="${sy(p.y).toFixed(2)}" r="2.4" fill="${s.color}"/>`,
        );
      }
    }
  });

  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${pw}" height="${ph}" ` +
      `fill="none" stroke="#333333"/>`,
  );
  parts.push(
    `<text x="${margin.left + pw / 2}" y="${height - 12}" text-anchor="middle">${esc(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${margin.top + ph / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${margin.top + ph / 2})">${esc(opts.yLabel)}</text>`,
  );

  const legendX = margin.left + pw - 8;
  let legendY = margin.top + 10;
  const visible = series.filter((s, i) => curves[i].length > 0);
  if (visible.length > 0) {
    const boxH = visible.length * 16 + 8;
    const boxW = Math.max(...visible.map((s) => s.label.length)) * 6.6 + 34;
    parts.push(
      `<rect x="${legendX - boxW}" y="${legendY - 4}" width="${boxW}" height="${boxH}" ` +
        `fill="white" fill-opacity="0.85" stroke="#cccccc"/>`,
    );
    for (const s of visible) {
      const attr = s.dash ? ` stroke-dasharray="${s.dash}"` : '';
      parts.push(
        `<line x1="${legendX - boxW + 6}" y1="${legendY + 4}" x2="${legendX - boxW + 26}" ` +
          `y2="${legendY + 4}" stroke="${s.color}" stroke-width="2"${attr}/>`,
      );
      parts.push(
        `<text x="${legendX - boxW + 30}" y="${legendY + 8}">${esc(s.label)}</text>`,
      );
      legendY += 16;
    }
  }

  parts.push('</svg>');
  return parts.join('\n');
}
