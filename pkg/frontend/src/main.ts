import { pathToFileURL } from 'url';

import { FIGURE_IDS, figureSpec, renderFigure } from './figures.js';

const USAGE = `usage: figure <figure-id> <input.csv> [more.csv ...] <output.svg>

Renders one figure from sweep CSVs and writes the SVG plus a .json sidecar
with the plotted arrays. Figure ids: ${FIGURE_IDS.join(', ')}`;

export function runCli(argv: string[]): number {
  if (argv.includes('-h') || argv.includes('--help')) {
    console.log(USAGE);
    return 0;
  }
  if (argv.length < 3) {
    console.error(USAGE);
    return 1;
  }
  const [id, ...rest] = argv;
  const output = rest[rest.length - 1];
  const inputs = rest.slice(0, -1);
  try {
    const spec = figureSpec(id, inputs, output);
    renderFigure(spec);
  } catch (err) {
    console.error(`figure ${id}: ${(err as Error).message}`);
    return 1;
  }
  console.log(`${id} -> ${output}`);
  return 0;
}

if (import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(runCli(process.argv.slice(2)));
}
