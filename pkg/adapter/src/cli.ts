#!/usr/bin/env node
import { parseArgs } from 'node:util';
import { AdapterConfig, DimensionError, adaptRefine } from './index.js';
import { ModelLoadError } from './backend.js';
import { SchemaError } from './schema.js';

const EXIT_OK = 0;
const EXIT_USAGE = 1;
const EXIT_SCHEMA = 2;
const EXIT_DIMENSION = 3;
const EXIT_MODEL = 4;

const USAGE = `usage: segmenter-adapter --image IMG --prompts JSON --output PNG
                         [--backend stub|checkpoint] [--checkpoint FILE] [--device DEV]

exit codes: 0 ok, 1 usage, 2 schema violation, 3 dimension mismatch, 4 model load failure`;

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        image: { type: 'string' },
        prompts: { type: 'string' },
        output: { type: 'string' },
        backend: { type: 'string', default: 'stub' },
        checkpoint: { type: 'string' },
        device: { type: 'string', default: 'cpu' },
        help: { type: 'boolean', default: false },
      },
    }));
  } catch (e) {
    console.error((e as Error).message);
    console.error(USAGE);
    return EXIT_USAGE;
  }
  if (values.help) {
    console.log(USAGE);
    return EXIT_OK;
  }
  if (!values.image || !values.prompts || !values.output) {
    console.error('--image, --prompts and --output are required');
    console.error(USAGE);
    return EXIT_USAGE;
  }
  const cfg: AdapterConfig = {
    imagePath: values.image,
    promptsPath: values.prompts,
    outputPath: values.output,
    backend: values.backend!,
    checkpointPath: values.checkpoint,
    device: values.device,
  };
  try {
    adaptRefine(cfg);
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    if (e instanceof SchemaError) return EXIT_SCHEMA;
    if (e instanceof DimensionError) return EXIT_DIMENSION;
    if (e instanceof ModelLoadError) return EXIT_MODEL;
    if ((e as NodeJS.ErrnoException).code === 'ENOENT') return EXIT_USAGE;
    throw e;
  }
  return EXIT_OK;
}

process.exit(main(process.argv.slice(2)));
