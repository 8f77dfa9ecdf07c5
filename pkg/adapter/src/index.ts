import { readFileSync } from 'fs';
import { Backend, bestHypothesis, loadBackend } from './backend.js';
import { readGrayscale, writeMask } from './png.js';
import { parsePromptSet } from './schema.js';

export { parsePromptSet, SchemaError, promptSetSchema } from './schema.js';
export { readGrayscale, writeMask } from './png.js';
export {
  Backend,
  CheckpointBackend,
  ModelLoadError,
  StubBackend,
  bestHypothesis,
  loadBackend,
} from './backend.js';

export class DimensionError extends Error {}

export interface AdapterConfig {
  imagePath: string;
  promptsPath: string;
  outputPath: string;
  backend: string;
  checkpointPath?: string;
  device?: string;
}

// Validation happens strictly before the backend is constructed, so a bad
// prompt file or mismatched image never triggers a model load.
export function adaptRefine(cfg: AdapterConfig, preloaded?: Backend): void {
  const prompts = parsePromptSet(readFileSync(cfg.promptsPath, 'utf-8'));
  const image = readGrayscale(cfg.imagePath);
  if (image.width !== prompts.width || image.height !== prompts.height) {
    throw new DimensionError(
      `image is ${image.width}x${image.height} but prompts declare ${prompts.width}x${prompts.height}`,
    );
  }
  const backend = preloaded ?? loadBackend(cfg.backend, cfg.checkpointPath);
  const mask = bestHypothesis(backend.predict(image, prompts));
  writeMask(mask, image.width, image.height, cfg.outputPath);
}
