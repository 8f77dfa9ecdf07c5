import { readFileSync } from 'fs';
import { GrayImage } from './png.js';
import { PromptSet } from './schema.js';

export class ModelLoadError extends Error {}

export interface MaskHypothesis {
  mask: Uint8Array;
  score: number;
}

// One prediction call receives the full image and every point at once; the
// caller resolves multi-mask outputs by highest predicted score.
export interface Backend {
  predict(image: GrayImage, prompts: PromptSet): MaskHypothesis[];
}

function paintSquare(mask: Uint8Array, width: number, height: number, cx: number, cy: number, halfSize: number): void {
  for (let y = Math.max(0, cy - halfSize); y <= Math.min(height - 1, cy + halfSize); y++) {
    for (let x = Math.max(0, cx - halfSize); x <= Math.min(width - 1, cx + halfSize); x++) {
      mask[y * width + x] = 1;
    }
  }
}

// Weight-free backend for CI: paints a 3x3 square (clipped at the borders)
// around every positive prompt and ignores negatives.
export class StubBackend implements Backend {
  predict(image: GrayImage, prompts: PromptSet): MaskHypothesis[] {
    const mask = new Uint8Array(image.width * image.height);
    for (const p of prompts.points) {
      if (p.label === 1) {
        paintSquare(mask, image.width, image.height, p.x, p.y, 1);
      }
    }
    return [{ mask, score: 1.0 }];
  }
}

interface SquareStubCheckpoint {
  kind: 'square-stub';
  // one hypothesis per entry: square half-size and its predicted score
  sizes: number[];
  scores: number[];
}

// "Checkpoint-backed" backend: reads hypothesis parameters from a JSON file so
// the load-once-then-predict path (including load failure) is exercisable
// without real model weights.
export class CheckpointBackend implements Backend {
  private checkpoint: SquareStubCheckpoint;

  constructor(checkpointPath: string) {
    let doc: SquareStubCheckpoint;
    try {
      doc = JSON.parse(readFileSync(checkpointPath, 'utf-8'));
    } catch (e) {
      throw new ModelLoadError(`cannot load checkpoint ${checkpointPath}: ${(e as Error).message}`);
    }
    if (doc.kind !== 'square-stub' || !Array.isArray(doc.sizes) || !Array.isArray(doc.scores)
        || doc.sizes.length !== doc.scores.length || doc.sizes.length === 0) {
      throw new ModelLoadError(`malformed checkpoint ${checkpointPath}`);
    }
    this.checkpoint = doc;
  }

  predict(image: GrayImage, prompts: PromptSet): MaskHypothesis[] {
    return this.checkpoint.sizes.map((halfSize, i) => {
      const mask = new Uint8Array(image.width * image.height);
      for (const p of prompts.points) {
        if (p.label === 1) {
          paintSquare(mask, image.width, image.height, p.x, p.y, halfSize);
        }
      }
      return { mask, score: this.checkpoint.scores[i] };
    });
  }
}

export function bestHypothesis(hypotheses: MaskHypothesis[]): Uint8Array {
  let best = hypotheses[0];
  for (const h of hypotheses) {
    if (h.score > best.score) {
      best = h;
    }
  }
  return best.mask;
}

export function loadBackend(name: string, checkpointPath?: string): Backend {
  if (name === 'stub') {
    return new StubBackend();
  }
  if (name === 'checkpoint') {
    if (!checkpointPath) {
      throw new ModelLoadError('backend "checkpoint" requires --checkpoint');
    }
    return new CheckpointBackend(checkpointPath);
  }
  throw new ModelLoadError(`unknown backend: ${name}`);
}
