import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { CheckpointBackend, StubBackend, bestHypothesis } from '../src/backend.js';
import { adaptRefine } from '../src/index.js';
import { readGrayscale, writeMask } from '../src/png.js';
import { parsePromptSet, SchemaError } from '../src/schema.js';

const FIXTURES = join(__dirname, 'fixtures');
const IMAGE = join(FIXTURES, 'phantom_fixture.png');
const PROMPTS = join(FIXTURES, 'phantom_fixture.prompts.json');
const CLI = join(__dirname, '..', 'dist', 'cli.js');

function tmp(): string {
  return mkdtempSync(join(tmpdir(), 'adapter-'));
}

function runCli(args: string[]): { status: number | null; stderr: string } {
  const res = spawnSync('node', [CLI, ...args], { encoding: 'utf-8' });
  return { status: res.status, stderr: res.stderr };
}

describe('schema', () => {
  it('accepts the pipeline-produced fixture', () => {
    const ps = parsePromptSet(readFileSync(PROMPTS, 'utf-8'));
    expect(ps.width).toBe(320);
    expect(ps.height).toBe(320);
    expect(ps.points.length).toBe(40);
    expect(ps.points.filter(p => p.label === 1).length).toBe(20);
  });

  it('rejects label 2', () => {
    const doc = { image: 'x', width: 4, height: 4, points: [{ x: 0, y: 0, label: 2 }] };
    expect(() => parsePromptSet(JSON.stringify(doc))).toThrow(SchemaError);
  });

  it('rejects out-of-bounds coordinates', () => {
    const doc = { image: 'x', width: 4, height: 4, points: [{ x: 4, y: 0, label: 1 }] };
    expect(() => parsePromptSet(JSON.stringify(doc))).toThrow(SchemaError);
  });

  it('rejects non-JSON', () => {
    expect(() => parsePromptSet('not json')).toThrow(SchemaError);
  });
});

describe('png round trip', () => {
  it('mask survives write/read through raster conventions', () => {
    const dir = tmp();
    const mask = new Uint8Array(6 * 4);
    mask[0] = 1;
    mask[6 * 4 - 1] = 1;
    const path = join(dir, 'm.png');
    writeMask(mask, 6, 4, path);
    const back = readGrayscale(path);
    expect(back.width).toBe(6);
    expect(back.height).toBe(4);
    for (let i = 0; i < mask.length; i++) {
      expect(back.data[i]).toBe(mask[i] !== 0 ? 255 : 0);
    }
  });
});

describe('stub backend', () => {
  it('paints 3x3 squares around positives, clipped at borders', () => {
    const prompts = parsePromptSet(JSON.stringify({
      image: 'x', width: 8, height: 8,
      points: [
        { x: 0, y: 0, label: 1 },
        { x: 4, y: 4, label: 1 },
        { x: 7, y: 7, label: 0 },
      ],
    }));
    const image = { width: 8, height: 8, data: new Uint8Array(64) };
    const mask = bestHypothesis(new StubBackend().predict(image, prompts));
    expect(mask[0]).toBe(1);              // clipped corner square
    expect(mask[1 * 8 + 1]).toBe(1);
    expect(mask[4 * 8 + 4]).toBe(1);
    expect(mask[3 * 8 + 3]).toBe(1);
    expect(mask[7 * 8 + 7]).toBe(0);      // negatives never painted
    const area = mask.reduce((a, b) => a + b, 0);
    expect(area).toBe(4 + 9);
  });
});

describe('checkpoint backend', () => {
  it('picks the highest-scoring hypothesis', () => {
    const dir = tmp();
    const ckpt = join(dir, 'model.json');
    writeFileSync(ckpt, JSON.stringify({ kind: 'square-stub', sizes: [0, 2], scores: [0.4, 0.9] }));
    const backend = new CheckpointBackend(ckpt);
    const prompts = parsePromptSet(JSON.stringify({
      image: 'x', width: 11, height: 11, points: [{ x: 5, y: 5, label: 1 }],
    }));
    const image = { width: 11, height: 11, data: new Uint8Array(121) };
    const mask = bestHypothesis(backend.predict(image, prompts));
    const area = mask.reduce((a, b) => a + b, 0);
    expect(area).toBe(25); // half-size 2 won over half-size 0
  });
});

describe('adapter contract (secondary acceptance)', () => {
  it('consumes pipeline prompts and emits a conformant mask PNG', () => {
    const dir = tmp();
    const out = join(dir, 'refined.png');
    adaptRefine({
      imagePath: IMAGE, promptsPath: PROMPTS, outputPath: out, backend: 'stub',
    });
    const prompts = parsePromptSet(readFileSync(PROMPTS, 'utf-8'));
    const mask = readGrayscale(out);
    // dimensions match the declaration and the image
    expect(mask.width).toBe(prompts.width);
    expect(mask.height).toBe(prompts.height);
    // binarizes cleanly per raster-io conventions
    for (const v of mask.data) {
      expect(v === 0 || v === 255).toBe(true);
    }
    // every positive prompt pixel is foreground
    for (const p of prompts.points) {
      if (p.label === 1) {
        expect(mask.data[p.y * mask.width + p.x]).toBe(255);
      }
    }
  });

  it('cli: happy path exits 0 and writes the mask', () => {
    const dir = tmp();
    const out = join(dir, 'refined.png');
    const res = runCli(['--image', IMAGE, '--prompts', PROMPTS, '--output', out]);
    expect(res.status).toBe(0);
    expect(readGrayscale(out).width).toBe(320);
  });

  it('cli: schema violation exits 2 before model load', () => {
    const dir = tmp();
    const bad = join(dir, 'bad.json');
    writeFileSync(bad, JSON.stringify({
      image: 'x', width: 320, height: 320, points: [{ x: 0, y: 0, label: 2 }],
    }));
    // a checkpoint path that cannot load: model load would exit 4, so exit 2
    // proves validation ran first
    const res = runCli(['--image', IMAGE, '--prompts', bad,
      '--output', join(dir, 'o.png'), '--backend', 'checkpoint',
      '--checkpoint', join(dir, 'missing.json')]);
    expect(res.status).toBe(2);
  });

  it('cli: dimension mismatch exits 3', () => {
    const dir = tmp();
    const small = join(dir, 'small.json');
    const doc = JSON.parse(readFileSync(PROMPTS, 'utf-8'));
    doc.width = 100;
    doc.points = doc.points.filter((p: { x: number }) => p.x < 100);
    writeFileSync(small, JSON.stringify(doc));
    const res = runCli(['--image', IMAGE, '--prompts', small, '--output', join(dir, 'o.png')]);
    expect(res.status).toBe(3);
  });

  it('cli: model load failure exits 4', () => {
    const dir = tmp();
    const res = runCli(['--image', IMAGE, '--prompts', PROMPTS,
      '--output', join(dir, 'o.png'), '--backend', 'checkpoint',
      '--checkpoint', join(dir, 'missing.json')]);
    expect(res.status).toBe(4);
  });

  it('cli: missing required flag exits 1', () => {
    const res = runCli(['--image', IMAGE]);
    expect(res.status).toBe(1);
  });
});
