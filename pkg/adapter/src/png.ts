import { readFileSync, writeFileSync } from 'fs';
import { PNG } from 'pngjs';

export interface GrayImage {
  width: number;
  height: number;
  // row-major, one byte per pixel
  data: Uint8Array;
}

// Reads any PNG and keeps channel 0, matching the pipeline's convention of
// treating multi-channel rasters as grayscale via their first channel.
export function readGrayscale(path: string): GrayImage {
  const png = PNG.sync.read(readFileSync(path));
  const out = new Uint8Array(png.width * png.height);
  for (let i = 0; i < out.length; i++) {
    out[i] = png.data[i * 4];
  }
  return { width: png.width, height: png.height, data: out };
}

// Writes a binary mask as an 8-bit grayscale-compatible PNG where foreground
// is 255 and background 0 — the same encoding the pipeline's raster-io uses.
export function writeMask(mask: Uint8Array, width: number, height: number, path: string): void {
  const png = new PNG({ width, height });
  for (let i = 0; i < mask.length; i++) {
    const v = mask[i] !== 0 ? 255 : 0;
    png.data[i * 4] = v;
    png.data[i * 4 + 1] = v;
    png.data[i * 4 + 2] = v;
    png.data[i * 4 + 3] = 255;
  }
  writeFileSync(path, PNG.sync.write(png, { colorType: 0 }));
}
