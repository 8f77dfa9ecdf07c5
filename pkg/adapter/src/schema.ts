import { z } from 'zod';

// Wire format shared with the prompt-generation pipeline: positive points are
// label 1, negative points label 0, coordinates are pixel indices with the
// origin at the top-left corner.
export const pointSchema = z.object({
  x: z.number().int().nonnegative(),
  y: z.number().int().nonnegative(),
  label: z.union([z.literal(0), z.literal(1)]),
});

export const promptSetSchema = z
  .object({
    image: z.string(),
    width: z.number().int().positive(),
    height: z.number().int().positive(),
    points: z.array(pointSchema),
    config_digest: z.string().optional(),
  })
  .refine(
    doc => doc.points.every(p => p.x < doc.width && p.y < doc.height),
    { message: 'point coordinates out of bounds' },
  );

export type PointPrompt = z.infer<typeof pointSchema>;
export type PromptSet = z.infer<typeof promptSetSchema>;

export class SchemaError extends Error {}

export function parsePromptSet(text: string): PromptSet {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new SchemaError(`prompt JSON is not valid JSON: ${(e as Error).message}`);
  }
  const result = promptSetSchema.safeParse(doc);
  if (!result.success) {
    throw new SchemaError(`prompt JSON failed validation: ${result.error.issues[0].message}`);
  }
  return result.data;
}
