/** Panel-spec JSON: which estimate files go where, plus figure options. */

import { readFileSync } from "node:fs";
import { z } from "zod";

const panelSchema = z.object({
  file: z.string().min(1),
  label: z.string().default(""),
});

export const specSchema = z.object({
  panels: z.array(panelSchema).min(1),
  output: z.string().optional(),
  xlim: z.tuple([z.number(), z.number()]).optional(),
  ylim: z.tuple([z.number(), z.number()]).optional(),
  reference: z.boolean().default(true),
});

export type PanelSpec = z.infer<typeof specSchema>;

export class SpecError extends Error {}

export function readSpec(path: string): PanelSpec {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SpecError(`${path}: cannot read spec (${(err as Error).message})`);
  }
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new SpecError(`${path}: invalid JSON (${(err as Error).message})`);
  }
  const parsed = specSchema.safeParse(data);
  if (!parsed.success) {
    const issue = parsed.error.issues[0];
    throw new SpecError(`${path}: invalid spec: ${issue.path.join(".")} ${issue.message}`);
  }
  return parsed.data;
}
