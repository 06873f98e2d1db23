/**
 * Reader for estimate CSVs: `# key: value` metadata lines followed by an
 * `r,value[,reference]` table.  Only schema 1 is accepted; every failure
 * names the offending file.
 */

import { readFileSync } from "node:fs";

export const SCHEMA_VERSION = "1";

export interface EstimateData {
  r: number[];
  value: number[];
  reference?: number[];
  meta: Record<string, string>;
}

export class CsvError extends Error {}

export function parseEstimate(path: string, text: string): EstimateData {
  const meta: Record<string, string> = {};
  let header: string[] | null = null;
  const rows: string[][] = [];

  for (const raw of text.split("\n")) {
    const line = raw.trimEnd();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const sep = body.indexOf(":");
      if (sep < 0) throw new CsvError(`${path}: bad metadata line: ${line}`);
      meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
    } else if (header === null) {
      header = line.split(",");
    } else {
      rows.push(line.split(","));
    }
  }

  if (meta["schema"] !== SCHEMA_VERSION) {
    throw new CsvError(
      `${path}: unsupported schema ${JSON.stringify(meta["schema"])} (need ${SCHEMA_VERSION})`,
    );
  }
  const plain = header?.join(",") === "r,value";
  const withRef = header?.join(",") === "r,value,reference";
  if (!plain && !withRef) {
    throw new CsvError(`${path}: unexpected header ${JSON.stringify(header)}`);
  }

  const r: number[] = [];
  const value: number[] = [];
  const reference: number[] = [];
  for (const row of rows) {
    if (row.length !== (withRef ? 3 : 2)) {
      throw new CsvError(`${path}: malformed row ${JSON.stringify(row)}`);
    }
    const nums = row.map(Number);
    if (nums.some((v) => !Number.isFinite(v))) {
      throw new CsvError(`${path}: non-numeric row ${JSON.stringify(row)}`);
    }
    r.push(nums[0]);
    value.push(nums[1]);
    if (withRef) reference.push(nums[2]);
  }
  return withRef ? { r, value, reference, meta } : { r, value, meta };
}

export function readEstimate(path: string): EstimateData {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvError(`${path}: cannot read file (${(err as Error).message})`);
  }
  return parseEstimate(path, text);
}
