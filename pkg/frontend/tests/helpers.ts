import { readFileSync } from 'node:fs';

import type { Envelope } from '../src/types.js';

export function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, 'utf8')) as T;
}

/** Unwrap a recorded envelope fixture the way the ApiClient would. */
export function dataOf<T>(name: string): T {
  const doc = fixture<Envelope<T>>(name);
  if (doc.data === undefined) throw new Error(`fixture ${name} has no data`);
  return doc.data;
}
