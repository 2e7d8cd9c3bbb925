import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T = any>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as T;
}

export interface Route {
  method: string;
  path: string | RegExp;
  status?: number;
  body: unknown;
  /** wrap the body as FastAPI's {"detail": ...} error envelope */
  asDetail?: boolean;
}

/** Scripted fetch: consumes routes in order, asserting method+path. */
export function scriptedFetch(routes: Route[]): FetchLike & { remaining: () => number } {
  const queue = [...routes];
  const fn = (async (url: string, init?: RequestInit) => {
    const next = queue.shift();
    if (!next) throw new Error(`unexpected request ${init?.method ?? "GET"} ${url}`);
    const method = init?.method ?? "GET";
    const match =
      typeof next.path === "string" ? url === next.path : next.path.test(url);
    if (method !== next.method || !match) {
      throw new Error(
        `expected ${next.method} ${next.path}, got ${method} ${url}`,
      );
    }
    const status = next.status ?? 200;
    const payload = next.asDetail ? { detail: next.body } : next.body;
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as FetchLike & { remaining: () => number };
  fn.remaining = () => queue.length;
  return fn;
}
