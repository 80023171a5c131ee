import { readFileSync } from "node:fs";

export function fixture<T = any>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export interface RecordedCall {
  url: string;
  method: string;
  body?: unknown;
}

/**
 * fetch stub that replays canned responses in order and records what the
 * client sent; `steps` maps one entry per expected request.
 */
export function scriptedFetch(
  steps: Array<{ status?: number; body?: unknown }>,
): { fetchFn: typeof fetch; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  let index = 0;
  const fetchFn = (async (input: any, init?: any) => {
    const step = steps[index];
    if (!step) throw new Error(`unexpected request #${index + 1}: ${input}`);
    index += 1;
    calls.push({
      url: String(input),
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    const status = step.status ?? 200;
    if (status === 204) return new Response(null, { status });
    return new Response(JSON.stringify(step.body ?? {}), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
  return { fetchFn, calls };
}
