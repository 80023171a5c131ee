import type { ApiClient } from "./api";
import type { VitalsJob } from "./types";

const DEFAULT_INTERVAL_MS = 1000;

export interface PollOptions {
  intervalMs?: number;
  /** Injectable for tests; defaults to a real timer. */
  sleep?: (ms: number) => Promise<void>;
  /** Called with every observed snapshot, terminal one included. */
  onUpdate?: (job: VitalsJob) => void;
  /** Give up after this many polls (0 = never). */
  maxPolls?: number;
}

function realSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Poll a vitals job once a second until it reaches done or failed and
 * return the terminal snapshot.
 */
export async function pollJob(
  api: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<VitalsJob> {
  const interval = options.intervalMs ?? DEFAULT_INTERVAL_MS;
  const sleep = options.sleep ?? realSleep;
  let polls = 0;
  for (;;) {
    const job = await api.getJob(jobId);
    polls += 1;
    options.onUpdate?.(job);
    if (job.state === "done" || job.state === "failed") {
      return job;
    }
    if (options.maxPolls && polls >= options.maxPolls) {
      throw new Error(`job ${jobId} still ${job.state} after ${polls} polls`);
    }
    await sleep(interval);
  }
}
