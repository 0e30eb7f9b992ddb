import type { PlaygroundApi } from './api.js';
import type { TaskStatus } from './types.js';

export interface PollHandle {
  done: Promise<TaskStatus>;
  cancel: () => void;
}

export interface PollTimers {
  setTimeout: (fn: () => void, ms: number) => unknown;
  clearTimeout: (handle: unknown) => void;
}

export const INITIAL_DELAY_MS = 250;
export const MAX_DELAY_MS = 2000;

export class PollCancelled extends Error {
  constructor() {
    super('polling cancelled');
  }
}

/**
 * Poll a task until it reaches a terminal state, with exponential backoff
 * (250 ms doubling to a 2 s cap). Cancelling rejects `done` with
 * PollCancelled and clears any pending timer, so no timers outlive the
 * poller. Network errors reject immediately.
 */
export function pollUntilTerminal(
  api: PlaygroundApi,
  id: string,
  timers: PollTimers = {
    setTimeout: (fn, ms) => setTimeout(fn, ms),
    clearTimeout: (h) => clearTimeout(h as ReturnType<typeof setTimeout>),
  },
): PollHandle {
  let cancelled = false;
  let pending: unknown = null;
  let rejectDone: (err: Error) => void;

  const done = new Promise<TaskStatus>((resolve, reject) => {
    rejectDone = reject;
    let delay = INITIAL_DELAY_MS;

    const step = async (): Promise<void> => {
      pending = null;
      let status: TaskStatus;
      try {
        status = await api.poll(id);
      } catch (err) {
        if (!cancelled) reject(err instanceof Error ? err : new Error(String(err)));
        return;
      }
      if (cancelled) return;
      if (status.state === 'done' || status.state === 'failed' || status.state === 'timed_out') {
        resolve(status);
        return;
      }
      pending = timers.setTimeout(() => void step(), delay);
      delay = Math.min(delay * 2, MAX_DELAY_MS);
    };

    void step();
  });
  // cancellation is the caller's normal path; avoid unhandled rejections
  done.catch(() => undefined);

  return {
    done,
    cancel: () => {
      if (cancelled) return;
      cancelled = true;
      if (pending !== null) {
        timers.clearTimeout(pending);
        pending = null;
      }
      rejectDone(new PollCancelled());
    },
  };
}
