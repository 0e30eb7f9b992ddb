import { describe, expect, it } from 'vitest';

import type { PlaygroundApi } from '../src/api.js';
import {
  INITIAL_DELAY_MS,
  MAX_DELAY_MS,
  PollCancelled,
  pollUntilTerminal,
} from '../src/poller.js';
import type { TaskState, TaskStatus } from '../src/types.js';

/** Poll stub returning a scripted state sequence (last state repeats). */
function scriptedApi(states: TaskState[], onPoll?: () => void): PlaygroundApi {
  let i = 0;
  return {
    poll: async (id: string): Promise<TaskStatus> => {
      onPoll?.();
      const state = states[Math.min(i, states.length - 1)];
      i += 1;
      return { id, state };
    },
  } as unknown as PlaygroundApi;
}

/** Timers that record requested delays but fire on the next tick. */
function recordingTimers(delays: number[]) {
  return {
    setTimeout: (fn: () => void, ms: number) => {
      delays.push(ms);
      return setTimeout(fn, 0);
    },
    clearTimeout: (h: unknown) => clearTimeout(h as ReturnType<typeof setTimeout>),
  };
}

const tick = () => new Promise((resolve) => setTimeout(resolve, 15));

describe('pollUntilTerminal', () => {
  it('resolves on the first terminal state', async () => {
    const delays: number[] = [];
    const api = scriptedApi(['queued', 'running', 'running', 'done']);
    const handle = pollUntilTerminal(api, 't1', recordingTimers(delays));
    const status = await handle.done;
    expect(status.state).toBe('done');
    expect(delays).toEqual([250, 500, 1000]);
  });

  it('backs off from 250 ms and caps at 2 s', async () => {
    const delays: number[] = [];
    const states: TaskState[] = [...Array(7).fill('running') as TaskState[], 'done'];
    const api = scriptedApi(states);
    const handle = pollUntilTerminal(api, 't2', recordingTimers(delays));
    await handle.done;
    expect(delays[0]).toBe(INITIAL_DELAY_MS);
    expect(delays).toEqual([250, 500, 1000, 2000, 2000, 2000, 2000]);
    expect(Math.max(...delays)).toBe(MAX_DELAY_MS);
  });

  it('stops polling after cancel and rejects with PollCancelled', async () => {
    const delays: number[] = [];
    let polls = 0;
    const api = scriptedApi(['running'], () => {
      polls += 1;
    });
    const handle = pollUntilTerminal(api, 't3', recordingTimers(delays));
    await tick();
    const seen = polls;
    expect(seen).toBeGreaterThan(0);
    handle.cancel();
    await expect(handle.done).rejects.toBeInstanceOf(PollCancelled);
    await tick();
    await tick();
    expect(polls).toBeLessThanOrEqual(seen + 1); // at most one in-flight poll completes
  });

  it('cancel is idempotent', async () => {
    const api = scriptedApi(['running']);
    const handle = pollUntilTerminal(api, 't4', recordingTimers([]));
    handle.cancel();
    handle.cancel();
    await expect(handle.done).rejects.toBeInstanceOf(PollCancelled);
  });

  it('rejects when the service becomes unreachable', async () => {
    const api = {
      poll: async () => {
        throw new Error('ECONNREFUSED');
      },
    } as unknown as PlaygroundApi;
    const handle = pollUntilTerminal(api, 't5', recordingTimers([]));
    await expect(handle.done).rejects.toThrow('ECONNREFUSED');
  });

  it('resolves timed_out as a terminal state', async () => {
    const api = scriptedApi(['running', 'timed_out']);
    const handle = pollUntilTerminal(api, 't6', recordingTimers([]));
    const status = await handle.done;
    expect(status.state).toBe('timed_out');
  });
});
