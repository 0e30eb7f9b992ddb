import { describe, expect, it } from 'vitest';

import type { PlaygroundApi, SubmitResult } from '../src/api.js';
import type { Banner } from '../src/render.js';
import { EditorSession } from '../src/session.js';
import type { DiagnosticJson, ReportJson, TaskState, TaskStatus } from '../src/types.js';

const FAST_TIMERS = {
  setTimeout: (fn: () => void, _ms: number) => setTimeout(fn, 0),
  clearTimeout: (h: unknown) => clearTimeout(h as ReturnType<typeof setTimeout>),
};

interface FakeTask {
  states: TaskState[];
  result?: ReportJson;
  error?: TaskStatus['error'];
  polls: number;
}

class FakeApi {
  tasks = new Map<string, FakeTask>();
  nextId = 0;
  submitResult: SubmitResult | 'throw' | null = null;
  script: FakeTask | null = null;

  async submit(): Promise<SubmitResult> {
    if (this.submitResult === 'throw') throw new Error('ECONNREFUSED');
    if (this.submitResult) return this.submitResult;
    const id = `task-${this.nextId++}`;
    this.tasks.set(id, this.script ?? { states: ['done'], polls: 0 });
    this.script = null;
    return { kind: 'accepted', id };
  }

  async poll(id: string): Promise<TaskStatus> {
    const task = this.tasks.get(id);
    if (!task) throw new Error('unknown task');
    const state = task.states[Math.min(task.polls, task.states.length - 1)];
    task.polls += 1;
    const status: TaskStatus = { id, state };
    if (state === 'done') status.result = task.result ?? minimalReport();
    if (state === 'failed' || state === 'timed_out') status.error = task.error;
    return status;
  }
}

function minimalReport(): ReportJson {
  const f = { plain: '1', latex: '1' };
  return {
    program: { params: [] },
    config: {},
    dmd: f,
    counts: { n_total: f, n_warm: f, n_cold: f },
    groups: [],
    diagnostics: [],
  };
}

interface Observed {
  reports: ReportJson[];
  banners: Banner[];
  diagnostics: DiagnosticJson[][];
  states: string[];
}

function makeSession(api: FakeApi): [EditorSession, Observed] {
  const observed: Observed = { reports: [], banners: [], diagnostics: [], states: [] };
  const session = new EditorSession(
    api as unknown as PlaygroundApi,
    {
      onStateChange: (s) => observed.states.push(s),
      onReport: (r) => observed.reports.push(r),
      onDiagnostics: (d) => observed.diagnostics.push(d),
      onBanner: (b) => observed.banners.push(b),
    },
    FAST_TIMERS,
  );
  session.source = 'read A[0];';
  return [session, observed];
}

describe('EditorSession', () => {
  it('renders the report when the task completes', async () => {
    const api = new FakeApi();
    api.script = { states: ['queued', 'running', 'done'], polls: 0 };
    const [session, observed] = makeSession(api);
    await session.run();
    expect(observed.reports).toHaveLength(1);
    expect(observed.banners).toHaveLength(0);
    expect(session.lastTaskId).toBe('task-0');
    expect(session.inFlight).toBe(false);
  });

  it('shows a busy banner on 429', async () => {
    const api = new FakeApi();
    api.submitResult = { kind: 'busy' };
    const [session, observed] = makeSession(api);
    await session.run();
    expect(observed.banners.map((b) => b.kind)).toEqual(['busy']);
  });

  it('shows a retry banner when the service is unreachable', async () => {
    const api = new FakeApi();
    api.submitResult = 'throw';
    const [session, observed] = makeSession(api);
    await session.run();
    expect(observed.banners.map((b) => b.kind)).toEqual(['retry']);
  });

  it('shows a timeout notice on timed_out', async () => {
    const api = new FakeApi();
    api.script = { states: ['running', 'timed_out'], polls: 0, error: { message: 'timeout' } };
    const [session, observed] = makeSession(api);
    await session.run();
    expect(observed.banners.map((b) => b.kind)).toEqual(['timeout']);
  });

  it('surfaces diagnostics inline on failure', async () => {
    const api = new FakeApi();
    const diags = [{ category: 'non-affine', message: 'product of two variables', start: 7, end: 10 }];
    api.script = { states: ['failed'], polls: 0, error: { diagnostics: diags } };
    const [session, observed] = makeSession(api);
    await session.run();
    expect(observed.diagnostics).toEqual([diags]);
    expect(observed.banners).toHaveLength(0);
  });

  it('cancels the previous poller on a new submission', async () => {
    const api = new FakeApi();
    api.script = { states: ['running'], polls: 0 }; // first task never finishes
    const [session, observed] = makeSession(api);
    const first = session.run();
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(session.inFlight).toBe(true);
    const firstTask = api.tasks.get('task-0')!;

    api.script = { states: ['done'], polls: 0 };
    await session.run();
    await first;
    const pollsAfterCancel = firstTask.polls;
    await new Promise((resolve) => setTimeout(resolve, 30));
    expect(firstTask.polls).toBe(pollsAfterCancel); // old poller is silent
    expect(observed.reports).toHaveLength(1); // only the new task rendered
    expect(session.lastTaskId).toBe('task-1');
  });
});
