import type { PlaygroundApi } from './api.js';
import { PollCancelled, pollUntilTerminal, type PollHandle, type PollTimers } from './poller.js';
import type { Banner } from './render.js';
import type { AnalysisConfig, DiagnosticJson, ReportJson, TaskState } from './types.js';

export interface SessionView {
  onStateChange?: (state: TaskState | 'idle' | 'submitting') => void;
  onReport: (report: ReportJson) => void;
  onDiagnostics: (diagnostics: DiagnosticJson[]) => void;
  onBanner: (banner: Banner) => void;
  onClearBanner?: () => void;
}

/**
 * One editor session: holds the source text, the selected example, and the
 * current task. There is at most one in-flight task; starting a new run
 * cancels the previous poller first, so no timers are orphaned.
 */
export class EditorSession {
  source = '';
  selectedExample: string | null = null;
  lastTaskId: string | null = null;
  lastReport: ReportJson | null = null;

  private handle: PollHandle | null = null;

  constructor(
    private readonly api: PlaygroundApi,
    private readonly view: SessionView,
    private readonly timers?: PollTimers,
  ) {}

  get inFlight(): boolean {
    return this.handle !== null;
  }

  cancel(): void {
    if (this.handle) {
      this.handle.cancel();
      this.handle = null;
    }
  }

  async run(config: AnalysisConfig = {}): Promise<void> {
    this.cancel();
    this.view.onClearBanner?.();
    this.view.onStateChange?.('submitting');

    let submitted;
    try {
      submitted = await this.api.submit(this.source, config);
    } catch (err) {
      this.view.onStateChange?.('idle');
      this.view.onBanner({
        kind: 'retry',
        message: `Cannot reach the analysis service (${String(err)}). Retry when it is back.`,
      });
      return;
    }
    if (submitted.kind === 'busy') {
      this.view.onStateChange?.('idle');
      this.view.onBanner({
        kind: 'busy',
        message: 'Server busy: the job queue is full. Try again in a moment.',
      });
      return;
    }
    if (submitted.kind === 'rejected') {
      this.view.onStateChange?.('idle');
      this.view.onBanner({ kind: 'rejected', message: submitted.message });
      return;
    }

    this.lastTaskId = submitted.id;
    this.view.onStateChange?.('queued');
    const handle = pollUntilTerminal(this.api, submitted.id, this.timers);
    this.handle = handle;

    let status;
    try {
      status = await handle.done;
    } catch (err) {
      if (this.handle === handle) this.handle = null;
      if (err instanceof PollCancelled) return;
      this.view.onStateChange?.('idle');
      this.view.onBanner({
        kind: 'retry',
        message: `Lost contact with the analysis service (${String(err)}). Retry when it is back.`,
      });
      return;
    }
    if (this.handle === handle) this.handle = null;

    this.view.onStateChange?.(status.state);
    if (status.state === 'done' && status.result) {
      this.lastReport = status.result;
      this.view.onReport(status.result);
      return;
    }
    if (status.state === 'timed_out') {
      this.view.onBanner({
        kind: 'timeout',
        message: 'Analysis timed out on the server; the job was abandoned.',
      });
      return;
    }
    const diagnostics = status.error?.diagnostics;
    if (diagnostics && diagnostics.length > 0) {
      this.view.onDiagnostics(diagnostics);
    } else {
      this.view.onBanner({
        kind: 'rejected',
        message: status.error?.message ?? 'Analysis failed.',
      });
    }
  }
}
