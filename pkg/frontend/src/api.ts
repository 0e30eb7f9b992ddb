import type { AnalysisConfig, TaskStatus } from './types.js';

export type SubmitResult =
  | { kind: 'accepted'; id: string }
  | { kind: 'rejected'; message: string }
  | { kind: 'busy' };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin client for the playground task API. Network failures throw. */
export class PlaygroundApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async submit(source: string, config: AnalysisConfig = {}): Promise<SubmitResult> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/tasks`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ source, config }),
    });
    if (response.status === 202) {
      const body = (await response.json()) as { id: string };
      return { kind: 'accepted', id: body.id };
    }
    if (response.status === 429) {
      return { kind: 'busy' };
    }
    let message = `submit failed with status ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) message = body.error;
    } catch {
      // keep the status-based message
    }
    return { kind: 'rejected', message };
  }

  async poll(id: string): Promise<TaskStatus> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/tasks/${id}`);
    if (!response.ok) {
      throw new Error(`poll failed with status ${response.status}`);
    }
    return (await response.json()) as TaskStatus;
  }
}
