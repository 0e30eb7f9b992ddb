export interface FormulaJson {
  plain: string;
  latex: string;
}

export interface DiagnosticJson {
  category: string;
  message: string;
  start: number;
  end: number;
}

export interface GroupJson {
  rd: FormulaJson;
  multiplicity: FormulaJson;
  scaling: boolean;
  class: { source: number; pred: number; carrier: number };
  boundary?: number;
  source_label?: string;
  pred_label?: string;
  fitted?: boolean;
  fit_error?: string;
}

export interface ReportJson {
  program: { params: string[] };
  config: Record<string, unknown>;
  dmd: FormulaJson;
  counts: { n_total: FormulaJson; n_warm: FormulaJson; n_cold: FormulaJson };
  groups: GroupJson[];
  diagnostics: DiagnosticJson[];
}

export type TaskState = 'queued' | 'running' | 'done' | 'failed' | 'timed_out';

export interface TaskStatus {
  id: string;
  state: TaskState;
  result?: ReportJson;
  error?: { message?: string; diagnostics?: DiagnosticJson[] };
  submitted_at?: number;
  finished_at?: number;
}

export interface AnalysisConfig {
  block_size?: number;
  num_sets?: number;
}
