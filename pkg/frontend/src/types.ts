/** Payload shapes the HTTP API exchanges with this client. */

export type Phase =
  | "eligibility"
  | "calibration"
  | "evaluation"
  | "done"
  | "disqualified";

export type MetricName = "relevance" | "effectiveness";

export const METRICS: MetricName[] = ["relevance", "effectiveness"];
export const LEVELS = [0, 1, 2, 3, 4] as const;
export const RATINGS_PER_ITEM = LEVELS.length * METRICS.length;

export interface EligibilityTask {
  problemId: string;
  code: string;
  inputs: string[][];
}

export interface CalibrationItem {
  prompt: string;
  choices: string[];
}

export interface StudyStatePayload {
  annotatorId: string;
  phase: Phase;
  calibrationAttempts: number;
  eligibility?: EligibilityTask;
  calibration?: CalibrationItem[];
  progress?: { completedItems: number; totalItems: number };
}

export interface StudyItemPayload {
  index: number;
  total: number;
  problemId: string;
  submissionId: string;
  title: string;
  statement: string;
  code: string;
  ladder: Record<string, string>;
}

export interface NextItemResponse {
  done: boolean;
  item?: StudyItemPayload;
}

export interface ValidationFlagPayload {
  code: string;
  severity: "error" | "warning";
  detail: string;
}

export interface RevealPayload {
  submissionId: string;
  maxLevel: number;
  levels: Record<string, string>;
  flags: ValidationFlagPayload[];
}

export interface AgreementPayload {
  annotatorIds: string[];
  values: (number | null)[][];
  rowAverages: (number | null)[];
  overallAverage: number;
  offDiagonalAverage: number;
  notes: string[];
}

export interface FigureCell {
  problemId?: string;
  bucket?: string;
  level: number;
  mean: number;
  std: number;
  n: number;
}

export interface FigurePayload {
  metric: MetricName;
  cells: FigureCell[];
}
