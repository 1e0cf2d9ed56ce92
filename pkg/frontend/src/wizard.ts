/** Study wizard state machine: eligibility quiz, calibration loop, and the
 * fifteen-item evaluation sequence. Framework-free so the flow can run
 * headless (tests) or drive DOM rendering (browser).
 *
 * Ratings are drafted locally (pluggable store, localStorage in the browser)
 * and flushed to the server when an item completes, so a refresh or a failed
 * request never loses entered scores. */

import { ApiError, StudyApi } from "./api.js";
import {
  CalibrationItem,
  EligibilityTask,
  METRICS,
  MetricName,
  Phase,
  RATINGS_PER_ITEM,
  StudyItemPayload,
} from "./types.js";

export interface DraftStore {
  get(key: string): string | null;
  set(key: string, value: string): void;
  remove(key: string): void;
}

export class MemoryDraftStore implements DraftStore {
  private readonly data = new Map<string, string>();
  get(key: string): string | null {
    return this.data.get(key) ?? null;
  }
  set(key: string, value: string): void {
    this.data.set(key, value);
  }
  remove(key: string): void {
    this.data.delete(key);
  }
}

export type DraftRatings = Record<string, number>; // "level|metric" -> 1..5

export function draftKey(level: number, metric: MetricName): string {
  return `${level}|${metric}`;
}

export interface WizardView {
  phase: Phase | "error";
  eligibility?: { task: EligibilityTask; predictions: string[] };
  calibration?: {
    items: CalibrationItem[];
    selections: (number | null)[];
    wrongIndices: number[];
    attempts: number;
  };
  evaluation?: {
    item: StudyItemPayload;
    draft: DraftRatings;
    nextEnabled: boolean;
  };
  progress?: { completedItems: number; totalItems: number };
  errorMessage?: string;
}

export class StudyWizard {
  phase: Phase | "error" = "eligibility";
  eligibilityTask: EligibilityTask | null = null;
  predictions: string[] = [];
  calibrationItems: CalibrationItem[] = [];
  selections: (number | null)[] = [];
  wrongIndices: number[] = [];
  calibrationAttempts = 0;
  currentItem: StudyItemPayload | null = null;
  progress = { completedItems: 0, totalItems: 15 };
  errorMessage = "";

  constructor(
    private readonly api: StudyApi,
    private readonly drafts: DraftStore = new MemoryDraftStore(),
  ) {}

  /** Pull server state; safe to call on load and after a refresh. */
  async refresh(): Promise<void> {
    const state = await this.api.state();
    this.phase = state.phase;
    this.calibrationAttempts = state.calibrationAttempts;
    if (state.phase === "eligibility" && state.eligibility) {
      this.eligibilityTask = state.eligibility;
      if (this.predictions.length !== state.eligibility.inputs.length) {
        this.predictions = state.eligibility.inputs.map(() => "");
      }
    }
    if (state.phase === "calibration" && state.calibration) {
      this.calibrationItems = state.calibration;
      if (this.selections.length !== state.calibration.length) {
        this.selections = state.calibration.map(() => null);
      }
    }
    if (state.progress) this.progress = state.progress;
    if (state.phase === "evaluation") {
      await this.loadCurrentItem();
    }
  }

  setPrediction(index: number, value: string): void {
    this.predictions[index] = value;
  }

  async submitEligibility(): Promise<Phase> {
    const result = await this.api.submitEligibility(this.predictions);
    this.phase = result.phase as Phase;
    if (this.phase === "calibration") await this.refresh();
    return this.phase;
  }

  selectCalibration(index: number, choice: number): void {
    this.selections[index] = choice;
    // a new choice clears the stale highlight on that item
    this.wrongIndices = this.wrongIndices.filter((i) => i !== index);
  }

  get calibrationComplete(): boolean {
    return (
      this.selections.length > 0 && this.selections.every((s) => s !== null)
    );
  }

  async submitCalibration(): Promise<{ phase: Phase; wrongIndices: number[] }> {
    if (!this.calibrationComplete) {
      throw new Error("answer every calibration question first");
    }
    const result = await this.api.submitCalibration(
      this.selections.map((s) => s as number),
    );
    this.phase = result.phase as Phase;
    this.wrongIndices = result.wrongIndices;
    this.calibrationAttempts += result.wrongIndices.length ? 1 : 0;
    if (this.phase === "evaluation") {
      this.wrongIndices = [];
      await this.loadCurrentItem();
    }
    return { phase: this.phase, wrongIndices: this.wrongIndices };
  }

  private draftStorageKey(submissionId: string): string {
    return `ladderforge:draft:${submissionId}`;
  }

  loadDraft(submissionId: string): DraftRatings {
    const raw = this.drafts.get(this.draftStorageKey(submissionId));
    if (!raw) return {};
    try {
      return JSON.parse(raw) as DraftRatings;
    } catch {
      return {};
    }
  }

  private saveDraft(submissionId: string, draft: DraftRatings): void {
    this.drafts.set(this.draftStorageKey(submissionId), JSON.stringify(draft));
  }

  async loadCurrentItem(): Promise<void> {
    const next = await this.api.nextItem();
    if (next.done) {
      this.phase = "done";
      this.currentItem = null;
      this.progress = { ...this.progress, completedItems: this.progress.totalItems };
      return;
    }
    this.currentItem = next.item ?? null;
    if (this.currentItem) {
      this.progress = {
        completedItems: this.currentItem.index,
        totalItems: this.currentItem.total,
      };
    }
  }

  get draft(): DraftRatings {
    if (!this.currentItem) return {};
    return this.loadDraft(this.currentItem.submissionId);
  }

  setRating(level: number, metric: MetricName, score: number): void {
    if (!this.currentItem) throw new Error("no evaluation item is active");
    if (!Number.isInteger(score) || score < 1 || score > 5) {
      throw new Error(`score must be 1..5, got ${score}`);
    }
    const draft = this.loadDraft(this.currentItem.submissionId);
    draft[draftKey(level, metric)] = score;
    this.saveDraft(this.currentItem.submissionId, draft);
  }

  /** The Next control: enabled only once all ten ratings are drafted. */
  get nextEnabled(): boolean {
    if (!this.currentItem) return false;
    return Object.keys(this.draft).length >= RATINGS_PER_ITEM;
  }

  /** Flush the drafted ratings and advance to the following item. */
  async submitItemRatings(): Promise<void> {
    const item = this.currentItem;
    if (!item) throw new Error("no evaluation item is active");
    if (!this.nextEnabled) {
      throw new Error("all ten ratings must be set before advancing");
    }
    const draft = this.loadDraft(item.submissionId);
    for (const level of [0, 1, 2, 3, 4]) {
      for (const metric of METRICS) {
        const score = draft[draftKey(level, metric)];
        await this.api.submitRating(item.submissionId, level, metric, score);
      }
    }
    this.drafts.remove(this.draftStorageKey(item.submissionId));
    await this.loadCurrentItem();
  }

  view(): WizardView {
    const view: WizardView = { phase: this.phase, progress: this.progress };
    if (this.phase === "eligibility" && this.eligibilityTask) {
      view.eligibility = {
        task: this.eligibilityTask,
        predictions: this.predictions,
      };
    }
    if (this.phase === "calibration") {
      view.calibration = {
        items: this.calibrationItems,
        selections: this.selections,
        wrongIndices: this.wrongIndices,
        attempts: this.calibrationAttempts,
      };
    }
    if (this.phase === "evaluation" && this.currentItem) {
      view.evaluation = {
        item: this.currentItem,
        draft: this.draft,
        nextEnabled: this.nextEnabled,
      };
    }
    if (this.phase === "error") view.errorMessage = this.errorMessage;
    return view;
  }

  /** Wrap an action so transport failures surface as a retryable banner
   * instead of losing wizard state. */
  async guarded(action: () => Promise<void>): Promise<void> {
    try {
      await action();
      if (this.phase === "error") this.phase = "eligibility";
      this.errorMessage = "";
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // stale client state: re-sync with the server instead of failing
        await this.refresh();
        return;
      }
      this.errorMessage = error instanceof Error ? error.message : String(error);
      this.phase = "error";
    }
  }
}
