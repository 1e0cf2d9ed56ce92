/** Thin typed client over the study service. All traffic funnels through
 * `request`, so tests can observe every raw response body (e.g. to prove
 * calibration answers never reach the client). */

import type {
  AgreementPayload,
  FigurePayload,
  MetricName,
  NextItemResponse,
  RevealPayload,
  StudyStatePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface StudyApiOptions {
  baseUrl: string;
  token?: string;
  fetchImpl?: FetchLike;
  /** Called with every raw response body, before parsing. */
  onResponseBody?: (path: string, body: string) => void;
}

export class StudyApi {
  readonly baseUrl: string;
  token: string | undefined;
  private readonly fetchImpl: FetchLike;
  private readonly onResponseBody?: (path: string, body: string) => void;

  constructor(options: StudyApiOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, "");
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.onResponseBody = options.onResponseBody;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["X-Annotator-Token"] = this.token;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const raw = await response.text();
    this.onResponseBody?.(path, raw);
    if (!response.ok) {
      let detail = raw;
      try {
        detail = (JSON.parse(raw) as { detail?: string }).detail ?? raw;
      } catch {
        // non-JSON error body: keep raw text
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(raw) as T;
  }

  async register(displayName: string, role: string): Promise<string> {
    const created = await this.request<{ annotatorId: string; token: string }>(
      "POST",
      "/api/annotators",
      { displayName, role },
    );
    this.token = created.token;
    return created.annotatorId;
  }

  state(): Promise<StudyStatePayload> {
    return this.request("GET", "/api/study/state");
  }

  submitEligibility(predictedOutputs: string[]): Promise<{ phase: string }> {
    return this.request("POST", "/api/study/eligibility", { predictedOutputs });
  }

  submitCalibration(
    answers: number[],
  ): Promise<{ phase: string; wrongIndices: number[] }> {
    return this.request("POST", "/api/study/calibration", { answers });
  }

  nextItem(): Promise<NextItemResponse> {
    return this.request("GET", "/api/study/next");
  }

  submitRating(
    submissionId: string,
    level: number,
    metric: MetricName,
    score: number,
  ): Promise<{ ok: boolean }> {
    return this.request("POST", "/api/study/ratings", {
      submissionId,
      level,
      metric,
      score,
    });
  }

  ladder(submissionId: string, maxLevel: number): Promise<RevealPayload> {
    return this.request(
      "GET",
      `/api/ladders/${encodeURIComponent(submissionId)}?maxLevel=${maxLevel}`,
    );
  }

  agreement(): Promise<AgreementPayload> {
    return this.request("GET", "/api/analytics/agreement");
  }

  figure(which: 1 | 2, metric: MetricName): Promise<FigurePayload> {
    return this.request("GET", `/api/analytics/fig${which}?metric=${metric}`);
  }
}
