import { beforeEach, describe, expect, it } from "vitest";

import { StudyApi } from "../src/api.js";
import { MemoryDraftStore, StudyWizard } from "../src/wizard.js";
import type {
  NextItemResponse,
  StudyItemPayload,
  StudyStatePayload,
} from "../src/types.js";

/** In-memory stand-in for the study service, mirroring its state machine. */
class FakeServer {
  phase: "eligibility" | "calibration" | "evaluation" | "done" | "disqualified" =
    "eligibility";
  attempts = 0;
  ratings = new Map<string, number>();
  items: StudyItemPayload[];
  expected = ["4", "0", "12"];
  correct = [1, 0];

  constructor(itemCount = 3) {
    this.items = Array.from({ length: itemCount }, (_, index) => ({
      index,
      total: itemCount,
      problemId: `p${Math.floor(index / 3) + 1}`,
      submissionId: `sub-${index}`,
      title: `Problem ${index}`,
      statement: "do the thing",
      code: "public int f() { return 0; }",
      ladder: { "0": "Incorrect", "1": "case", "2": "hint", "3": "where", "4": "edit" },
    }));
  }

  private currentItem(): StudyItemPayload | null {
    for (const item of this.items) {
      const count = [...this.ratings.keys()].filter((key) =>
        key.startsWith(item.submissionId + "|"),
      ).length;
      if (count < 10) return item;
    }
    return null;
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), { status });

    if (path === "/api/study/state") {
      const payload: StudyStatePayload = {
        annotatorId: "a001",
        phase: this.phase,
        calibrationAttempts: this.attempts,
      };
      if (this.phase === "eligibility") {
        payload.eligibility = {
          problemId: "picksum",
          code: "public int pickSum(...) { ... }",
          inputs: [["[1, 5, 3]", "3"], ["[10, 2]", "1"], ["[4, 4, 4]", "9"]],
        };
      }
      if (this.phase === "calibration") {
        payload.calibration = [
          { prompt: "Which level?", choices: ["Level 0", "Level 1"] },
          { prompt: "Which level again?", choices: ["Level 0", "Level 4"] },
        ];
      }
      return json(payload);
    }
    if (path === "/api/study/eligibility") {
      const ok =
        JSON.stringify(body.predictedOutputs) === JSON.stringify(this.expected);
      this.phase = ok ? "calibration" : "disqualified";
      return json({ phase: this.phase });
    }
    if (path === "/api/study/calibration") {
      const wrongIndices = this.correct
        .map((answer, index) => (body.answers[index] === answer ? -1 : index))
        .filter((index) => index >= 0);
      if (wrongIndices.length === 0) this.phase = "evaluation";
      else this.attempts += 1;
      return json({ phase: this.phase, wrongIndices });
    }
    if (path === "/api/study/next") {
      const item = this.currentItem();
      if (!item) {
        this.phase = "done";
        return json({ done: true } satisfies NextItemResponse);
      }
      return json({ done: false, item } satisfies NextItemResponse);
    }
    if (path === "/api/study/ratings") {
      const current = this.currentItem();
      if (!current || current.submissionId !== body.submissionId) {
        return json({ detail: "not the current item" }, 409);
      }
      this.ratings.set(
        `${body.submissionId}|${body.level}|${body.metric}`,
        body.score,
      );
      return json({ ok: true });
    }
    return json({ detail: `no route ${path}` }, 404);
  };
}

function makeWizard(server: FakeServer, drafts = new MemoryDraftStore()) {
  const api = new StudyApi({
    baseUrl: "http://fake",
    token: "t",
    fetchImpl: server.fetch,
  });
  return new StudyWizard(api, drafts);
}

describe("StudyWizard", () => {
  let server: FakeServer;

  beforeEach(() => {
    server = new FakeServer();
  });

  it("walks eligibility into calibration on correct predictions", async () => {
    const wizard = makeWizard(server);
    await wizard.refresh();
    expect(wizard.phase).toBe("eligibility");
    expect(wizard.eligibilityTask?.inputs).toHaveLength(3);
    wizard.setPrediction(0, "4");
    wizard.setPrediction(1, "0");
    wizard.setPrediction(2, "12");
    await wizard.submitEligibility();
    expect(wizard.phase).toBe("calibration");
    expect(wizard.calibrationItems).toHaveLength(2);
  });

  it("renders a terminal screen state when disqualified", async () => {
    const wizard = makeWizard(server);
    await wizard.refresh();
    wizard.setPrediction(0, "wrong");
    await wizard.submitEligibility();
    expect(wizard.phase).toBe("disqualified");
  });

  it("keeps selections and highlights wrong calibration items", async () => {
    const wizard = makeWizard(server);
    await wizard.refresh();
    ["4", "0", "12"].forEach((v, i) => wizard.setPrediction(i, v));
    await wizard.submitEligibility();

    wizard.selectCalibration(0, 0); // wrong (correct is 1)
    wizard.selectCalibration(1, 0); // correct
    const result = await wizard.submitCalibration();
    expect(result.phase).toBe("calibration");
    expect(result.wrongIndices).toEqual([0]);
    expect(wizard.selections).toEqual([0, 0]); // entries preserved
    expect(wizard.calibrationAttempts).toBe(1);

    // picking a new answer clears that item's highlight
    wizard.selectCalibration(0, 1);
    expect(wizard.wrongIndices).toEqual([]);
    const second = await wizard.submitCalibration();
    expect(second.phase).toBe("evaluation");
    expect(wizard.currentItem?.submissionId).toBe("sub-0");
  });

  it("requires every calibration answer before submitting", async () => {
    const wizard = makeWizard(server);
    await wizard.refresh();
    ["4", "0", "12"].forEach((v, i) => wizard.setPrediction(i, v));
    await wizard.submitEligibility();
    wizard.selectCalibration(0, 1);
    await expect(wizard.submitCalibration()).rejects.toThrow(/answer every/);
  });

  async function enterEvaluation(wizard: StudyWizard) {
    await wizard.refresh();
    ["4", "0", "12"].forEach((v, i) => wizard.setPrediction(i, v));
    await wizard.submitEligibility();
    wizard.selectCalibration(0, 1);
    wizard.selectCalibration(1, 0);
    await wizard.submitCalibration();
  }

  it("gates Next until all ten ratings are drafted", async () => {
    const wizard = makeWizard(server);
    await enterEvaluation(wizard);
    expect(wizard.nextEnabled).toBe(false);
    const metrics = ["relevance", "effectiveness"] as const;
    let set = 0;
    for (const level of [0, 1, 2, 3, 4]) {
      for (const metric of metrics) {
        if (set === 9) break;
        wizard.setRating(level, metric, 3);
        set += 1;
        expect(wizard.nextEnabled).toBe(false);
      }
    }
    wizard.setRating(4, "effectiveness", 5);
    expect(wizard.nextEnabled).toBe(true);
    await expect(wizard.submitItemRatings()).resolves.toBeUndefined();
    expect(wizard.currentItem?.submissionId).toBe("sub-1");
  });

  it("refuses to advance without the full draft", async () => {
    const wizard = makeWizard(server);
    await enterEvaluation(wizard);
    wizard.setRating(0, "relevance", 4);
    await expect(wizard.submitItemRatings()).rejects.toThrow(/ten ratings/);
  });

  it("rejects out-of-scale scores locally", async () => {
    const wizard = makeWizard(server);
    await enterEvaluation(wizard);
    expect(() => wizard.setRating(0, "relevance", 0)).toThrow(/1\.\.5/);
    expect(() => wizard.setRating(0, "relevance", 6)).toThrow(/1\.\.5/);
  });

  it("resumes mid-item after a refresh with drafts prefilled from the store", async () => {
    const drafts = new MemoryDraftStore();
    const wizard = makeWizard(server, drafts);
    await enterEvaluation(wizard);
    wizard.setRating(0, "relevance", 4);
    wizard.setRating(0, "effectiveness", 2);

    // a new wizard over the same draft store = page refresh
    const revived = makeWizard(server, drafts);
    await revived.refresh();
    expect(revived.phase).toBe("evaluation");
    expect(revived.currentItem?.submissionId).toBe("sub-0");
    expect(revived.draft).toEqual({
      "0|relevance": 4,
      "0|effectiveness": 2,
    });
  });

  it("completes the whole run and lands on done", async () => {
    const wizard = makeWizard(server);
    await enterEvaluation(wizard);
    while (wizard.phase === "evaluation" && wizard.currentItem) {
      for (const level of [0, 1, 2, 3, 4]) {
        wizard.setRating(level, "relevance", 3);
        wizard.setRating(level, "effectiveness", 4);
      }
      await wizard.submitItemRatings();
    }
    expect(wizard.phase).toBe("done");
    expect(server.ratings.size).toBe(30);
  });

  it("turns transport failures into a retryable error state", async () => {
    let failing = true;
    const api = new StudyApi({
      baseUrl: "http://fake",
      token: "t",
      fetchImpl: async (url, init) => {
        if (failing) throw new TypeError("fetch failed");
        return server.fetch(url, init);
      },
    });
    const wizard = new StudyWizard(api);
    await wizard.guarded(() => wizard.refresh());
    expect(wizard.phase).toBe("error");
    expect(wizard.errorMessage).toMatch(/fetch failed/);
    failing = false;
    await wizard.guarded(() => wizard.refresh());
    expect(wizard.phase).toBe("eligibility");
  });
});
