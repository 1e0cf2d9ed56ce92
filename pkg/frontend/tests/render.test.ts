import { describe, expect, it } from "vitest";

import { renderBadge, renderReveal, renderWizard, escapeHtml } from "../src/render.js";
import type { WizardView } from "../src/wizard.js";
import type { StudyItemPayload } from "../src/types.js";

const ITEM: StudyItemPayload = {
  index: 2,
  total: 15,
  problemId: "sortasum",
  submissionId: "sortasum-s03",
  title: "Sorta Sum",
  statement: "Given 2 ints <a> & <b>...",
  code: "int f() {\n  return 1;\n}\n",
  ladder: { "0": "Incorrect", "1": "case", "2": "hint", "3": "spot", "4": "edit" },
};

function evaluationView(draft: Record<string, number>, nextEnabled: boolean): WizardView {
  return {
    phase: "evaluation",
    evaluation: { item: ITEM, draft, nextEnabled },
    progress: { completedItems: 2, totalItems: 15 },
  };
}

describe("renderWizard", () => {
  it("disables Next until the controller enables it", () => {
    const disabled = renderWizard(evaluationView({}, false));
    expect(disabled).toMatch(/<button data-action="next-item" disabled>/);
    const enabled = renderWizard(evaluationView({ "0|relevance": 3 }, true));
    expect(enabled).toMatch(/<button data-action="next-item" >/);
  });

  it("shows five level cards with two likert rows each", () => {
    const html = renderWizard(evaluationView({}, false));
    expect(html.match(/data-level-card="/g)).toHaveLength(5);
    expect(html.match(/class="likert-row"/g)).toHaveLength(10);
    expect(html.match(/data-rating/g)).toHaveLength(50); // 10 rows x 5 buttons
  });

  it("marks the selected likert score", () => {
    const html = renderWizard(evaluationView({ "2|relevance": 4 }, false));
    expect(html).toMatch(
      /data-level="2" data-metric="relevance" data-score="4"/,
    );
    expect(html).toMatch(/likert selected/);
  });

  it("escapes statement and code", () => {
    const html = renderWizard(evaluationView({}, false));
    expect(html).toContain("Given 2 ints &lt;a&gt; &amp; &lt;b&gt;...");
    expect(html).not.toContain("<a>");
  });

  it("numbers the code lines", () => {
    const html = renderWizard(evaluationView({}, false));
    expect(html).toMatch(/<td class="lineno">1<\/td>/);
    expect(html).toMatch(/<td class="lineno">3<\/td>/);
  });

  it("highlights wrong calibration items and keeps the rest plain", () => {
    const html = renderWizard({
      phase: "calibration",
      calibration: {
        items: [
          { prompt: "q0", choices: ["a", "b"] },
          { prompt: "q1", choices: ["a", "b"] },
        ],
        selections: [0, 1],
        wrongIndices: [1],
        attempts: 1,
      },
    });
    expect(html).toMatch(/class="calibration-item" data-item="0"/);
    expect(html).toMatch(/class="calibration-item wrong" data-item="1"/);
    expect(html).toContain("Attempts so far: 1");
    expect(html).not.toContain("correctIndex");
  });

  it("renders terminal screens", () => {
    expect(renderWizard({ phase: "disqualified" })).toContain("Not eligible");
    expect(
      renderWizard({ phase: "done", progress: { completedItems: 15, totalItems: 15 } }),
    ).toContain("Study complete");
    const error = renderWizard({ phase: "error", errorMessage: "boom" });
    expect(error).toContain("boom");
    expect(error).toMatch(/data-action="retry"/);
  });
});

describe("renderReveal", () => {
  it("renders only the revealed levels and the next-reveal control", () => {
    const html = renderReveal(
      { "0": "Incorrect", "1": "a failing case" },
      1,
      new Map([[1, [{ code: "CLAIMED_OUTPUT_MISMATCH", severity: "error" as const, detail: "claim differs" }]]]),
      [],
      true,
    );
    expect(html.match(/data-level-card="/g)).toHaveLength(2);
    expect(html).toContain("Reveal level 2");
    expect(html).toContain("CLAIMED_OUTPUT_MISMATCH");
  });

  it("offers no control once everything is revealed", () => {
    const html = renderReveal({ "0": "x" }, 4, new Map(), [], false);
    expect(html).not.toContain("data-action=\"reveal-next\"");
    expect(html).toContain("All levels revealed");
  });
});

describe("renderBadge", () => {
  it("carries severity and escaped detail", () => {
    const html = renderBadge({
      code: "CODE_IN_HINT",
      severity: "warning",
      detail: 'hint repeats "x < 1"',
    });
    expect(html).toContain("badge warning");
    expect(html).toContain("&quot;x &lt; 1&quot;");
  });
});

describe("escapeHtml", () => {
  it("escapes the five specials", () => {
    expect(escapeHtml(`<a href="x">&'</a>`)).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&#39;&lt;/a&gt;",
    );
  });
});
