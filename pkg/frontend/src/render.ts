/** HTML generation for every screen. Pure string templates so the markup is
 * testable without a DOM; main.ts wires the strings into the page and
 * delegates events. */

import type { BarGroup, HeatTable } from "./dashboard.js";
import type { WizardView } from "./wizard.js";
import { METRICS } from "./types.js";
import type { ValidationFlagPayload } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function codePanel(code: string): string {
  const lines = code.replace(/\n$/, "").split("\n");
  const rows = lines
    .map(
      (line, i) =>
        `<tr><td class="lineno">${i + 1}</td><td class="codeline">${escapeHtml(line) || "&nbsp;"}</td></tr>`,
    )
    .join("");
  return `<table class="code-panel"><tbody>${rows}</tbody></table>`;
}

const LEVEL_TITLES = [
  "Level 0 - Verdict",
  "Level 1 - Failing test case",
  "Level 2 - Hint",
  "Level 3 - Location",
  "Level 4 - Edit",
];

export function renderWizard(view: WizardView): string {
  switch (view.phase) {
    case "eligibility":
      return renderEligibility(view);
    case "calibration":
      return renderCalibration(view);
    case "evaluation":
      return renderEvaluation(view);
    case "done":
      return `<section class="screen done"><h1>Study complete</h1>
<p>All ${view.progress?.totalItems ?? 15} items are rated. Thank you!</p></section>`;
    case "disqualified":
      return `<section class="screen disqualified"><h1>Not eligible</h1>
<p>The eligibility answers did not match the program's behavior, so the study
cannot continue on this account.</p></section>`;
    case "error":
      return `<section class="screen error"><h1>Connection problem</h1>
<p>${escapeHtml(view.errorMessage ?? "request failed")}</p>
<button data-action="retry">Retry</button>
<p class="note">Entered ratings are kept locally and will not be lost.</p></section>`;
  }
}

function renderEligibility(view: WizardView): string {
  const task = view.eligibility;
  if (!task) return `<section class="screen"><p>Loading…</p></section>`;
  const inputs = task.task.inputs
    .map(
      (row, i) => `<li>
  <span class="input-set">${escapeHtml(row.join(", "))}</span>
  <input data-prediction="${i}" value="${escapeHtml(task.predictions[i] ?? "")}"
         placeholder="program output" />
</li>`,
    )
    .join("\n");
  return `<section class="screen eligibility">
<h1>Eligibility check</h1>
<p>Read the program below, then write exactly what it prints for each input set.</p>
${codePanel(task.task.code)}
<ol class="predictions">${inputs}</ol>
<button data-action="submit-eligibility">Submit answers</button>
</section>`;
}

function renderCalibration(view: WizardView): string {
  const calibration = view.calibration;
  if (!calibration) return `<section class="screen"><p>Loading…</p></section>`;
  const wrong = new Set(calibration.wrongIndices);
  const items = calibration.items
    .map((item, index) => {
      const classes = wrong.has(index) ? "calibration-item wrong" : "calibration-item";
      const choices = item.choices
        .map(
          (choice, c) => `<label class="choice">
<input type="radio" name="cal-${index}" data-calibration="${index}" value="${c}"
 ${calibration.selections[index] === c ? "checked" : ""} />
<span>${escapeHtml(choice)}</span></label>`,
        )
        .join("\n");
      const marker = wrong.has(index)
        ? `<p class="wrong-marker">This answer was wrong. Try a different choice.</p>`
        : "";
      return `<fieldset class="${classes}" data-item="${index}">
<legend>${escapeHtml(item.prompt)}</legend>
${choices}
${marker}
</fieldset>`;
    })
    .join("\n");
  const attempts =
    calibration.attempts > 0
      ? `<p class="attempt-count">Attempts so far: ${calibration.attempts}</p>`
      : "";
  return `<section class="screen calibration">
<h1>Calibration</h1>
<p>Answer every question. Wrong items are highlighted after submission, but
the correct answers are never shown.</p>
${attempts}
${items}
<button data-action="submit-calibration">Check answers</button>
</section>`;
}

function renderEvaluation(view: WizardView): string {
  const evaluation = view.evaluation;
  if (!evaluation) return `<section class="screen"><p>Loading…</p></section>`;
  const { item, draft, nextEnabled } = evaluation;
  const cards = LEVEL_TITLES.map((title, level) => {
    const text = item.ladder[String(level)] ?? "";
    const rows = METRICS.map((metric) => {
      const buttons = [1, 2, 3, 4, 5]
        .map((score) => {
          const selected = draft[`${level}|${metric}`] === score;
          return `<button class="likert${selected ? " selected" : ""}"
 data-rating data-level="${level}" data-metric="${metric}" data-score="${score}">${score}</button>`;
        })
        .join("");
      return `<div class="likert-row" data-row="${level}|${metric}">
<span class="metric-name">${metric}</span>${buttons}</div>`;
    }).join("\n");
    return `<article class="level-card" data-level-card="${level}">
<h3>${escapeHtml(title)}</h3>
<p class="feedback-text">${escapeHtml(text)}</p>
${rows}
</article>`;
  }).join("\n");
  return `<section class="screen evaluation">
<header>
  <h1>${escapeHtml(item.title)}</h1>
  <p class="progress">Item ${item.index + 1} of ${item.total}</p>
</header>
<p class="statement">${escapeHtml(item.statement)}</p>
${codePanel(item.code)}
${cards}
<button data-action="next-item" ${nextEnabled ? "" : "disabled"}>Next</button>
</section>`;
}

export function renderBadge(flag: ValidationFlagPayload): string {
  return `<span class="badge ${flag.severity}" title="${escapeHtml(flag.detail)}">${escapeHtml(flag.code)}</span>`;
}

export function renderReveal(
  levels: Record<string, string>,
  maxLevel: number,
  badges: Map<number, ValidationFlagPayload[]>,
  globalBadges: ValidationFlagPayload[],
  canRevealMore: boolean,
): string {
  const cards = Object.keys(levels)
    .map(Number)
    .sort((a, b) => a - b)
    .map((level) => {
      const flagHtml = (badges.get(level) ?? []).map(renderBadge).join(" ");
      return `<article class="level-card" data-level-card="${level}">
<h3>${escapeHtml(LEVEL_TITLES[level])} ${flagHtml}</h3>
<p class="feedback-text">${escapeHtml(levels[String(level)])}</p>
</article>`;
    })
    .join("\n");
  const global = globalBadges.length
    ? `<p class="global-badges">${globalBadges.map(renderBadge).join(" ")}</p>`
    : "";
  const button = canRevealMore
    ? `<button data-action="reveal-next">Reveal level ${maxLevel + 1}</button>`
    : `<p class="note">All levels revealed.</p>`;
  return `<section class="screen reveal">
<h1>Feedback ladder</h1>
${global}
${cards}
${button}
</section>`;
}

export function renderBarChart(groups: BarGroup[], heading: string): string {
  if (!groups.length) {
    return `<section class="chart empty"><h2>${escapeHtml(heading)}</h2><p>No ratings yet.</p></section>`;
  }
  const plotHeight = 160;
  const barWidth = 18;
  const gap = 6;
  const groupGap = 28;
  const scale = plotHeight / 5; // scores live in 1..5
  let x = groupGap;
  const parts: string[] = [];
  for (const group of groups) {
    const groupStart = x;
    for (const bar of group.bars) {
      const height = bar.mean * scale;
      const y = plotHeight - height;
      const mid = x + barWidth / 2;
      const whiskerTop = plotHeight - Math.min(5, bar.mean + bar.std) * scale;
      const whiskerBottom = plotHeight - Math.max(0, bar.mean - bar.std) * scale;
      parts.push(
        `<rect class="bar level-${bar.level}" x="${x}" y="${y.toFixed(1)}" width="${barWidth}" height="${height.toFixed(1)}"><title>level ${bar.level}: mean ${bar.mean.toFixed(2)}, std ${bar.std.toFixed(2)}, n ${bar.n}</title></rect>`,
        `<line class="whisker" x1="${mid}" y1="${whiskerTop.toFixed(1)}" x2="${mid}" y2="${whiskerBottom.toFixed(1)}" />`,
      );
      x += barWidth + gap;
    }
    const center = (groupStart + x - gap) / 2;
    parts.push(
      `<text class="group-label" x="${center}" y="${plotHeight + 16}" text-anchor="middle">${escapeHtml(group.label)}</text>`,
    );
    x += groupGap;
  }
  return `<section class="chart">
<h2>${escapeHtml(heading)}</h2>
<svg viewBox="0 0 ${x} ${plotHeight + 24}" width="${x}" height="${plotHeight + 24}">${parts.join("")}</svg>
</section>`;
}

export function renderHeatTable(table: HeatTable): string {
  const header = table.annotatorIds
    .map((id) => `<th>${escapeHtml(id)}</th>`)
    .join("");
  const rows = table.rows
    .map((row, i) => {
      const cells = row
        .map((cell) => {
          if (cell.value === null) return `<td class="undefined-pcc"></td>`;
          const hue = Math.round((cell.intensity ?? 0) * 120);
          return `<td style="background:hsl(${hue},70%,82%)">${cell.value.toFixed(2)}</td>`;
        })
        .join("");
      const average = table.rowAverages[i];
      return `<tr><th>${escapeHtml(table.annotatorIds[i])}</th>${cells}<td class="avg">${average === null ? "" : average.toFixed(2)}</td></tr>`;
    })
    .join("");
  return `<section class="agreement">
<h2>Inter-rater agreement (Pearson)</h2>
<table class="heat-table">
<thead><tr><th></th>${header}<th>avg</th></tr></thead>
<tbody>${rows}</tbody>
<tfoot><tr><th>overall</th><td colspan="${table.annotatorIds.length}" class="overall">${table.overallAverage.toFixed(2)}</td><td class="off-diag">off-diag ${table.offDiagonalAverage.toFixed(2)}</td></tr></tfoot>
</table>
</section>`;
}
