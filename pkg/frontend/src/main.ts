/** Browser bootstrap. Hash routes:
 *   #study              annotator wizard (token kept in localStorage)
 *   #teacher/<subId>    progressive ladder reveal
 *   #dashboard          agreement + figure charts
 */

import { StudyApi } from "./api.js";
import { barGroups, heatTable } from "./dashboard.js";
import {
  renderBarChart,
  renderHeatTable,
  renderReveal,
  renderWizard,
} from "./render.js";
import { TeacherReveal } from "./reveal.js";
import { StudyWizard } from "./wizard.js";
import { METRICS, MetricName } from "./types.js";

const TOKEN_KEY = "ladderforge:token";

const localDraftStore = {
  get: (key: string) => window.localStorage.getItem(key),
  set: (key: string, value: string) => window.localStorage.setItem(key, value),
  remove: (key: string) => window.localStorage.removeItem(key),
};

function root(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

async function bootWizard(): Promise<void> {
  const api = new StudyApi({
    baseUrl: "",
    token: window.localStorage.getItem(TOKEN_KEY) ?? undefined,
  });
  if (!api.token) {
    const displayName = window.prompt("Display name?") ?? "Anonymous";
    const role = window.prompt("Role (student/instructor/researcher)?") ?? "student";
    await api.register(displayName, role);
    window.localStorage.setItem(TOKEN_KEY, api.token as string);
  }
  const wizard = new StudyWizard(api, localDraftStore);

  const draw = () => {
    root().innerHTML = renderWizard(wizard.view());
  };

  root().addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (target.dataset.rating !== undefined) {
      const level = Number(target.dataset.level);
      const metric = target.dataset.metric as MetricName;
      const score = Number(target.dataset.score);
      wizard.setRating(level, metric, score);
      draw();
      return;
    }
    if (action === "submit-eligibility") {
      void wizard.guarded(async () => {
        await wizard.submitEligibility();
      }).then(draw);
    } else if (action === "submit-calibration") {
      void wizard.guarded(async () => {
        await wizard.submitCalibration();
      }).then(draw);
    } else if (action === "next-item") {
      void wizard.guarded(async () => {
        await wizard.submitItemRatings();
      }).then(draw);
    } else if (action === "retry") {
      void wizard.guarded(async () => {
        await wizard.refresh();
      }).then(draw);
    }
  });

  root().addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.dataset.prediction !== undefined) {
      wizard.setPrediction(Number(target.dataset.prediction), target.value);
    }
  });

  await wizard.guarded(() => wizard.refresh());
  draw();
}

async function bootTeacher(submissionId: string): Promise<void> {
  const api = new StudyApi({ baseUrl: "" });
  const reveal = new TeacherReveal(api, submissionId);

  const draw = () => {
    const payload = reveal.payload;
    if (!payload) return;
    root().innerHTML = renderReveal(
      payload.levels,
      reveal.maxLevel,
      reveal.badgesByLevel(),
      reveal.globalBadges(),
      reveal.canRevealMore,
    );
  };

  root().addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "reveal-next") {
      void reveal.revealNext().then(draw);
    }
  });

  try {
    await reveal.load();
    draw();
  } catch {
    root().innerHTML = `<section class="screen error"><p>No ladder found for ${submissionId}.</p></section>`;
  }
}

async function bootDashboard(): Promise<void> {
  const api = new StudyApi({ baseUrl: "" });
  const sections: string[] = [];
  try {
    sections.push(renderHeatTable(heatTable(await api.agreement())));
  } catch {
    sections.push(`<section class="agreement empty"><p>No ratings yet.</p></section>`);
  }
  for (const which of [1, 2] as const) {
    for (const metric of METRICS) {
      try {
        const figure = await api.figure(which, metric);
        const heading =
          which === 1
            ? `Per problem - ${metric}`
            : `Per score bucket - ${metric}`;
        sections.push(renderBarChart(barGroups(figure), heading));
      } catch {
        // missing data renders as an empty chart section
        sections.push(renderBarChart([], `fig${which} ${metric}`));
      }
    }
  }
  root().innerHTML = sections.join("\n");
}

function route(): void {
  const hash = window.location.hash || "#study";
  if (hash.startsWith("#teacher/")) {
    void bootTeacher(hash.slice("#teacher/".length));
  } else if (hash === "#dashboard") {
    void bootDashboard();
  } else {
    void bootWizard();
  }
}

window.addEventListener("hashchange", () => window.location.reload());
route();
