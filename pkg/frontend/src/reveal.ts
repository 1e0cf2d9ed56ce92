/** Teacher view: progressive ladder reveal. Starts at the bare verdict and
 * fetches one more level per click; the server never sends text above the
 * requested level, so nothing higher can leak into the page. */

import { StudyApi } from "./api.js";
import type { RevealPayload, ValidationFlagPayload } from "./types.js";

const FLAG_LEVEL: Record<string, number | null> = {
  VERDICT_INCONSISTENT: 0,
  UNPARSEABLE_TEST_CASE: 1,
  CLAIMED_OUTPUT_MISMATCH: 1,
  NOT_A_FAILING_CASE: 1,
  WRONG_EXPECTED_OUTPUT: 1,
  OUT_OF_RANGE_TEST_CASE: 1,
  CODE_IN_HINT: 2,
  FULL_PROGRAM_LISTED: 4,
  TRUNCATED_RESPONSE: null,
};

export class TeacherReveal {
  payload: RevealPayload | null = null;

  constructor(
    private readonly api: StudyApi,
    readonly submissionId: string,
  ) {}

  get maxLevel(): number {
    return this.payload?.maxLevel ?? -1;
  }

  get canRevealMore(): boolean {
    return this.maxLevel < 4;
  }

  async load(): Promise<RevealPayload> {
    this.payload = await this.api.ladder(this.submissionId, 0);
    return this.payload;
  }

  async revealNext(): Promise<RevealPayload> {
    if (!this.canRevealMore) return this.payload as RevealPayload;
    this.payload = await this.api.ladder(this.submissionId, this.maxLevel + 1);
    return this.payload;
  }

  /** Flags grouped by the ladder level card they badge. */
  badgesByLevel(): Map<number, ValidationFlagPayload[]> {
    const grouped = new Map<number, ValidationFlagPayload[]>();
    for (const flag of this.payload?.flags ?? []) {
      const level = FLAG_LEVEL[flag.code] ?? null;
      if (level === null || level > this.maxLevel) continue;
      const bucket = grouped.get(level) ?? [];
      bucket.push(flag);
      grouped.set(level, bucket);
    }
    return grouped;
  }

  /** Ladder-wide flags (not tied to one level), e.g. truncation. */
  globalBadges(): ValidationFlagPayload[] {
    return (this.payload?.flags ?? []).filter(
      (flag) => FLAG_LEVEL[flag.code] === null,
    );
  }
}
