/** Analytics dashboard data shaping: grouped bars with standard-deviation
 * whiskers for the two figure groupings, and a heat table for the agreement
 * matrix. Pure transforms; rendering lives in render.ts. */

import type { AgreementPayload, FigureCell, FigurePayload } from "./types.js";

export interface Bar {
  level: number;
  mean: number;
  std: number;
  n: number;
}

export interface BarGroup {
  label: string;
  bars: Bar[];
}

export function barGroups(figure: FigurePayload): BarGroup[] {
  const byGroup = new Map<string, FigureCell[]>();
  for (const cell of figure.cells) {
    const label = cell.problemId ?? cell.bucket ?? "?";
    const bucket = byGroup.get(label) ?? [];
    bucket.push(cell);
    byGroup.set(label, bucket);
  }
  const bucketOrder = ["low", "mid", "high"];
  const labels = [...byGroup.keys()].sort((a, b) => {
    const ia = bucketOrder.indexOf(a);
    const ib = bucketOrder.indexOf(b);
    if (ia >= 0 && ib >= 0) return ia - ib;
    return a.localeCompare(b);
  });
  return labels.map((label) => ({
    label,
    bars: (byGroup.get(label) as FigureCell[])
      .slice()
      .sort((a, b) => a.level - b.level)
      .map((cell) => ({
        level: cell.level,
        mean: cell.mean,
        std: cell.std,
        n: cell.n,
      })),
  }));
}

export interface HeatCell {
  value: number | null;
  /** 0..1 intensity for background shading; null values render blank. */
  intensity: number | null;
}

export interface HeatTable {
  annotatorIds: string[];
  rows: HeatCell[][];
  rowAverages: (number | null)[];
  overallAverage: number;
  offDiagonalAverage: number;
}

export function heatTable(agreement: AgreementPayload): HeatTable {
  const rows = agreement.values.map((row) =>
    row.map((value) => ({
      value,
      // PCC lives in [-1, 1]; map onto [0, 1] for shading
      intensity: value === null ? null : (value + 1) / 2,
    })),
  );
  return {
    annotatorIds: agreement.annotatorIds,
    rows,
    rowAverages: agreement.rowAverages,
    overallAverage: agreement.overallAverage,
    offDiagonalAverage: agreement.offDiagonalAverage,
  };
}
