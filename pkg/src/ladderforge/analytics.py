"""Inter-rater agreement and Likert aggregations, with CSV exports.

Agreement is pairwise Pearson correlation over each annotator's rating
vector. Row averages deliberately include the unit self-correlation on the
diagonal (that is the convention the headline numbers use); the
off-diagonal-only average is reported alongside.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .model import Metric

RatingKey = tuple[str, str, int, str]  # (problemId, submissionId, level, metric)


class UndefinedCorrelationError(ValueError):
    """A vector has zero variance (or too few points) for Pearson r."""


def pcc(x: list[float], y: list[float]) -> float:
    """Pearson correlation coefficient over population sums."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise UndefinedCorrelationError(f"need at least 2 points, got {n}")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    dx = [value - mean_x for value in x]
    dy = [value - mean_y for value in y]
    var_x = sum(d * d for d in dx)
    var_y = sum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise UndefinedCorrelationError("zero variance in one of the vectors")
    return sum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)


@dataclass(frozen=True)
class RatingVector:
    annotator_id: str
    entries: tuple[tuple[RatingKey, int], ...]

    def as_mapping(self) -> dict[RatingKey, int]:
        return dict(self.entries)


def canonical_key_order(ratings: list[dict]) -> list[RatingKey]:
    """Global key order shared by every annotator: metric-major, then items."""
    item_keys = sorted(
        {(r["problemId"], r["submissionId"], r["level"]) for r in ratings}
    )
    order: list[RatingKey] = []
    for metric in (Metric.RELEVANCE, Metric.EFFECTIVENESS):
        for problem_id, submission_id, level in item_keys:
            order.append((problem_id, submission_id, level, metric.value))
    return order


def rating_vector(
    annotator_id: str, ratings: list[dict], key_order: list[RatingKey] | None = None
) -> RatingVector:
    """Scores for one annotator in canonical order; missing keys are skipped."""
    if key_order is None:
        key_order = canonical_key_order(ratings)
    own = {
        (r["problemId"], r["submissionId"], r["level"], r["metric"]): r["score"]
        for r in ratings
        if r["annotatorId"] == annotator_id
    }
    entries = tuple((key, own[key]) for key in key_order if key in own)
    return RatingVector(annotator_id, entries)


@dataclass(frozen=True)
class AgreementMatrix:
    annotator_ids: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]  # None = undefined pair
    row_averages: tuple[float | None, ...]
    overall_average: float
    off_diagonal_average: float
    notes: tuple[str, ...] = ()

    @classmethod
    def from_values(
        cls,
        annotator_ids: list[str],
        values: list[list[float | None]],
        notes: list[str] | None = None,
    ) -> "AgreementMatrix":
        """Compute the averages from a filled matrix.

        Row averages run over every defined value in the row including the
        diagonal; the overall average is the mean of the row averages. The
        off-diagonal average ignores the diagonal entirely.
        """
        row_averages: list[float | None] = []
        for row in values:
            present = [v for v in row if v is not None]
            row_averages.append(sum(present) / len(present) if present else None)
        defined_rows = [avg for avg in row_averages if avg is not None]
        if not defined_rows:
            raise UndefinedCorrelationError("no defined correlations at all")
        overall = sum(defined_rows) / len(defined_rows)
        off_diagonal = [
            value
            for i, row in enumerate(values)
            for j, value in enumerate(row)
            if i != j and value is not None
        ]
        off_avg = sum(off_diagonal) / len(off_diagonal) if off_diagonal else float("nan")
        return cls(
            annotator_ids=tuple(annotator_ids),
            values=tuple(tuple(row) for row in values),
            row_averages=tuple(row_averages),
            overall_average=overall,
            off_diagonal_average=off_avg,
            notes=tuple(notes or ()),
        )


def agreement_matrix(vectors: list[RatingVector]) -> AgreementMatrix:
    """Pairwise PCC over the keys present in both vectors of each pair."""
    if len(vectors) < 2:
        raise ValueError("need at least two rating vectors")
    ids = [vector.annotator_id for vector in vectors]
    maps = [vector.as_mapping() for vector in vectors]
    size = len(vectors)
    values: list[list[float | None]] = [[None] * size for _ in range(size)]
    notes: list[str] = []
    for i in range(size):
        for j in range(i, size):
            shared = [key for key in maps[i] if key in maps[j]]
            try:
                if len(shared) < 2:
                    raise UndefinedCorrelationError(
                        f"only {len(shared)} shared ratings"
                    )
                value = pcc(
                    [float(maps[i][key]) for key in shared],
                    [float(maps[j][key]) for key in shared],
                )
            except UndefinedCorrelationError as exc:
                if i == j:
                    note = f"self-correlation undefined for {ids[i]}: {exc}"
                else:
                    note = f"correlation undefined for ({ids[i]}, {ids[j]}): {exc}"
                notes.append(note)
                continue
            values[i][j] = value
            values[j][i] = value
    return AgreementMatrix.from_values(ids, values, notes)


# -- aggregations ---------------------------------------------------------------


@dataclass(frozen=True)
class AggregateCell:
    group_key: tuple[str, int]  # (problemId or bucket, level)
    metric: str
    mean: float
    std_dev: float
    n: int


def _population_std(scores: list[int], mean: float) -> float:
    return math.sqrt(sum((s - mean) ** 2 for s in scores) / len(scores))


def _aggregate(
    ratings: list[dict], metric: Metric | str, group_of: "callable"
) -> list[AggregateCell]:
    metric_value = metric.value if isinstance(metric, Metric) else metric
    groups: dict[tuple[str, int], list[int]] = {}
    for rating in ratings:
        if rating["metric"] != metric_value:
            continue
        key = group_of(rating)
        if key is None:
            continue
        groups.setdefault(key, []).append(rating["score"])
    cells = []
    for key in sorted(groups):
        scores = groups[key]
        mean = sum(scores) / len(scores)
        cells.append(
            AggregateCell(
                group_key=key,
                metric=metric_value,
                mean=mean,
                std_dev=_population_std(scores, mean),
                n=len(scores),
            )
        )
    return cells


def aggregate_question_level(ratings: list[dict], metric: Metric | str) -> list[AggregateCell]:
    """One cell per (problem, level), pooling annotators and submissions."""
    return _aggregate(ratings, metric, lambda r: (r["problemId"], r["level"]))


def aggregate_bucket_level(
    ratings: list[dict], metric: Metric | str, bucket_of_submission: dict[str, str]
) -> list[AggregateCell]:
    """One cell per (bucket, level), pooling annotators and problems."""

    def group_of(rating: dict) -> tuple[str, int] | None:
        bucket = bucket_of_submission.get(rating["submissionId"])
        return None if bucket is None else (bucket, rating["level"])

    return _aggregate(ratings, metric, group_of)


# -- exports ----------------------------------------------------------------------


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def write_agreement_csv(matrix: AgreementMatrix, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["annotator", *matrix.annotator_ids, "avg"])
        for annotator_id, row, average in zip(
            matrix.annotator_ids, matrix.values, matrix.row_averages
        ):
            writer.writerow([annotator_id, *[_fmt(v) for v in row], _fmt(average)])
        writer.writerow(
            ["avg", *[_fmt(v) for v in matrix.row_averages], _fmt(matrix.overall_average)]
        )
        writer.writerow(["off_diagonal_avg", _fmt(matrix.off_diagonal_average)])


def write_cells_csv(
    cells: list[AggregateCell], group_column: str, path: Path | str
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([group_column, "level", "mean", "std", "n"])
        for cell in cells:
            writer.writerow(
                [
                    cell.group_key[0],
                    cell.group_key[1],
                    _fmt(cell.mean),
                    _fmt(cell.std_dev),
                    cell.n,
                ]
            )


def export_all(
    ratings: list[dict],
    bucket_of_submission: dict[str, str],
    out_dir: Path | str,
    annotator_ids: list[str] | None = None,
) -> dict[str, Path]:
    """Write agreement.csv plus fig1/fig2 CSVs for both metrics."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    ids = annotator_ids or sorted({r["annotatorId"] for r in ratings})
    key_order = canonical_key_order(ratings)
    vectors = [rating_vector(annotator_id, ratings, key_order) for annotator_id in ids]
    vectors = [v for v in vectors if v.entries]
    if len(vectors) >= 2:
        matrix = agreement_matrix(vectors)
        agreement_path = out_dir / "agreement.csv"
        write_agreement_csv(matrix, agreement_path)
        written["agreement"] = agreement_path

    for metric in (Metric.RELEVANCE, Metric.EFFECTIVENESS):
        fig1 = aggregate_question_level(ratings, metric)
        fig1_path = out_dir / f"fig1_{metric.value}.csv"
        write_cells_csv(fig1, "problem", fig1_path)
        written[f"fig1_{metric.value}"] = fig1_path

        fig2 = aggregate_bucket_level(ratings, metric, bucket_of_submission)
        fig2_path = out_dir / f"fig2_{metric.value}.csv"
        write_cells_csv(fig2, "bucket", fig2_path)
        written[f"fig2_{metric.value}"] = fig2_path
    return written
