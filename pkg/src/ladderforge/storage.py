"""File-backed record store and ingestion of problem bundles and submissions.

One JSON file per record, one directory per collection, atomic writes via
temp-file-plus-rename. Referential integrity (ladder -> submission ->
problem) is enforced at write time. Scale target is desk-sized studies, not
production grading farms.
"""

from __future__ import annotations

import csv
import json
import os
import re
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .model import (
    InputRange,
    Parameter,
    ParameterSignature,
    Problem,
    ScoreBucket,
    Submission,
    TestCase,
    ValueType,
    bucket_of,
    parse_value_literal,
    render_value,
)
from .runner import GradeReport, Verdict

SCHEMA_VERSION = 1

COLLECTIONS = (
    "problems",
    "submissions",
    "grades",
    "ladders",
    "validations",
    "annotators",
    "ratings",
)

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")


class StorageError(RuntimeError):
    pass


class IntegrityError(StorageError):
    pass


class IngestionError(StorageError):
    pass


class SelectionError(StorageError):
    pass


def _check_id(record_id: str, kind: str) -> str:
    if not _ID_RE.match(record_id):
        raise StorageError(f"unusable {kind} id {record_id!r}")
    return record_id


def _atomic_write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


# -- problem bundles ---------------------------------------------------------


def load_problem_bundle(bundle_dir: Path) -> Problem:
    problem_path = bundle_dir / "problem.json"
    tests_path = bundle_dir / "tests.json"
    if not problem_path.is_file():
        raise IngestionError(f"{bundle_dir}: missing problem.json")
    if not tests_path.is_file():
        raise IngestionError(f"{bundle_dir}: missing tests.json")
    drivers = sorted(bundle_dir.glob("driver*"))
    if len(drivers) != 1:
        raise IngestionError(f"{bundle_dir}: expected exactly one driver file, found {len(drivers)}")

    try:
        meta = json.loads(problem_path.read_text())
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{problem_path}: invalid JSON: {exc}") from exc

    for field_name in ("id", "title", "statement", "signature"):
        if field_name not in meta:
            raise IngestionError(f"{problem_path}: missing field {field_name!r}")

    signature = _signature_from_dict(meta["signature"], problem_path)
    try:
        raw_tests = json.loads(tests_path.read_text())["tests"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise IngestionError(f"{tests_path}: invalid tests file: {exc}") from exc

    tests = []
    for index, entry in enumerate(raw_tests):
        try:
            args = tuple(
                parse_value_literal(literal, param.value_type)
                for literal, param in zip(entry["args"], signature.parameters, strict=True)
            )
            expected = parse_value_literal(entry["expected"], signature.return_type)
        except Exception as exc:
            raise IngestionError(f"{tests_path}: test {index}: {exc}") from exc
        tests.append(TestCase(args, expected))

    ranges = {
        name: InputRange(
            minimum=spec.get("min"),
            maximum=spec.get("max"),
            element_minimum=spec.get("elementMin"),
            element_maximum=spec.get("elementMax"),
            max_length=spec.get("maxLength"),
        )
        for name, spec in meta.get("inputRanges", {}).items()
    }

    try:
        return Problem(
            id=_check_id(meta["id"], "problem"),
            title=meta["title"],
            statement=meta["statement"],
            signature=signature,
            driver_template=drivers[0].read_text(),
            tests=tuple(tests),
            reference_solution=meta.get("referenceSolution"),
            input_ranges=ranges,
        )
    except ValueError as exc:
        raise IngestionError(f"{bundle_dir}: {exc}") from exc


def _signature_from_dict(raw: dict, source: Path | str) -> ParameterSignature:
    try:
        params = tuple(
            Parameter(entry["name"], ValueType(entry["type"])) for entry in raw["parameters"]
        )
        return ParameterSignature(params, ValueType(raw["return"]))
    except (KeyError, ValueError) as exc:
        raise IngestionError(f"{source}: bad signature: {exc}") from exc


# -- store -------------------------------------------------------------------


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    rejected: list[str]


class Store:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        for name in COLLECTIONS:
            (self.root / name).mkdir(parents=True, exist_ok=True)

    # generic record helpers

    def _path(self, collection: str, record_id: str) -> Path:
        return self.root / collection / f"{record_id}.json"

    def _write(self, collection: str, record_id: str, payload: dict) -> None:
        body = {"schemaVersion": SCHEMA_VERSION, **payload}
        _atomic_write_json(self._path(collection, _check_id(record_id, collection)), body)

    def _read(self, collection: str, record_id: str) -> dict:
        path = self._path(collection, record_id)
        if not path.is_file():
            raise StorageError(f"no {collection} record {record_id!r}")
        payload = json.loads(path.read_text())
        version = payload.get("schemaVersion")
        if version != SCHEMA_VERSION:
            raise StorageError(
                f"{path}: schema version {version} unsupported (expected {SCHEMA_VERSION})"
            )
        return payload

    def _exists(self, collection: str, record_id: str) -> bool:
        return self._path(collection, record_id).is_file()

    def _ids(self, collection: str) -> list[str]:
        folder = self.root / collection
        return sorted(p.stem for p in folder.glob("*.json"))

    # problems

    def ingest_problems(self, path: Path | str) -> int:
        """Load every bundle directory under `path`; duplicates are errors."""
        path = Path(path)
        if not path.is_dir():
            raise IngestionError(f"{path} is not a directory")
        bundles = sorted(d for d in path.iterdir() if d.is_dir())
        if not bundles:
            raise IngestionError(f"{path} holds no problem bundles")
        count = 0
        for bundle in bundles:
            problem = load_problem_bundle(bundle)
            if self._exists("problems", problem.id):
                raise IngestionError(f"duplicate problem id {problem.id!r} from {bundle}")
            self.save_problem(problem)
            count += 1
        return count

    def save_problem(self, problem: Problem) -> None:
        self._write("problems", problem.id, _problem_to_dict(problem))

    def load_problem(self, problem_id: str) -> Problem:
        return _problem_from_dict(self._read("problems", problem_id))

    def problem_ids(self) -> list[str]:
        return self._ids("problems")

    # submissions

    def ingest_submissions(self, path: Path | str) -> IngestReport:
        """Read the delimited submission table; bad rows are skipped and reported.

        Header: student_id, problem_id, code, timestamp. An optional leading
        `id` column pins record ids (otherwise `<student>-<problem>-<n>`).
        """
        path = Path(path)
        try:
            fh = path.open(newline="")
        except OSError as exc:
            raise IngestionError(f"cannot read {path}: {exc}") from exc
        accepted = 0
        rejected: list[str] = []
        with fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                return IngestReport(0, [])
            required = {"student_id", "problem_id", "code", "timestamp"}
            missing = required - set(reader.fieldnames)
            if missing:
                raise IngestionError(f"{path}: missing columns {sorted(missing)}")
            sequence: dict[tuple[str, str], int] = {}
            for row_number, row in enumerate(reader, start=2):
                try:
                    submission = self._submission_from_row(row, sequence)
                except (ValueError, StorageError) as exc:
                    rejected.append(f"row {row_number}: {exc}")
                    continue
                if not self._exists("problems", submission.problem_id):
                    rejected.append(
                        f"row {row_number}: unknown problem {submission.problem_id!r}"
                    )
                    continue
                self.save_submission(submission)
                accepted += 1
        return IngestReport(accepted, rejected)

    def _submission_from_row(
        self, row: dict[str, str], sequence: dict[tuple[str, str], int]
    ) -> Submission:
        student = (row.get("student_id") or "").strip()
        problem = (row.get("problem_id") or "").strip()
        code = row.get("code") or ""
        timestamp_text = (row.get("timestamp") or "").strip()
        if not student or not problem or not code.strip():
            raise ValueError("student_id, problem_id and code are required")
        timestamp = datetime.fromisoformat(timestamp_text)
        if timestamp.tzinfo is None:
            timestamp = timestamp.replace(tzinfo=timezone.utc)
        explicit = (row.get("id") or "").strip()
        if explicit:
            submission_id = explicit
        else:
            key = (student, problem)
            sequence[key] = sequence.get(key, 0) + 1
            submission_id = f"{student}-{problem}-{sequence[key]}"
        return Submission(
            id=_check_id(submission_id, "submission"),
            student_id=student,
            problem_id=problem,
            code=code,
            timestamp=timestamp,
        )

    def save_submission(self, submission: Submission) -> None:
        if not self._exists("problems", submission.problem_id):
            raise IntegrityError(
                f"submission {submission.id!r} references unknown problem "
                f"{submission.problem_id!r}"
            )
        self._write(
            "submissions",
            submission.id,
            {
                "id": submission.id,
                "studentId": submission.student_id,
                "problemId": submission.problem_id,
                "code": submission.code,
                "timestamp": submission.timestamp.isoformat(),
            },
        )

    def load_submission(self, submission_id: str) -> Submission:
        raw = self._read("submissions", submission_id)
        return Submission(
            id=raw["id"],
            student_id=raw["studentId"],
            problem_id=raw["problemId"],
            code=raw["code"],
            timestamp=datetime.fromisoformat(raw["timestamp"]),
        )

    def submission_ids(self) -> list[str]:
        return self._ids("submissions")

    def submissions_for_problem(self, problem_id: str) -> list[Submission]:
        found = [
            self.load_submission(sid)
            for sid in self.submission_ids()
        ]
        return [s for s in found if s.problem_id == problem_id]

    # grades

    def save_grade(self, report: GradeReport) -> None:
        if not self._exists("submissions", report.submission_id):
            raise IntegrityError(
                f"grade references unknown submission {report.submission_id!r}"
            )
        self._write(
            "grades",
            report.submission_id,
            {
                "submissionId": report.submission_id,
                "compiled": report.compiled,
                "verdicts": [[index, verdict.value] for index, verdict in report.verdicts],
                "score": report.score,
                "diagnostics": report.diagnostics,
            },
        )

    def load_grade(self, submission_id: str) -> GradeReport:
        raw = self._read("grades", submission_id)
        return GradeReport(
            submission_id=raw["submissionId"],
            compiled=raw["compiled"],
            verdicts=tuple((index, Verdict(v)) for index, v in raw["verdicts"]),
            score=raw["score"],
            diagnostics=raw.get("diagnostics", ""),
        )

    def graded_ids(self) -> list[str]:
        return self._ids("grades")

    def has_grade(self, submission_id: str) -> bool:
        return self._exists("grades", submission_id)

    # ladders / validations (dict payloads defined by generator/validator)

    def save_ladder(self, submission_id: str, payload: dict) -> None:
        if not self._exists("submissions", submission_id):
            raise IntegrityError(f"ladder references unknown submission {submission_id!r}")
        self._write("ladders", submission_id, payload)

    def load_ladder(self, submission_id: str) -> dict:
        return self._read("ladders", submission_id)

    def has_ladder(self, submission_id: str) -> bool:
        return self._exists("ladders", submission_id)

    def ladder_ids(self) -> list[str]:
        return self._ids("ladders")

    def save_validation(self, submission_id: str, payload: dict) -> None:
        if not self._exists("ladders", submission_id):
            raise IntegrityError(f"validation references unknown ladder {submission_id!r}")
        self._write("validations", submission_id, payload)

    def load_validation(self, submission_id: str) -> dict:
        return self._read("validations", submission_id)

    def validation_ids(self) -> list[str]:
        return self._ids("validations")

    # annotators / ratings (dict payloads defined by the study module)

    def save_annotator(self, annotator_id: str, payload: dict) -> None:
        self._write("annotators", annotator_id, payload)

    def load_annotator(self, annotator_id: str) -> dict:
        return self._read("annotators", annotator_id)

    def annotator_ids(self) -> list[str]:
        return self._ids("annotators")

    def save_rating(self, payload: dict) -> None:
        for key in ("annotatorId", "problemId", "submissionId", "level", "metric", "score"):
            if key not in payload:
                raise StorageError(f"rating payload missing {key!r}")
        if not self._exists("annotators", payload["annotatorId"]):
            raise IntegrityError(f"rating references unknown annotator {payload['annotatorId']!r}")
        if not self._exists("submissions", payload["submissionId"]):
            raise IntegrityError(f"rating references unknown submission {payload['submissionId']!r}")
        record_id = "__".join(
            [payload["annotatorId"], payload["submissionId"], str(payload["level"]), payload["metric"]]
        )
        self._write("ratings", record_id, payload)

    def ratings(self) -> list[dict]:
        return [self._read("ratings", rid) for rid in self._ids("ratings")]

    def ratings_for_annotator(self, annotator_id: str) -> list[dict]:
        # Rating record ids start with "<annotatorId>__"; filtering on the id
        # avoids reading every other annotator's files.
        prefix = f"{annotator_id}__"
        return [
            self._read("ratings", rid)
            for rid in self._ids("ratings")
            if rid.startswith(prefix)
        ]

    # study definition

    def save_study(self, payload: dict) -> None:
        _atomic_write_json(self.root / "study.json", {"schemaVersion": SCHEMA_VERSION, **payload})

    def load_study(self) -> dict:
        path = self.root / "study.json"
        if not path.is_file():
            raise StorageError("study definition not initialized (run study-init)")
        return json.loads(path.read_text())

    def has_study(self) -> bool:
        return (self.root / "study.json").is_file()


# -- study-set selection -----------------------------------------------------

BUCKET_CENTERS = {
    ScoreBucket.LOW: 0.10,
    ScoreBucket.MID: 0.50,
    ScoreBucket.HIGH: 0.90,
}


def select_study_set(
    store: Store, problem_ids: list[str]
) -> dict[str, dict[str, str]]:
    """Pick one graded, compiled submission per bucket per problem.

    Nearest score to the bucket center wins; ties break by earliest
    timestamp, then lexicographic submission id.
    """
    selection: dict[str, dict[str, str]] = {}
    for problem_id in problem_ids:
        if not store._exists("problems", problem_id):
            raise SelectionError(f"unknown problem {problem_id!r}")
        candidates: dict[ScoreBucket, list[tuple[float, datetime, str]]] = {
            bucket: [] for bucket in BUCKET_CENTERS
        }
        for submission in store.submissions_for_problem(problem_id):
            if not store.has_grade(submission.id):
                continue
            grade = store.load_grade(submission.id)
            if not grade.compiled or grade.score is None:
                continue
            bucket = bucket_of(grade.score)
            if bucket in candidates:
                # Scores are small-integer ratios; differences below 1e-9 are
                # float representation noise, not real distinctions.
                distance = round(abs(grade.score - BUCKET_CENTERS[bucket]), 9)
                candidates[bucket].append((distance, submission.timestamp, submission.id))
        chosen: dict[str, str] = {}
        for bucket, center in BUCKET_CENTERS.items():
            pool = candidates[bucket]
            if not pool:
                raise SelectionError(
                    f"problem {problem_id!r} has no graded submission in the "
                    f"{bucket.value} bucket"
                )
            pool.sort(key=lambda item: (item[0], item[1], item[2]))
            chosen[bucket.value] = pool[0][2]
        selection[problem_id] = chosen
    return selection


# -- problem (de)serialization ------------------------------------------------


def _problem_to_dict(problem: Problem) -> dict:
    return {
        "id": problem.id,
        "title": problem.title,
        "statement": problem.statement,
        "signature": {
            "parameters": [
                {"name": p.name, "type": p.value_type.value}
                for p in problem.signature.parameters
            ],
            "return": problem.signature.return_type.value,
        },
        "driverTemplate": problem.driver_template,
        "tests": [
            {
                "args": [render_value(arg) for arg in test.arguments],
                "expected": render_value(test.expected),
            }
            for test in problem.tests
        ],
        "referenceSolution": problem.reference_solution,
        "inputRanges": {
            name: {
                key: value
                for key, value in {
                    "min": rng.minimum,
                    "max": rng.maximum,
                    "elementMin": rng.element_minimum,
                    "elementMax": rng.element_maximum,
                    "maxLength": rng.max_length,
                }.items()
                if value is not None
            }
            for name, rng in problem.input_ranges.items()
        },
    }


def _problem_from_dict(raw: dict) -> Problem:
    signature = _signature_from_dict(raw["signature"], raw.get("id", "?"))
    tests = tuple(
        TestCase(
            tuple(
                parse_value_literal(literal, param.value_type)
                for literal, param in zip(entry["args"], signature.parameters, strict=True)
            ),
            parse_value_literal(entry["expected"], signature.return_type),
        )
        for entry in raw["tests"]
    )
    ranges = {
        name: InputRange(
            minimum=spec.get("min"),
            maximum=spec.get("max"),
            element_minimum=spec.get("elementMin"),
            element_maximum=spec.get("elementMax"),
            max_length=spec.get("maxLength"),
        )
        for name, spec in raw.get("inputRanges", {}).items()
    }
    return Problem(
        id=raw["id"],
        title=raw["title"],
        statement=raw["statement"],
        signature=signature,
        driver_template=raw["driverTemplate"],
        tests=tests,
        reference_solution=raw.get("referenceSolution"),
        input_ranges=ranges,
    )
