"""Three-phase annotation study: eligibility gate, calibration loop, evaluation.

Annotators move strictly forward: eligibility either disqualifies them or
admits them to calibration; calibration repeats until an all-correct answer
set; evaluation walks the fifteen study items (five problems, low/mid/high
submission each) and collects ten Likert ratings per item.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .model import FeedbackLevel, Metric
from .storage import Store

RATINGS_PER_ITEM = len(FeedbackLevel.ordered()) * len(Metric)
BUCKET_ORDER = ("low", "mid", "high")

# Operations for one annotator are serialized; distinct annotators never
# contend. Locks are process-wide so every engine over the same store agrees.
_annotator_locks: dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()


def _annotator_lock(annotator_id: str) -> threading.Lock:
    with _locks_guard:
        return _annotator_locks.setdefault(annotator_id, threading.Lock())


# Creation assigns sequential ids, so it needs its own guard.
_create_lock = threading.Lock()


class Phase(Enum):
    ELIGIBILITY = "eligibility"
    CALIBRATION = "calibration"
    EVALUATION = "evaluation"
    DONE = "done"
    DISQUALIFIED = "disqualified"


class Role(Enum):
    STUDENT = "student"
    INSTRUCTOR = "instructor"
    RESEARCHER = "researcher"


class StateError(RuntimeError):
    """Operation not allowed in the annotator's current phase."""


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class StudyItem:
    index: int  # 0..14 in presentation order
    problem_id: str
    submission_id: str
    bucket: str


@dataclass(frozen=True)
class AnnotatorState:
    annotator_id: str
    display_name: str
    role: Role
    phase: Phase
    calibration_attempts: int
    token: str


class StudyEngine:
    """All study operations, persisted through the record store."""

    def __init__(self, store: Store):
        self.store = store

    # -- definition --

    def definition(self) -> dict:
        return self.store.load_study()

    def items(self) -> list[StudyItem]:
        definition = self.definition()
        items: list[StudyItem] = []
        for problem_id in definition["problemOrder"]:
            chosen = definition["items"][problem_id]
            for bucket in BUCKET_ORDER:
                items.append(
                    StudyItem(
                        index=len(items),
                        problem_id=problem_id,
                        submission_id=chosen[bucket],
                        bucket=bucket,
                    )
                )
        return items

    def calibration_items_public(self) -> list[dict]:
        """Calibration questions with the correct indices stripped."""
        return [
            {"prompt": entry["prompt"], "choices": entry["choices"]}
            for entry in self.definition()["calibration"]
        ]

    # -- annotators --

    def create_annotator(self, display_name: str, role: Role | str) -> AnnotatorState:
        role = Role(role) if isinstance(role, str) else role
        with _create_lock:
            annotator_id = f"a{len(self.store.annotator_ids()) + 1:03d}"
            token = secrets.token_hex(16)
            record = {
                "id": annotator_id,
                "displayName": display_name,
                "role": role.value,
                "phase": Phase.ELIGIBILITY.value,
                "calibrationAttempts": 0,
                "token": token,
                "createdAt": datetime.now(timezone.utc).isoformat(),
            }
            self.store.save_annotator(annotator_id, record)
        return self._state_from_record(record)

    def state(self, annotator_id: str) -> AnnotatorState:
        return self._state_from_record(self.store.load_annotator(annotator_id))

    def by_token(self, token: str) -> AnnotatorState | None:
        for annotator_id in self.store.annotator_ids():
            record = self.store.load_annotator(annotator_id)
            if secrets.compare_digest(record["token"], token):
                return self._state_from_record(record)
        return None

    @staticmethod
    def _state_from_record(record: dict) -> AnnotatorState:
        return AnnotatorState(
            annotator_id=record["id"],
            display_name=record["displayName"],
            role=Role(record["role"]),
            phase=Phase(record["phase"]),
            calibration_attempts=record["calibrationAttempts"],
            token=record["token"],
        )

    def _update(self, annotator_id: str, **changes) -> AnnotatorState:
        record = self.store.load_annotator(annotator_id)
        record.update(changes)
        self.store.save_annotator(annotator_id, record)
        return self._state_from_record(record)

    def _require_phase(self, annotator_id: str, phase: Phase) -> AnnotatorState:
        state = self.state(annotator_id)
        if state.phase is not phase:
            raise StateError(
                f"annotator {annotator_id} is in phase {state.phase.value!r}, "
                f"operation needs {phase.value!r}"
            )
        return state

    # -- eligibility --

    def eligibility_task(self) -> dict:
        """What the annotator sees: the program and the input sets."""
        eligibility = self.definition()["eligibility"]
        return {
            "problemId": eligibility["problemId"],
            "code": eligibility["code"],
            "inputs": eligibility["inputs"],
        }

    def submit_eligibility(self, annotator_id: str, predicted_outputs: list[str]) -> AnnotatorState:
        with _annotator_lock(annotator_id):
            self._require_phase(annotator_id, Phase.ELIGIBILITY)
            expected = self.definition()["eligibility"]["expectedOutputs"]
            if len(predicted_outputs) != len(expected):
                raise InputError(
                    f"expected {len(expected)} predictions, got {len(predicted_outputs)}"
                )
            all_correct = all(
                prediction.strip() == truth.strip()
                for prediction, truth in zip(predicted_outputs, expected)
            )
            next_phase = Phase.CALIBRATION if all_correct else Phase.DISQUALIFIED
            return self._update(annotator_id, phase=next_phase.value)

    # -- calibration --

    def submit_calibration(
        self, annotator_id: str, answers: list[int]
    ) -> tuple[AnnotatorState, list[int]]:
        with _annotator_lock(annotator_id):
            state = self._require_phase(annotator_id, Phase.CALIBRATION)
            bank = self.definition()["calibration"]
            if len(answers) != len(bank):
                raise InputError(f"expected {len(bank)} answers, got {len(answers)}")
            wrong = [
                index
                for index, (answer, entry) in enumerate(zip(answers, bank))
                if answer != entry["correctIndex"]
            ]
            if not wrong:
                return self._update(annotator_id, phase=Phase.EVALUATION.value), []
            return (
                self._update(
                    annotator_id, calibrationAttempts=state.calibration_attempts + 1
                ),
                wrong,
            )

    # -- evaluation --

    def _ratings_by_item(self, annotator_id: str) -> dict[str, set[tuple[int, str]]]:
        collected: dict[str, set[tuple[int, str]]] = {}
        for rating in self.store.ratings_for_annotator(annotator_id):
            collected.setdefault(rating["submissionId"], set()).add(
                (rating["level"], rating["metric"])
            )
        return collected

    def current_item(self, annotator_id: str) -> StudyItem | None:
        """First study item that is not fully rated yet; None when all are."""
        done_pairs = self._ratings_by_item(annotator_id)
        for item in self.items():
            if len(done_pairs.get(item.submission_id, ())) < RATINGS_PER_ITEM:
                return item
        return None

    def next_evaluation_item(self, annotator_id: str) -> StudyItem | None:
        with _annotator_lock(annotator_id):
            state = self.state(annotator_id)
            if state.phase is Phase.DONE:
                return None
            if state.phase is not Phase.EVALUATION:
                raise StateError(
                    f"annotator {annotator_id} is in phase {state.phase.value!r}, "
                    "evaluation has not started"
                )
            item = self.current_item(annotator_id)
            if item is None:
                self._update(annotator_id, phase=Phase.DONE.value)
                return None
            return item

    def submit_rating(
        self,
        annotator_id: str,
        submission_id: str,
        level: FeedbackLevel | int,
        metric: Metric | str,
        score: int,
    ) -> dict:
        with _annotator_lock(annotator_id):
            self._require_phase(annotator_id, Phase.EVALUATION)
            level = FeedbackLevel(level) if isinstance(level, int) else level
            metric = Metric(metric) if isinstance(metric, str) else metric
            if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 5:
                raise InputError(f"score must be an integer in 1..5, got {score!r}")
            item = self.current_item(annotator_id)
            if item is None or item.submission_id != submission_id:
                raise StateError(
                    f"submission {submission_id!r} is not the current evaluation item"
                )
            payload = {
                "annotatorId": annotator_id,
                "problemId": item.problem_id,
                "submissionId": submission_id,
                "level": level.value,
                "metric": metric.value,
                "score": score,
                "ratedAt": datetime.now(timezone.utc).isoformat(),
            }
            self.store.save_rating(payload)
            return payload

    def progress(self, annotator_id: str) -> dict:
        items = self.items()
        done_pairs = self._ratings_by_item(annotator_id)
        completed = sum(
            1
            for item in items
            if len(done_pairs.get(item.submission_id, ())) >= RATINGS_PER_ITEM
        )
        return {"completedItems": completed, "totalItems": len(items)}


# -- study definition construction --------------------------------------------


def build_study_definition(
    store: Store,
    setup: dict,
    selection: dict[str, dict[str, str]],
    expected_outputs: list[str],
    eligibility_code: str,
) -> dict:
    bank = setup["calibration"]
    for index, entry in enumerate(bank):
        if not 0 <= entry["correctIndex"] < len(entry["choices"]):
            raise InputError(f"calibration item {index}: correctIndex out of range")
    definition = {
        "problemOrder": setup["problems"],
        "items": selection,
        "eligibility": {
            "problemId": setup["eligibility"]["problemId"],
            "code": eligibility_code,
            "inputs": setup["eligibility"]["inputs"],
            "expectedOutputs": expected_outputs,
        },
        "calibration": bank,
    }
    store.save_study(definition)
    return definition
