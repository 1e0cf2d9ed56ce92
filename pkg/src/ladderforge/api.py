"""HTTP service for annotators (study flow), teachers (ladder reveal), and
analytics dashboards. Every route delegates to the study, storage, and
analytics modules; no business logic lives here."""

from __future__ import annotations

from fastapi import Depends, FastAPI, Header, HTTPException, Query
from pydantic import BaseModel, Field

from .analytics import agreement_matrix, aggregate_bucket_level, aggregate_question_level, canonical_key_order, rating_vector
from .generator import ladder_from_dict
from .model import Metric
from .runner import Toolchain
from .storage import StorageError, Store
from .study import AnnotatorState, InputError, Phase, Role, StateError, StudyEngine
from .validator import LEVEL_OF_FLAG, FlagCode


class CreateAnnotatorBody(BaseModel):
    displayName: str = Field(min_length=1)
    role: str


class EligibilityBody(BaseModel):
    predictedOutputs: list[str]


class CalibrationBody(BaseModel):
    answers: list[int]


class RatingBody(BaseModel):
    submissionId: str
    level: int = Field(ge=0, le=4)
    metric: str
    score: int


def reveal_ladder(store: Store, submission_id: str, max_level: int) -> dict:
    """Level texts up to max_level plus the flags that concern those levels.

    Levels above max_level are absent from the payload entirely, including
    flag details that would quote them.
    """
    if not 0 <= max_level <= 4:
        raise ValueError(f"maxLevel must be in 0..4, got {max_level}")
    ladder = ladder_from_dict(store.load_ladder(submission_id))
    levels = {
        str(level.value): text
        for level, text in ladder.levels.items()
        if level.value <= max_level
    }
    flags: list[dict] = []
    try:
        stored = store.load_validation(submission_id)
    except StorageError:
        stored = {"flags": []}
    for entry in stored["flags"]:
        flag_level = LEVEL_OF_FLAG[FlagCode(entry["code"])]
        if flag_level is None or flag_level <= max_level:
            flags.append(entry)
    return {
        "submissionId": submission_id,
        "maxLevel": max_level,
        "levels": levels,
        "flags": flags,
    }


def create_app(store: Store, toolchain: Toolchain | None = None) -> FastAPI:
    app = FastAPI(title="ladderforge", version="0.1.0")
    engine = StudyEngine(store)

    def current_annotator(
        x_annotator_token: str | None = Header(default=None),
    ) -> AnnotatorState:
        if not x_annotator_token:
            raise HTTPException(status_code=401, detail="missing X-Annotator-Token header")
        state = engine.by_token(x_annotator_token)
        if state is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return state

    @app.post("/api/annotators", status_code=201)
    def create_annotator(body: CreateAnnotatorBody) -> dict:
        try:
            role = Role(body.role.lower())
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown role {body.role!r}")
        state = engine.create_annotator(body.displayName, role)
        return {"annotatorId": state.annotator_id, "token": state.token}

    @app.get("/api/study/state")
    def study_state(annotator: AnnotatorState = Depends(current_annotator)) -> dict:
        payload: dict = {
            "annotatorId": annotator.annotator_id,
            "phase": annotator.phase.value,
            "calibrationAttempts": annotator.calibration_attempts,
        }
        if annotator.phase is Phase.ELIGIBILITY:
            payload["eligibility"] = engine.eligibility_task()
        elif annotator.phase is Phase.CALIBRATION:
            payload["calibration"] = engine.calibration_items_public()
        elif annotator.phase in (Phase.EVALUATION, Phase.DONE):
            payload["progress"] = engine.progress(annotator.annotator_id)
        return payload

    @app.post("/api/study/eligibility")
    def submit_eligibility(
        body: EligibilityBody, annotator: AnnotatorState = Depends(current_annotator)
    ) -> dict:
        try:
            state = engine.submit_eligibility(annotator.annotator_id, body.predictedOutputs)
        except StateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"phase": state.phase.value}

    @app.post("/api/study/calibration")
    def submit_calibration(
        body: CalibrationBody, annotator: AnnotatorState = Depends(current_annotator)
    ) -> dict:
        try:
            state, wrong = engine.submit_calibration(annotator.annotator_id, body.answers)
        except StateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"phase": state.phase.value, "wrongIndices": wrong}

    @app.get("/api/study/next")
    def next_item(annotator: AnnotatorState = Depends(current_annotator)) -> dict:
        try:
            item = engine.next_evaluation_item(annotator.annotator_id)
        except StateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        if item is None:
            return {"done": True}
        submission = store.load_submission(item.submission_id)
        problem = store.load_problem(item.problem_id)
        ladder = ladder_from_dict(store.load_ladder(item.submission_id))
        return {
            "done": False,
            "item": {
                "index": item.index,
                "total": len(engine.items()),
                "problemId": item.problem_id,
                "submissionId": item.submission_id,
                "title": problem.title,
                "statement": problem.statement,
                "code": submission.code,
                "ladder": {str(level.value): text for level, text in ladder.levels.items()},
            },
        }

    @app.post("/api/study/ratings")
    def submit_rating(
        body: RatingBody, annotator: AnnotatorState = Depends(current_annotator)
    ) -> dict:
        try:
            metric = Metric(body.metric.lower())
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown metric {body.metric!r}")
        try:
            engine.submit_rating(
                annotator.annotator_id, body.submissionId, body.level, metric, body.score
            )
        except StateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"ok": True}

    @app.get("/api/ladders/{submission_id}")
    def ladder_reveal(submission_id: str, maxLevel: int = Query(default=0, ge=0, le=4)) -> dict:
        try:
            return reveal_ladder(store, submission_id, maxLevel)
        except StorageError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/api/analytics/agreement")
    def analytics_agreement() -> dict:
        ratings = store.ratings()
        ids = sorted({r["annotatorId"] for r in ratings})
        if len(ids) < 2:
            raise HTTPException(status_code=404, detail="need ratings from at least two annotators")
        key_order = canonical_key_order(ratings)
        vectors = [rating_vector(annotator_id, ratings, key_order) for annotator_id in ids]
        matrix = agreement_matrix([v for v in vectors if v.entries])
        return {
            "annotatorIds": list(matrix.annotator_ids),
            "values": [list(row) for row in matrix.values],
            "rowAverages": list(matrix.row_averages),
            "overallAverage": matrix.overall_average,
            "offDiagonalAverage": matrix.off_diagonal_average,
            "notes": list(matrix.notes),
        }

    def _bucket_map() -> dict[str, str]:
        if not store.has_study():
            return {}
        buckets: dict[str, str] = {}
        for chosen in store.load_study()["items"].values():
            for bucket, submission_id in chosen.items():
                buckets[submission_id] = bucket
        return buckets

    @app.get("/api/analytics/fig1")
    def analytics_fig1(metric: str = Query(default="relevance")) -> dict:
        cells = aggregate_question_level(store.ratings(), metric.lower())
        return {
            "metric": metric.lower(),
            "cells": [
                {
                    "problemId": cell.group_key[0],
                    "level": cell.group_key[1],
                    "mean": cell.mean,
                    "std": cell.std_dev,
                    "n": cell.n,
                }
                for cell in cells
            ],
        }

    @app.get("/api/analytics/fig2")
    def analytics_fig2(metric: str = Query(default="relevance")) -> dict:
        cells = aggregate_bucket_level(store.ratings(), metric.lower(), _bucket_map())
        return {
            "metric": metric.lower(),
            "cells": [
                {
                    "bucket": cell.group_key[0],
                    "level": cell.group_key[1],
                    "mean": cell.mean,
                    "std": cell.std_dev,
                    "n": cell.n,
                }
                for cell in cells
            ],
        }

    return app
