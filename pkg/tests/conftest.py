"""Shared fixtures: one fully-populated store per session, copied per test
when a test needs to mutate it."""

from __future__ import annotations

import hashlib
import shutil
from pathlib import Path

import pytest

from ladderforge.cli import cli_dispatch
from ladderforge.model import FeedbackLevel, Metric
from ladderforge.runner import builtin_toolchains
from ladderforge.storage import Store
from ladderforge.study import Phase, Role, StudyEngine

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

STUDY_PROBLEMS = ["sortasum", "iseverywhere", "counthi", "sum13", "frontback"]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def java_toolchain():
    return builtin_toolchains()["java"]


@pytest.fixture(scope="session")
def pyscript_toolchain():
    return builtin_toolchains()["pyscript"]


def run_pipeline(data_dir: Path) -> None:
    """ingest -> grade -> study-init -> generate(mock) -> validate."""
    base = ["--data-dir", str(data_dir)]
    assert cli_dispatch(base + [
        "ingest",
        "--problems", str(FIXTURES / "problems"),
        "--submissions", str(FIXTURES / "submissions.csv"),
    ]) == 0
    assert cli_dispatch(base + ["grade", "--all"]) == 0
    assert cli_dispatch(base + [
        "study-init", "--config", str(FIXTURES / "study_setup.json"),
    ]) == 0
    assert cli_dispatch(base + [
        "generate", "--mock", str(FIXTURES / "mock_responses"),
    ]) == 0
    # Error-severity flags exist by design in the fixture set, hence exit 1.
    assert cli_dispatch(base + ["validate"]) == 1


@pytest.fixture(scope="session")
def pipeline_dir(tmp_path_factory) -> Path:
    data_dir = tmp_path_factory.mktemp("pipeline") / "data"
    run_pipeline(data_dir)
    return data_dir


@pytest.fixture(scope="session")
def pipeline_store(pipeline_dir) -> Store:
    return Store(pipeline_dir)


@pytest.fixture()
def store_copy(pipeline_dir, tmp_path) -> Store:
    """Private mutable copy of the populated store."""
    target = tmp_path / "data"
    shutil.copytree(pipeline_dir, target)
    return Store(target)


def simulated_score(annotator_id: str, submission_id: str, level: int, metric: str) -> int:
    """Deterministic 1..5 rating, stable across runs and platforms."""
    tag = f"{annotator_id}|{submission_id}|{level}|{metric}"
    return 1 + hashlib.sha256(tag.encode()).digest()[0] % 5


def drive_annotator_to_done(engine: StudyEngine, display_name: str) -> str:
    """Create an annotator and push them through all three phases."""
    state = engine.create_annotator(display_name, Role.STUDENT)
    annotator_id = state.annotator_id
    expected = engine.definition()["eligibility"]["expectedOutputs"]
    state = engine.submit_eligibility(annotator_id, list(expected))
    assert state.phase is Phase.CALIBRATION
    answers = [entry["correctIndex"] for entry in engine.definition()["calibration"]]
    state, wrong = engine.submit_calibration(annotator_id, answers)
    assert state.phase is Phase.EVALUATION and not wrong
    while (item := engine.next_evaluation_item(annotator_id)) is not None:
        for level in FeedbackLevel.ordered():
            for metric in Metric:
                engine.submit_rating(
                    annotator_id,
                    item.submission_id,
                    level,
                    metric,
                    simulated_score(annotator_id, item.submission_id, level.value, metric.value),
                )
    return annotator_id
