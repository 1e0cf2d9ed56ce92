"""Execution-backed fidelity checks on generated ladders.

The checks catch mechanical failure modes: a verdict contradicting the
grade, a claimed failing test case that does not reproduce, an expected
output the reference solution disagrees with, near-whole-program listings in
the edit level, and code leaking into the hint levels. Semantic hint quality
stays with human raters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .generator import ClaimedCaseParseError, FeedbackLadder, parse_claimed_test_case
from .model import FeedbackLevel, InputRange, Problem, Submission
from .runner import (
    GradeReport,
    Toolchain,
    outcome_text,
    run_single,
    run_source,
)

FULL_PROGRAM_RATIO = 0.8
HINT_LINE_MIN_CHARS = 10


class FlagCode(Enum):
    VERDICT_INCONSISTENT = "VERDICT_INCONSISTENT"
    UNPARSEABLE_TEST_CASE = "UNPARSEABLE_TEST_CASE"
    CLAIMED_OUTPUT_MISMATCH = "CLAIMED_OUTPUT_MISMATCH"
    NOT_A_FAILING_CASE = "NOT_A_FAILING_CASE"
    WRONG_EXPECTED_OUTPUT = "WRONG_EXPECTED_OUTPUT"
    OUT_OF_RANGE_TEST_CASE = "OUT_OF_RANGE_TEST_CASE"
    FULL_PROGRAM_LISTED = "FULL_PROGRAM_LISTED"
    CODE_IN_HINT = "CODE_IN_HINT"
    TRUNCATED_RESPONSE = "TRUNCATED_RESPONSE"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


SEVERITY_OF: dict[FlagCode, Severity] = {
    FlagCode.VERDICT_INCONSISTENT: Severity.ERROR,
    FlagCode.CLAIMED_OUTPUT_MISMATCH: Severity.ERROR,
    FlagCode.NOT_A_FAILING_CASE: Severity.ERROR,
    FlagCode.WRONG_EXPECTED_OUTPUT: Severity.ERROR,
    FlagCode.FULL_PROGRAM_LISTED: Severity.ERROR,
    FlagCode.UNPARSEABLE_TEST_CASE: Severity.WARNING,
    FlagCode.OUT_OF_RANGE_TEST_CASE: Severity.WARNING,
    FlagCode.CODE_IN_HINT: Severity.WARNING,
    FlagCode.TRUNCATED_RESPONSE: Severity.WARNING,
}

# Which reveal level a flag concerns; None = ladder-wide.
LEVEL_OF_FLAG: dict[FlagCode, int | None] = {
    FlagCode.VERDICT_INCONSISTENT: 0,
    FlagCode.UNPARSEABLE_TEST_CASE: 1,
    FlagCode.CLAIMED_OUTPUT_MISMATCH: 1,
    FlagCode.NOT_A_FAILING_CASE: 1,
    FlagCode.WRONG_EXPECTED_OUTPUT: 1,
    FlagCode.OUT_OF_RANGE_TEST_CASE: 1,
    FlagCode.CODE_IN_HINT: 2,
    FlagCode.FULL_PROGRAM_LISTED: 4,
    FlagCode.TRUNCATED_RESPONSE: None,
}


@dataclass(frozen=True)
class ValidationFlag:
    code: FlagCode
    detail: str

    @property
    def severity(self) -> Severity:
        return SEVERITY_OF[self.code]


@dataclass(frozen=True)
class ValidationReport:
    ladder_id: str
    flags: tuple[ValidationFlag, ...]
    checked_at: datetime

    def has_errors(self) -> bool:
        return any(flag.severity is Severity.ERROR for flag in self.flags)


# -- level 0 -------------------------------------------------------------------

_CORRECT_WORD = re.compile(r"\bcorrect\b", re.IGNORECASE)
_INCORRECT_WORD = re.compile(r"\b(incorrect|not\s+correct|isn'?t\s+correct|never\s+correct)\b", re.IGNORECASE)


def asserts_correct(level0_text: str) -> bool:
    """True iff the verdict text claims the code is correct."""
    if _INCORRECT_WORD.search(level0_text):
        return False
    return bool(_CORRECT_WORD.search(level0_text))


def validate_level0(ladder: FeedbackLadder, grade: GradeReport) -> ValidationFlag | None:
    text = ladder.level_text(FeedbackLevel.L0)
    score = grade.score if grade.score is not None else 0.0
    if asserts_correct(text) and score < 1.0:
        return ValidationFlag(
            FlagCode.VERDICT_INCONSISTENT,
            f"verdict says correct but the submission scores {score:.2f}",
        )
    return None


# -- level 1 -------------------------------------------------------------------


def _range_violation(name: str, value, rng: InputRange) -> str | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        if rng.minimum is not None and value < rng.minimum:
            return f"{name} = {value} below declared minimum {rng.minimum}"
        if rng.maximum is not None and value > rng.maximum:
            return f"{name} = {value} above declared maximum {rng.maximum}"
        return None
    if isinstance(value, tuple):
        if rng.max_length is not None and len(value) > rng.max_length:
            return f"{name} has {len(value)} elements, over the declared {rng.max_length}"
        for element in value:
            if rng.element_minimum is not None and element < rng.element_minimum:
                return f"{name} contains {element}, below declared minimum {rng.element_minimum}"
            if rng.element_maximum is not None and element > rng.element_maximum:
                return f"{name} contains {element}, above declared maximum {rng.element_maximum}"
    return None


def validate_level1(
    ladder: FeedbackLadder,
    problem: Problem,
    submission: Submission,
    toolchain: Toolchain,
) -> list[ValidationFlag]:
    """Execute the claimed failing case and compare against the claims.

    The submission runs exactly once; the reference solution (when present)
    runs once more to audit the claimed expected output.
    """
    flags: list[ValidationFlag] = []
    text = ladder.level_text(FeedbackLevel.L1)
    try:
        claim = parse_claimed_test_case(text, problem.signature)
    except ClaimedCaseParseError as exc:
        return [ValidationFlag(FlagCode.UNPARSEABLE_TEST_CASE, str(exc))]

    for name, rng in problem.input_ranges.items():
        violation = _range_violation(name, claim.bindings[name], rng)
        if violation:
            flags.append(ValidationFlag(FlagCode.OUT_OF_RANGE_TEST_CASE, violation))

    arguments = [claim.bindings[name] for name in problem.signature.names]
    actual = outcome_text(run_single(submission, problem, arguments, toolchain))
    claimed = claim.claimed_output_text.strip()
    expected = claim.expected_text.strip()

    if actual != claimed:
        flags.append(
            ValidationFlag(
                FlagCode.CLAIMED_OUTPUT_MISMATCH,
                f"ladder claims the code outputs {claimed!r} but it actually "
                f"produced {actual!r}",
            )
        )
    if actual == expected:
        flags.append(
            ValidationFlag(
                FlagCode.NOT_A_FAILING_CASE,
                f"the code already produces the expected output {expected!r} "
                "on the claimed case",
            )
        )
    if problem.reference_solution:
        reference = outcome_text(
            run_source(problem.reference_solution, problem, arguments, toolchain)
        )
        if reference != expected:
            flags.append(
                ValidationFlag(
                    FlagCode.WRONG_EXPECTED_OUTPUT,
                    f"ladder claims the expected output is {expected!r} but the "
                    f"reference solution produces {reference!r}",
                )
            )
    return flags


# -- levels 2-4 ----------------------------------------------------------------

_FENCE_RE = re.compile(r"^\s*```", re.MULTILINE)
_CODELINE_END = (";", "{", "}")


def code_blocks(text: str) -> list[list[str]]:
    """Fenced blocks plus runs of >= 2 consecutive code-shaped lines."""
    blocks: list[list[str]] = []
    lines = text.splitlines()
    in_fence = False
    fence: list[str] = []
    run: list[str] = []

    def close_run() -> None:
        nonlocal run
        if len(run) >= 2:
            blocks.append(run)
        run = []

    for line in lines:
        if line.strip().startswith("```"):
            if in_fence:
                blocks.append(fence)
                fence = []
                in_fence = False
            else:
                close_run()
                in_fence = True
            continue
        if in_fence:
            fence.append(line)
            continue
        if line.rstrip().endswith(_CODELINE_END) and line.strip():
            run.append(line)
        else:
            close_run()
    close_run()
    if in_fence and fence:
        blocks.append(fence)
    return blocks


def validate_level4(ladder: FeedbackLadder, submission: Submission) -> list[ValidationFlag]:
    text = ladder.level_text(FeedbackLevel.L4)
    submission_lines = len(submission.non_blank_lines())
    if submission_lines == 0:
        return []
    flags: list[ValidationFlag] = []
    for block in code_blocks(text):
        block_lines = len([line for line in block if line.strip()])
        if block_lines >= FULL_PROGRAM_RATIO * submission_lines:
            flags.append(
                ValidationFlag(
                    FlagCode.FULL_PROGRAM_LISTED,
                    f"edit suggestion lists a {block_lines}-line program against a "
                    f"{submission_lines}-line submission",
                )
            )
            break
    return flags


def validate_hint_purity(
    ladder: FeedbackLadder, submission: Submission
) -> list[ValidationFlag]:
    """Hints (L2) and locations (L3) must not carry code."""
    submission_lines = {
        line.strip() for line in submission.non_blank_lines() if len(line.strip()) > HINT_LINE_MIN_CHARS
    }
    flags: list[ValidationFlag] = []
    for level in (FeedbackLevel.L2, FeedbackLevel.L3):
        text = ladder.level_text(level)
        if _FENCE_RE.search(text):
            flags.append(
                ValidationFlag(
                    FlagCode.CODE_IN_HINT,
                    f"level {level.value} contains a fenced code block",
                )
            )
            continue
        for line in text.splitlines():
            if line.strip() in submission_lines:
                flags.append(
                    ValidationFlag(
                        FlagCode.CODE_IN_HINT,
                        f"level {level.value} repeats a submission line verbatim: "
                        f"{line.strip()!r}",
                    )
                )
                break
    return flags


# -- aggregation ----------------------------------------------------------------


def validate_ladder(
    ladder: FeedbackLadder,
    problem: Problem,
    submission: Submission,
    grade: GradeReport,
    toolchain: Toolchain,
) -> ValidationReport:
    flags: list[ValidationFlag] = []
    verdict_flag = validate_level0(ladder, grade)
    if verdict_flag:
        flags.append(verdict_flag)
    flags.extend(validate_level1(ladder, problem, submission, toolchain))
    flags.extend(validate_level4(ladder, submission))
    flags.extend(validate_hint_purity(ladder, submission))
    if ladder.truncated:
        flags.append(
            ValidationFlag(
                FlagCode.TRUNCATED_RESPONSE,
                "the completion ran out of tokens; lower levels may be cut off",
            )
        )
    return ValidationReport(
        ladder_id=ladder.submission_id,
        flags=tuple(flags),
        checked_at=datetime.now(timezone.utc),
    )


# -- persistence adapters --------------------------------------------------------


def report_to_dict(report: ValidationReport) -> dict:
    return {
        "ladderId": report.ladder_id,
        "flags": [
            {"code": flag.code.value, "severity": flag.severity.value, "detail": flag.detail}
            for flag in report.flags
        ],
        "checkedAt": report.checked_at.isoformat(),
    }


def report_from_dict(raw: dict) -> ValidationReport:
    return ValidationReport(
        ladder_id=raw["ladderId"],
        flags=tuple(
            ValidationFlag(FlagCode(entry["code"]), entry["detail"]) for entry in raw["flags"]
        ),
        checked_at=datetime.fromisoformat(raw["checkedAt"]),
    )
