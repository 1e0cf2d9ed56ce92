"""Prompt construction, chat-completion clients, and ladder parsing.

The prompt is a fixed preamble defining the five feedback levels followed by
the problem statement and the submission code. Responses are split back into
per-level sections by line-anchored `Level k` headings.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol

from .model import (
    FeedbackLevel,
    ParameterSignature,
    Problem,
    Submission,
    Value,
    parse_value_literal,
)

API_KEY_ENV = "LADDERFORGE_API_KEY"

PROMPT_PREAMBLE = """\
There can be different levels of feedback for a student who is trying to solve a programming assignment. Below we describe each level.

Level 0:
Just the correct or incorrect verdict for the code.

Level 1:
Giving a test case where the code fails. The test case contains just input, expected output and the code output. No explanations.

Level 2:
A high-level explanation of why the code failed in the test case. No mention of how to modify the code.

Level 3:
A high-level suggestion about the location in the code where you should make the changes.

Level 4:
Suggestion in actual programming language how to change the code to get the correct solution. Just the statements where change is necessary are mentioned. The full solution code is never given.

For the given problem and code, generate feedback for each of these levels. When generating test cases make sure the generated test case falls inside the valid range.
"""

FORMAT_REMINDER = (
    "\n\nLabel each level exactly `Level k:` on its own line, for k from 0 to 4."
)


class GenerationError(RuntimeError):
    pass


class AuthError(GenerationError):
    pass


class TransportError(GenerationError):
    pass


class LadderParseError(GenerationError):
    def __init__(self, missing_levels: list[FeedbackLevel], raw_response: str):
        names = ", ".join(f"Level {lvl.value}" for lvl in missing_levels)
        super().__init__(f"response is missing headings for: {names}")
        self.missing_levels = missing_levels
        self.raw_response = raw_response


class ClaimedCaseParseError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationParams:
    model_name: str = "gpt-4"
    temperature: float = 0.0
    max_tokens: int = 1024
    base_url: str = "https://api.openai.com/v1"
    max_retries: int = 1

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    truncated: bool = False


class Completer(Protocol):
    def complete(
        self, prompt: str, params: GenerationParams, submission_id: str | None = None
    ) -> CompletionResult: ...


@dataclass(frozen=True)
class FeedbackLadder:
    submission_id: str
    levels: dict[FeedbackLevel, str]
    raw_response: str
    prompt: str
    params: GenerationParams
    created_at: datetime
    truncated: bool = False

    def __post_init__(self) -> None:
        missing = [lvl for lvl in FeedbackLevel.ordered() if not self.levels.get(lvl, "").strip()]
        if missing:
            raise ValueError(
                "ladder must carry non-empty text for all five levels; missing "
                + ", ".join(str(lvl.value) for lvl in missing)
            )

    def level_text(self, level: FeedbackLevel) -> str:
        return self.levels[level]


@dataclass(frozen=True)
class ClaimedTestCase:
    bindings: dict[str, Value]
    expected_text: str
    claimed_output_text: str


def build_prompt(problem: Problem, submission: Submission) -> str:
    """Deterministic prompt for one problem/submission pair."""
    return (
        f"{PROMPT_PREAMBLE}\n"
        f"Problem: {problem.statement}\n"
        f"Code:\n{submission.code}"
    )


# -- completers ---------------------------------------------------------------


class OpenAIChatCompleter:
    """Minimal OpenAI-compatible /chat/completions client."""

    def __init__(self, api_key: str | None = None, timeout: float = 60.0):
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout

    def complete(
        self, prompt: str, params: GenerationParams, submission_id: str | None = None
    ) -> CompletionResult:
        if not self.api_key:
            raise AuthError(f"no API credential; set {API_KEY_ENV}")
        import httpx

        url = params.base_url.rstrip("/") + "/chat/completions"
        body = {
            "model": params.model_name,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "messages": [{"role": "user", "content": prompt}],
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        attempts = params.max_retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            try:
                response = httpx.post(url, json=body, headers=headers, timeout=self.timeout)
                if response.status_code in (401, 403):
                    raise AuthError(f"endpoint rejected credential ({response.status_code})")
                response.raise_for_status()
                payload = response.json()
                choice = payload["choices"][0]
                text = choice["message"]["content"] or ""
                if not text.strip():
                    raise GenerationError("endpoint returned an empty completion")
                return CompletionResult(
                    text=text,
                    truncated=choice.get("finish_reason") == "length",
                )
            except AuthError:
                raise
            except GenerationError:
                raise
            except Exception as exc:  # network errors, 5xx, 429, bad payloads
                last_error = exc
                if attempt + 1 < attempts:
                    time.sleep(min(2.0**attempt, 8.0))
        raise TransportError(f"completion failed after {attempts} attempt(s): {last_error}")


class MockCompleter:
    """Deterministic completer backed by response files keyed by submission id."""

    def __init__(self, fixtures_dir: Path | str):
        self.fixtures_dir = Path(fixtures_dir)

    def complete(
        self, prompt: str, params: GenerationParams, submission_id: str | None = None
    ) -> CompletionResult:
        if submission_id is None:
            raise GenerationError("mock completer needs a submission id")
        path = self.fixtures_dir / f"{submission_id}.txt"
        if not path.is_file():
            raise GenerationError(f"no mock response for submission {submission_id!r}")
        return CompletionResult(text=path.read_text())


# -- response parsing ---------------------------------------------------------

_HEADING_RE = re.compile(
    r"^[ \t]*[#*_]*[ \t]*level[ \t]*([0-4])[ \t]*[*_]*[ \t]*[:\-–—]?[*_]*[ \t]*",
    re.IGNORECASE | re.MULTILINE,
)


def parse_ladder(response_text: str) -> dict[FeedbackLevel, str]:
    """Split a response into the five level sections.

    Headings are `Level k` anchored at line start, tolerating emphasis
    markers, an optional colon/dash, and any case. A level's text runs to the
    next heading. Raises LadderParseError naming every absent level.
    """
    matches = list(_HEADING_RE.finditer(response_text))
    sections: dict[FeedbackLevel, str] = {}
    for index, match in enumerate(matches):
        level = FeedbackLevel(int(match.group(1)))
        end = matches[index + 1].start() if index + 1 < len(matches) else len(response_text)
        body = response_text[match.end() : end].strip()
        body = re.sub(r"^[*_]+[ \t]*", "", body)  # emphasis closing the heading itself
        sections[level] = body
    missing = [lvl for lvl in FeedbackLevel.ordered() if not sections.get(lvl, "").strip()]
    if missing:
        raise LadderParseError(missing, response_text)
    return {lvl: sections[lvl] for lvl in FeedbackLevel.ordered()}


_LABEL_RES = {
    "input": re.compile(r"^[ \t]*[#*_`]*input[#*_`]*[ \t]*[:\-][ \t]*(.*)$", re.IGNORECASE),
    "expected": re.compile(
        r"^[ \t]*[#*_`]*expected[ \t]+output[#*_`]*[ \t]*[:\-][ \t]*(.*)$", re.IGNORECASE
    ),
    "claimed": re.compile(
        r"^[ \t]*[#*_`]*(?:your|code|actual)[ \t]+output[#*_`]*[ \t]*[:\-][ \t]*(.*)$",
        re.IGNORECASE,
    ),
}


def split_top_level_commas(text: str) -> list[str]:
    """Split on commas that are not nested inside brackets or quotes."""
    parts: list[str] = []
    depth = 0
    in_quote = False
    current: list[str] = []
    for ch in text:
        if in_quote:
            current.append(ch)
            if ch == '"':
                in_quote = False
            continue
        if ch == '"':
            in_quote = True
            current.append(ch)
        elif ch in "[(":
            depth += 1
            current.append(ch)
        elif ch in "])":
            depth = max(depth - 1, 0)
            current.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_claimed_test_case(
    level1_text: str, signature: ParameterSignature
) -> ClaimedTestCase:
    """Extract the Input / Expected Output / Your Output triple from L1 text."""
    found: dict[str, str] = {}
    for line in level1_text.splitlines():
        for key, pattern in _LABEL_RES.items():
            if key in found:
                continue
            match = pattern.match(line)
            if match:
                found[key] = match.group(1).strip()
    for key, label in (("input", "Input"), ("expected", "Expected Output"), ("claimed", "Your Output")):
        if key not in found:
            raise ClaimedCaseParseError(f"no {label!r} line in level-1 text")

    bindings: dict[str, Value] = {}
    for chunk in split_top_level_commas(found["input"]):
        if "=" not in chunk:
            raise ClaimedCaseParseError(f"cannot read binding {chunk.strip()!r}")
        name, literal = chunk.split("=", 1)
        name = name.strip()
        if name not in signature.names:
            raise ClaimedCaseParseError(f"unknown parameter {name!r}")
        if name in bindings:
            raise ClaimedCaseParseError(f"parameter {name!r} bound twice")
        try:
            bindings[name] = parse_value_literal(literal, signature.type_of(name))
        except ValueError as exc:
            raise ClaimedCaseParseError(f"bad literal for {name!r}: {exc}") from exc
    unbound = [name for name in signature.names if name not in bindings]
    if unbound:
        raise ClaimedCaseParseError(f"unbound parameters: {', '.join(unbound)}")
    return ClaimedTestCase(
        bindings=bindings,
        expected_text=found["expected"],
        claimed_output_text=found["claimed"],
    )


# -- orchestration ------------------------------------------------------------


def generate_ladder(
    problem: Problem,
    submission: Submission,
    params: GenerationParams,
    completer: Completer,
    score: float | None = None,
    compiled: bool = True,
) -> FeedbackLadder:
    """Prompt, complete, and parse; retries once with a format reminder."""
    if score is not None and score >= 1.0:
        raise GenerationError(
            f"submission {submission.id!r} already has a perfect score; "
            "ladders are only defined for incorrect programs"
        )
    if not compiled:
        raise GenerationError(
            f"submission {submission.id!r} did not compile; ladders target logical errors"
        )
    prompt = build_prompt(problem, submission)
    result = completer.complete(prompt, params, submission_id=submission.id)
    try:
        levels = parse_ladder(result.text)
    except LadderParseError:
        retry_prompt = prompt + FORMAT_REMINDER
        result = completer.complete(retry_prompt, params, submission_id=submission.id)
        levels = parse_ladder(result.text)  # second failure propagates
        prompt = retry_prompt
    return FeedbackLadder(
        submission_id=submission.id,
        levels=levels,
        raw_response=result.text,
        prompt=prompt,
        params=params,
        created_at=datetime.now(timezone.utc),
        truncated=result.truncated,
    )


# -- persistence adapters -----------------------------------------------------


def ladder_to_dict(ladder: FeedbackLadder) -> dict:
    return {
        "submissionId": ladder.submission_id,
        "levels": {str(lvl.value): text for lvl, text in ladder.levels.items()},
        "rawResponse": ladder.raw_response,
        "prompt": ladder.prompt,
        "params": {
            "modelName": ladder.params.model_name,
            "temperature": ladder.params.temperature,
            "maxTokens": ladder.params.max_tokens,
            "baseUrl": ladder.params.base_url,
            "maxRetries": ladder.params.max_retries,
        },
        "createdAt": ladder.created_at.isoformat(),
        "truncated": ladder.truncated,
    }


def ladder_from_dict(raw: dict) -> FeedbackLadder:
    params = raw["params"]
    return FeedbackLadder(
        submission_id=raw["submissionId"],
        levels={FeedbackLevel(int(k)): v for k, v in raw["levels"].items()},
        raw_response=raw["rawResponse"],
        prompt=raw.get("prompt", ""),
        params=GenerationParams(
            model_name=params["modelName"],
            temperature=params["temperature"],
            max_tokens=params["maxTokens"],
            base_url=params["baseUrl"],
            max_retries=params["maxRetries"],
        ),
        created_at=datetime.fromisoformat(raw["createdAt"]),
        truncated=raw["truncated"],
    )
