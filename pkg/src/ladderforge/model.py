"""Core domain types: value literals, problems, submissions, score buckets.

Everything here is immutable after construction and safe to share across
threads. The value grammar covers exactly the four types the study problems
need: integers, booleans, double-quoted text, and integer arrays.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Union

Value = Union[int, bool, str, tuple[int, ...]]


class ValueType(Enum):
    INTEGER = "integer"
    BOOLEAN = "boolean"
    TEXT = "text"
    INTEGER_ARRAY = "integer-array"


class ScoreBucket(Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"
    OTHER = "other"
    PERFECT = "perfect"


class FeedbackLevel(Enum):
    """The five rungs, ordered from bare verdict to concrete edits."""

    L0 = 0  # Yes/No verdict
    L1 = 1  # failing test case
    L2 = 2  # high-level hint
    L3 = 3  # location of the mistake
    L4 = 4  # concrete edit

    @classmethod
    def ordered(cls) -> tuple["FeedbackLevel", ...]:
        return (cls.L0, cls.L1, cls.L2, cls.L3, cls.L4)


class Metric(Enum):
    RELEVANCE = "relevance"
    EFFECTIVENESS = "effectiveness"


class DomainError(ValueError):
    """Input violates a documented precondition."""


class LiteralParseError(ValueError):
    """A value literal could not be parsed; carries the offending position."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def bucket_of(score: float) -> ScoreBucket:
    """Classify a test-pass fraction into its study bucket.

    Low is strictly below 0.20, Mid is the closed band [0.40, 0.60], High is
    the open band (0.80, 1.0), a perfect score gets its own bucket, and the
    two uncovered gaps fall into Other.
    """
    if not 0.0 <= score <= 1.0:
        raise DomainError(f"score must be within [0, 1], got {score}")
    if score == 1.0:
        return ScoreBucket.PERFECT
    if score < 0.20:
        return ScoreBucket.LOW
    if 0.40 <= score <= 0.60:
        return ScoreBucket.MID
    if score > 0.80:
        return ScoreBucket.HIGH
    return ScoreBucket.OTHER


_INT_RE = re.compile(r"[+-]?\d+")

_TEXT_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
_TEXT_ESCAPES_INV = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def parse_value_literal(text: str, value_type: ValueType) -> Value:
    """Parse one literal of the given type.

    Raises LiteralParseError naming the offending position on malformed
    input; extra non-whitespace after the literal is also an error.
    """
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    if not stripped:
        raise LiteralParseError("empty literal", offset)

    if value_type is ValueType.INTEGER:
        m = _INT_RE.fullmatch(stripped)
        if m is None:
            raise LiteralParseError(f"invalid integer literal {stripped!r}", offset)
        return int(stripped)

    if value_type is ValueType.BOOLEAN:
        if stripped == "true":
            return True
        if stripped == "false":
            return False
        raise LiteralParseError(f"invalid boolean literal {stripped!r}", offset)

    if value_type is ValueType.TEXT:
        return _parse_text(text, offset)

    if value_type is ValueType.INTEGER_ARRAY:
        return _parse_int_array(text, offset)

    raise LiteralParseError(f"unsupported value type {value_type}", offset)


def _parse_text(text: str, offset: int) -> str:
    stripped = text.strip()
    if not stripped.startswith('"'):
        raise LiteralParseError("text literal must start with '\"'", offset)
    out: list[str] = []
    i = 1
    while i < len(stripped):
        ch = stripped[i]
        if ch == "\\":
            if i + 1 >= len(stripped):
                raise LiteralParseError("dangling escape", offset + i)
            esc = stripped[i + 1]
            if esc not in _TEXT_ESCAPES:
                raise LiteralParseError(f"unknown escape '\\{esc}'", offset + i)
            out.append(_TEXT_ESCAPES[esc])
            i += 2
        elif ch == '"':
            if stripped[i + 1 :].strip():
                raise LiteralParseError("trailing content after text literal", offset + i + 1)
            return "".join(out)
        else:
            out.append(ch)
            i += 1
    raise LiteralParseError("unterminated text literal", offset + len(stripped))


def _parse_int_array(text: str, offset: int) -> tuple[int, ...]:
    stripped = text.strip()
    if not stripped.startswith("["):
        raise LiteralParseError("array literal must start with '['", offset)
    if not stripped.endswith("]"):
        raise LiteralParseError("array literal must end with ']'", offset + len(stripped))
    body = stripped[1:-1].strip()
    if not body:
        return ()
    items: list[int] = []
    pos = 1
    for part in body.split(","):
        cell = part.strip()
        m = _INT_RE.fullmatch(cell)
        if m is None:
            raise LiteralParseError(f"invalid array element {cell!r}", offset + pos)
        items.append(int(cell))
        pos += len(part) + 1
    return tuple(items)


def render_value(value: Value) -> str:
    """Render a value as its canonical literal; inverse of parse_value_literal."""
    # bool must be tested before int: bool is an int subclass in Python.
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        escaped = "".join(_TEXT_ESCAPES_INV.get(ch, ch) for ch in value)
        return f'"{escaped}"'
    if isinstance(value, tuple):
        return "[" + ", ".join(str(v) for v in value) + "]"
    raise TypeError(f"not a renderable value: {value!r}")


def type_of_value(value: Value) -> ValueType:
    if isinstance(value, bool):
        return ValueType.BOOLEAN
    if isinstance(value, int):
        return ValueType.INTEGER
    if isinstance(value, str):
        return ValueType.TEXT
    if isinstance(value, tuple):
        return ValueType.INTEGER_ARRAY
    raise TypeError(f"not a value: {value!r}")


@dataclass(frozen=True)
class Parameter:
    name: str
    value_type: ValueType


@dataclass(frozen=True)
class ParameterSignature:
    parameters: tuple[Parameter, ...]
    return_type: ValueType

    def __post_init__(self) -> None:
        if not self.parameters:
            raise DomainError("signature needs at least one parameter")
        names = [p.name for p in self.parameters]
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate parameter names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.parameters)

    def type_of(self, name: str) -> ValueType:
        for p in self.parameters:
            if p.name == name:
                return p.value_type
        raise DomainError(f"unknown parameter {name!r}")


@dataclass(frozen=True)
class TestCase:
    arguments: tuple[Value, ...]
    expected: Value

    def check_against(self, signature: ParameterSignature) -> None:
        if len(self.arguments) != len(signature.parameters):
            raise DomainError(
                f"test case has {len(self.arguments)} arguments, "
                f"signature expects {len(signature.parameters)}"
            )
        for arg, param in zip(self.arguments, signature.parameters):
            if type_of_value(arg) is not param.value_type:
                raise DomainError(
                    f"argument {param.name!r} should be {param.value_type.value}, "
                    f"got {type_of_value(arg).value}"
                )
        if type_of_value(self.expected) is not signature.return_type:
            raise DomainError(
                f"expected value should be {signature.return_type.value}, "
                f"got {type_of_value(self.expected).value}"
            )


SUBMISSION_PLACEHOLDER = "{{SUBMISSION}}"


@dataclass(frozen=True)
class InputRange:
    """Optional declared bounds for one parameter, used by range validation."""

    minimum: int | None = None
    maximum: int | None = None
    element_minimum: int | None = None
    element_maximum: int | None = None
    max_length: int | None = None


@dataclass(frozen=True)
class Problem:
    id: str
    title: str
    statement: str
    signature: ParameterSignature
    driver_template: str
    tests: tuple[TestCase, ...]
    reference_solution: str | None = None
    input_ranges: dict[str, InputRange] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.tests:
            raise DomainError(f"problem {self.id!r} has no tests")
        count = self.driver_template.count(SUBMISSION_PLACEHOLDER)
        if count != 1:
            raise DomainError(
                f"driver template of {self.id!r} must contain "
                f"{SUBMISSION_PLACEHOLDER} exactly once, found {count}"
            )
        for test in self.tests:
            test.check_against(self.signature)


@dataclass(frozen=True)
class Submission:
    id: str
    student_id: str
    problem_id: str
    code: str
    timestamp: datetime

    def non_blank_lines(self) -> list[str]:
        return [line for line in self.code.splitlines() if line.strip()]
