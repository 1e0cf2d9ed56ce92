from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from ladderforge.model import (
    DomainError,
    LiteralParseError,
    Parameter,
    ParameterSignature,
    Problem,
    ScoreBucket,
    Submission,
    TestCase as Case,
    ValueType,
    bucket_of,
    parse_value_literal,
    render_value,
)

# Boundary table pinned by the bucket definitions.
BUCKET_TABLE = [
    (0.0, ScoreBucket.LOW),
    (0.15, ScoreBucket.LOW),
    (0.1999, ScoreBucket.LOW),
    (0.20, ScoreBucket.OTHER),
    (0.30, ScoreBucket.OTHER),
    (0.40, ScoreBucket.MID),
    (0.50, ScoreBucket.MID),
    (0.60, ScoreBucket.MID),
    (0.61, ScoreBucket.OTHER),
    (0.80, ScoreBucket.OTHER),
    (0.81, ScoreBucket.HIGH),
    (0.99, ScoreBucket.HIGH),
    (1.0, ScoreBucket.PERFECT),
]


@pytest.mark.parametrize("score,bucket", BUCKET_TABLE)
def test_bucket_boundaries(score, bucket):
    assert bucket_of(score) is bucket


@pytest.mark.parametrize("score", [-0.01, 1.01, 2.0])
def test_bucket_rejects_out_of_domain(score):
    with pytest.raises(DomainError):
        bucket_of(score)


@given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_bucket_total_on_unit_interval(score):
    assert bucket_of(score) in ScoreBucket


def test_parse_integer_array():
    assert parse_value_literal("[1, 2, 1, 3]", ValueType.INTEGER_ARRAY) == (1, 2, 1, 3)
    assert parse_value_literal("[1,2,1,3]", ValueType.INTEGER_ARRAY) == (1, 2, 1, 3)
    assert parse_value_literal(" [ 1 , -2 ] ", ValueType.INTEGER_ARRAY) == (1, -2)
    assert parse_value_literal("[]", ValueType.INTEGER_ARRAY) == ()


def test_parse_scalars():
    assert parse_value_literal("5", ValueType.INTEGER) == 5
    assert parse_value_literal("-17", ValueType.INTEGER) == -17
    assert parse_value_literal("true", ValueType.BOOLEAN) is True
    assert parse_value_literal("false", ValueType.BOOLEAN) is False
    assert parse_value_literal('"hi there"', ValueType.TEXT) == "hi there"
    assert parse_value_literal('"a\\"b"', ValueType.TEXT) == 'a"b'


@pytest.mark.parametrize(
    "text,vtype",
    [
        ("5x", ValueType.INTEGER),
        ("", ValueType.INTEGER),
        ("True", ValueType.BOOLEAN),
        ("unquoted", ValueType.TEXT),
        ('"open', ValueType.TEXT),
        ("[1, x]", ValueType.INTEGER_ARRAY),
        ("[1, 2", ValueType.INTEGER_ARRAY),
        ("1, 2]", ValueType.INTEGER_ARRAY),
    ],
)
def test_parse_rejects_malformed(text, vtype):
    with pytest.raises(LiteralParseError) as err:
        parse_value_literal(text, vtype)
    assert "position" in str(err.value)


def test_render_canonical_forms():
    assert render_value(20) == "20"
    assert render_value(True) == "true"
    assert render_value((1, 2)) == "[1, 2]"
    assert render_value("ok") == '"ok"'


values = st.one_of(
    st.integers(min_value=-(2**31), max_value=2**31 - 1),
    st.booleans(),
    st.text(
        alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
        max_size=40,
    ),
    st.tuples().map(lambda _: ()),  # empty array corner
    st.lists(st.integers(min_value=-(10**6), max_value=10**6), max_size=8).map(tuple),
)


@given(values)
def test_value_round_trip(value):
    literal = render_value(value)
    vtype = {
        bool: ValueType.BOOLEAN,
        int: ValueType.INTEGER,
        str: ValueType.TEXT,
        tuple: ValueType.INTEGER_ARRAY,
    }[type(value)]
    assert parse_value_literal(literal, vtype) == value


def _signature() -> ParameterSignature:
    return ParameterSignature(
        (Parameter("a", ValueType.INTEGER), Parameter("b", ValueType.INTEGER)),
        ValueType.INTEGER,
    )


def test_signature_rejects_duplicates_and_empty():
    with pytest.raises(DomainError):
        ParameterSignature(
            (Parameter("a", ValueType.INTEGER), Parameter("a", ValueType.INTEGER)),
            ValueType.INTEGER,
        )
    with pytest.raises(DomainError):
        ParameterSignature((), ValueType.INTEGER)


def test_test_case_arity_and_type_checks():
    signature = _signature()
    Case((1, 2), 3).check_against(signature)
    with pytest.raises(DomainError):
        Case((1,), 3).check_against(signature)
    with pytest.raises(DomainError):
        Case((1, True), 3).check_against(signature)
    with pytest.raises(DomainError):
        Case((1, 2), "3").check_against(signature)


def test_problem_requires_single_placeholder_and_tests():
    signature = _signature()
    tests = (Case((1, 2), 3),)
    with pytest.raises(DomainError):
        Problem("p", "t", "s", signature, "no placeholder", tests)
    with pytest.raises(DomainError):
        Problem("p", "t", "s", signature, "{{SUBMISSION}} {{SUBMISSION}}", tests)
    with pytest.raises(DomainError):
        Problem("p", "t", "s", signature, "{{SUBMISSION}}", ())
    Problem("p", "t", "s", signature, "{{SUBMISSION}}", tests)


def test_submission_non_blank_lines():
    s = Submission("x", "st", "p", "a\n\n  \nb\n", datetime.now(timezone.utc))
    assert s.non_blank_lines() == ["a", "b"]
