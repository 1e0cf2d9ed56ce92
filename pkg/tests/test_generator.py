from datetime import datetime, timezone
from pathlib import Path

import pytest

from ladderforge.generator import (
    AuthError,
    ClaimedCaseParseError,
    CompletionResult,
    FeedbackLadder,
    GenerationError,
    GenerationParams,
    LadderParseError,
    MockCompleter,
    OpenAIChatCompleter,
    TransportError,
    build_prompt,
    generate_ladder,
    ladder_from_dict,
    ladder_to_dict,
    parse_claimed_test_case,
    parse_ladder,
    split_top_level_commas,
)
from ladderforge.model import (
    FeedbackLevel,
    Parameter,
    ParameterSignature,
    ValueType,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SIG_AB = ParameterSignature(
    (Parameter("a", ValueType.INTEGER), Parameter("b", ValueType.INTEGER)),
    ValueType.INTEGER,
)
SIG_NUMS_VAL = ParameterSignature(
    (Parameter("nums", ValueType.INTEGER_ARRAY), Parameter("val", ValueType.INTEGER)),
    ValueType.BOOLEAN,
)


def table1_response() -> str:
    return (FIXTURES / "mock_responses" / "sortasum-s02.txt").read_text()


def table3_high_response() -> str:
    return (FIXTURES / "mock_responses" / "iseverywhere-s06.txt").read_text()


class TestBuildPrompt:
    def test_structure_and_determinism(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        prompt = build_prompt(problem, sub)
        assert prompt.startswith(
            "There can be different levels of feedback for a student"
        )
        assert "Level 4:" in prompt
        assert f"Problem: {problem.statement}" in prompt
        assert "Code:\n" + sub.code in prompt
        assert prompt == build_prompt(problem, sub)

    def test_empty_statement_still_well_formed(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        from dataclasses import replace

        blank = replace(problem, statement="")
        prompt = build_prompt(blank, sub)
        assert "Problem: \n" in prompt


class TestParseLadder:
    def test_table1_fixture_parses_to_five_levels(self):
        levels = parse_ladder(table1_response())
        assert len(levels) == 5
        assert levels[FeedbackLevel.L0] == "Incorrect"
        assert "a + b >= 10" in levels[FeedbackLevel.L4]
        assert "Input: a = 5, b = 6" in levels[FeedbackLevel.L1]

    def test_missing_level_names_it(self):
        text = "\n".join(
            f"Level {k}: something about level {k}" for k in (0, 1, 2, 3)
        )
        with pytest.raises(LadderParseError) as err:
            parse_ladder(text)
        assert err.value.missing_levels == [FeedbackLevel.L4]
        assert "Level 4" in str(err.value)

    @pytest.mark.parametrize(
        "heading",
        ["*Level 2:*", "**Level 2**:", "## Level 2", "_level 2_ -", "LEVEL 2:"],
    )
    def test_emphasis_and_case_tolerated(self, heading):
        text = (
            "Level 0: verdict\nLevel 1: case\n"
            f"{heading}\nthe hint body\n"
            "Level 3: location\nLevel 4: edit"
        )
        levels = parse_ladder(text)
        assert levels[FeedbackLevel.L2] == "the hint body"

    def test_section_bodies_are_trimmed_identity(self):
        bodies = {0: "Incorrect", 1: "Input: x", 2: "why", 3: "where", 4: "how"}
        text = "".join(f"Level {k}:\n{body}\n\n" for k, body in bodies.items())
        levels = parse_ladder(text)
        for k, body in bodies.items():
            assert levels[FeedbackLevel(k)] == body

    def test_unlabeled_prose_fails(self):
        with pytest.raises(LadderParseError):
            parse_ladder("The code is wrong in several ways, fix the loop bound.")


class TestClaimedTestCase:
    def test_table1_case(self):
        levels = parse_ladder(table1_response())
        claim = parse_claimed_test_case(levels[FeedbackLevel.L1], SIG_AB)
        assert claim.bindings == {"a": 5, "b": 6}
        assert claim.expected_text == "20"
        assert claim.claimed_output_text == "11"

    def test_table3_case_with_array_binding(self):
        levels = parse_ladder(table3_high_response())
        claim = parse_claimed_test_case(levels[FeedbackLevel.L1], SIG_NUMS_VAL)
        assert claim.bindings == {"nums": (1, 2, 1, 3), "val": 1}
        assert claim.expected_text == "true"
        assert claim.claimed_output_text == "false"

    def test_unknown_parameter_rejected(self):
        text = "Input: x = 5\nExpected Output: 1\nYour Output: 2"
        with pytest.raises(ClaimedCaseParseError, match="unknown parameter"):
            parse_claimed_test_case(text, SIG_AB)

    def test_missing_label_rejected(self):
        text = "Input: a = 5, b = 6\nYour Output: 2"
        with pytest.raises(ClaimedCaseParseError, match="Expected Output"):
            parse_claimed_test_case(text, SIG_AB)

    def test_unbound_parameter_rejected(self):
        text = "Input: a = 5\nExpected Output: 1\nYour Output: 2"
        with pytest.raises(ClaimedCaseParseError, match="unbound"):
            parse_claimed_test_case(text, SIG_AB)

    def test_top_level_comma_split_respects_brackets(self):
        parts = split_top_level_commas("nums = [1, 2], val = 1")
        assert [p.strip() for p in parts] == ["nums = [1, 2]", "val = 1"]
        parts = split_top_level_commas('s = "a,b", n = 2')
        assert [p.strip() for p in parts] == ['s = "a,b"', "n = 2"]

    def test_alternate_output_labels(self):
        text = "Input: a = 1, b = 2\nExpected Output: 3\nCode Output: 9"
        claim = parse_claimed_test_case(text, SIG_AB)
        assert claim.claimed_output_text == "9"


class RecordingCompleter:
    def __init__(self, responses: list[str]):
        self.responses = list(responses)
        self.prompts: list[str] = []

    def complete(self, prompt, params, submission_id=None):
        self.prompts.append(prompt)
        return CompletionResult(self.responses.pop(0))


class TestGenerateLadder:
    def test_mock_completer_round_trip(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        ladder = generate_ladder(
            problem, sub, GenerationParams(), MockCompleter(FIXTURES / "mock_responses"),
            score=0.5,
        )
        assert "a + b >= 10" in ladder.level_text(FeedbackLevel.L4)
        assert ladder.raw_response == table1_response()
        restored = ladder_from_dict(ladder_to_dict(ladder))
        assert restored == ladder

    def test_perfect_score_is_a_precondition_error(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        with pytest.raises(GenerationError, match="perfect"):
            generate_ladder(
                problem, sub, GenerationParams(),
                MockCompleter(FIXTURES / "mock_responses"), score=1.0,
            )

    def test_repair_retry_appends_format_reminder(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        completer = RecordingCompleter(["no headings here", table1_response()])
        ladder = generate_ladder(problem, sub, GenerationParams(), completer, score=0.5)
        assert len(completer.prompts) == 2
        assert "Label each level exactly" in completer.prompts[1]
        assert ladder.levels[FeedbackLevel.L0] == "Incorrect"

    def test_double_parse_failure_propagates_with_raw_response(self, pipeline_store):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        completer = RecordingCompleter(["still prose", "more prose"])
        with pytest.raises(LadderParseError) as err:
            generate_ladder(problem, sub, GenerationParams(), completer, score=0.5)
        assert err.value.raw_response == "more prose"

    def test_partial_ladder_never_constructs(self):
        with pytest.raises(ValueError):
            FeedbackLadder(
                submission_id="x",
                levels={FeedbackLevel.L0: "Incorrect"},
                raw_response="",
                prompt="",
                params=GenerationParams(),
                created_at=datetime.now(timezone.utc),
            )


class TestCompleters:
    def test_mock_requires_known_submission(self):
        completer = MockCompleter(FIXTURES / "mock_responses")
        with pytest.raises(GenerationError, match="no mock response"):
            completer.complete("p", GenerationParams(), submission_id="nope")

    def test_missing_credential_is_auth_error_before_any_request(self, monkeypatch):
        monkeypatch.delenv("LADDERFORGE_API_KEY", raising=False)
        client = OpenAIChatCompleter()
        with pytest.raises(AuthError):
            client.complete("p", GenerationParams())

    def test_retry_budget_exhaustion_is_transport_error(self, monkeypatch):
        calls = {"n": 0}

        class FakeResponse:
            status_code = 429

            def raise_for_status(self):
                raise RuntimeError("429 Too Many Requests")

            def json(self):
                return {}

        def fake_post(*args, **kwargs):
            calls["n"] += 1
            return FakeResponse()

        import httpx

        monkeypatch.setattr(httpx, "post", fake_post)
        monkeypatch.setattr("time.sleep", lambda seconds: None)
        client = OpenAIChatCompleter(api_key="k")
        with pytest.raises(TransportError):
            client.complete("p", GenerationParams(max_retries=1))
        assert calls["n"] == 2  # initial try + one retry

    def test_truncation_flag_from_finish_reason(self, monkeypatch):
        class FakeResponse:
            status_code = 200

            def raise_for_status(self):
                pass

            def json(self):
                return {
                    "choices": [
                        {"message": {"content": "Level 0: x"}, "finish_reason": "length"}
                    ]
                }

        import httpx

        monkeypatch.setattr(httpx, "post", lambda *a, **k: FakeResponse())
        client = OpenAIChatCompleter(api_key="k")
        result = client.complete("p", GenerationParams())
        assert result.truncated

    def test_generation_params_validate(self):
        with pytest.raises(ValueError):
            GenerationParams(temperature=-1)
        with pytest.raises(ValueError):
            GenerationParams(max_tokens=0)
