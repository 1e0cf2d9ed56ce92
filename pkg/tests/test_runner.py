from dataclasses import replace
from datetime import datetime, timezone

import pytest

from ladderforge.model import (
    Parameter,
    ParameterSignature,
    Problem,
    Submission,
    TestCase as Case,
    ValueType,
)
from ladderforge.runner import (
    EnvironmentError_,
    RunStatus,
    Verdict,
    builtin_toolchains,
    compile_check,
    grade,
    run_single,
)

SIG_INT2 = ParameterSignature(
    (Parameter("a", ValueType.INTEGER), Parameter("b", ValueType.INTEGER)),
    ValueType.INTEGER,
)

# Python driver used to exercise runner mechanics with arbitrary behaviors.
PY_DRIVER = """\
import sys

{{SUBMISSION}}

lines = sys.stdin.read().splitlines()
print(solve(int(lines[0]), int(lines[1])))
"""


def py_problem(tests: list[Case]) -> Problem:
    return Problem(
        id="pyprob",
        title="py",
        statement="adds",
        signature=SIG_INT2,
        driver_template=PY_DRIVER,
        tests=tuple(tests),
        reference_solution="def solve(a, b):\n    return a + b\n",
    )


def submission(code: str) -> Submission:
    return Submission("sub", "st", "pyprob", code, datetime.now(timezone.utc))


@pytest.fixture(scope="module")
def pyscript():
    return builtin_toolchains()["pyscript"]


class TestPyscriptMechanics:
    def test_output_run(self, pyscript):
        problem = py_problem([Case((1, 2), 3)])
        outcome = run_single(submission("def solve(a, b):\n    return a + b\n"), problem, (1, 2), pyscript)
        assert outcome.status is RunStatus.OUTPUT
        assert outcome.stdout.strip() == "3"

    def test_runtime_error(self, pyscript):
        problem = py_problem([Case((1, 2), 3)])
        outcome = run_single(
            submission("def solve(a, b):\n    raise ValueError('boom')\n"),
            problem,
            (1, 2),
            pyscript,
        )
        assert outcome.status is RunStatus.RUNTIME_ERROR
        assert "boom" in outcome.stderr

    def test_timeout(self, pyscript):
        fast = replace(pyscript, time_limit=1.0)
        problem = py_problem([Case((1, 2), 3)])
        outcome = run_single(
            submission("def solve(a, b):\n    while True:\n        pass\n"),
            problem,
            (1, 2),
            fast,
        )
        assert outcome.status is RunStatus.TIMEOUT

    def test_output_flood_is_truncated_and_fails(self, pyscript):
        capped = replace(pyscript, output_limit=1024)
        problem = py_problem([Case((1, 2), 3)])
        flood = submission(
            "def solve(a, b):\n    print('x' * 100000)\n    return a + b\n"
        )
        outcome = run_single(flood, problem, (1, 2), capped)
        assert outcome.truncated
        assert len(outcome.stdout.encode()) <= 1024
        report = grade(flood, problem, capped)
        assert report.verdicts[0][1] is Verdict.FAIL  # truncated output never passes

    def test_compile_gate(self, pyscript):
        problem = py_problem([Case((1, 2), 3)])
        assert compile_check(submission("def solve(a, b):\n    return a\n"), problem, pyscript)
        assert not compile_check(submission("def solve(a, b:\n"), problem, pyscript)

    def test_missing_toolchain_is_environment_error(self, pyscript):
        broken = replace(pyscript, compile_command="definitely-not-a-binary {src}")
        problem = py_problem([Case((1, 2), 3)])
        with pytest.raises(EnvironmentError_):
            compile_check(submission("def solve(a, b):\n    return a\n"), problem, broken)

    def test_grade_counts_crashes_as_failures(self, pyscript):
        problem = py_problem([Case((1, 2), 3), Case((2, 2), 4), Case((3, 3), 6)])
        crashy = submission(
            "def solve(a, b):\n"
            "    if a == 2:\n"
            "        raise RuntimeError('no')\n"
            "    return a + b\n"
        )
        report = grade(crashy, problem, pyscript)
        assert report.compiled
        assert [v for _, v in report.verdicts] == [
            Verdict.PASS,
            Verdict.RUNTIME_ERROR,
            Verdict.PASS,
        ]
        assert report.score == pytest.approx(2 / 3)

    def test_grade_is_deterministic_and_ordered(self, pyscript):
        problem = py_problem([Case((i, i), 2 * i) for i in range(6)])
        sub = submission("def solve(a, b):\n    return a + b\n")
        first = grade(sub, problem, pyscript, max_workers=4)
        second = grade(sub, problem, pyscript, max_workers=2)
        assert first.verdicts == second.verdicts
        assert [index for index, _ in first.verdicts] == list(range(6))
        assert first.score == 1.0

    def test_non_compiling_submission_reports_diagnostics(self, pyscript):
        problem = py_problem([Case((1, 2), 3)])
        report = grade(submission("def solve(a, b:\n"), problem, pyscript)
        assert not report.compiled
        assert report.score is None
        assert report.verdicts == ()
        assert report.diagnostics


class TestJavaToolchain:
    """The bundled Java-subset toolchain against real fixture bundles."""

    def test_sortasum_returns_sum_on_5_6(self, pipeline_store, java_toolchain):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        outcome = run_single(sub, problem, (5, 6), java_toolchain)
        assert outcome.status is RunStatus.OUTPUT
        assert outcome.stdout.strip() == "11"

    def test_both_iseverywhere_submissions_crash_on_claimed_case(
        self, pipeline_store, java_toolchain
    ):
        problem = pipeline_store.load_problem("iseverywhere")
        for sid in ("iseverywhere-s04", "iseverywhere-s06"):
            sub = pipeline_store.load_submission(sid)
            outcome = run_single(sub, problem, ((1, 2, 1, 3), 1), java_toolchain)
            assert outcome.status is RunStatus.RUNTIME_ERROR
            assert "ArrayIndexOutOfBounds" in outcome.stderr

    def test_unbalanced_brace_fails_compile(self, pipeline_store, java_toolchain):
        problem = pipeline_store.load_problem("sortasum")
        bad = Submission(
            "bad", "st", "sortasum",
            "public int sortaSum(int a, int b) { return a + b;",
            datetime.now(timezone.utc),
        )
        assert not compile_check(bad, problem, java_toolchain)

    def test_argument_arity_checked(self, pipeline_store, java_toolchain):
        problem = pipeline_store.load_problem("sortasum")
        sub = pipeline_store.load_submission("sortasum-s02")
        with pytest.raises(ValueError):
            run_single(sub, problem, (5,), java_toolchain)
