"""Compile and execute submissions against test suites in subprocess sandboxes.

The driver contract: the spliced program reads one rendered argument literal
per stdin line and prints the rendered return value on one line; exit 0 means
a clean run, any other exit is a runtime error. Wall-clock time and output
size are capped per run.
"""

from __future__ import annotations

import shlex
import subprocess
import sys
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .model import (
    Problem,
    SUBMISSION_PLACEHOLDER,
    Submission,
    TestCase,
    Value,
    render_value,
)

DEFAULT_TIME_LIMIT = 5.0  # seconds per test run
DEFAULT_OUTPUT_LIMIT = 64 * 1024  # bytes


class EnvironmentError_(RuntimeError):
    """The toolchain itself is unavailable or broken (not a submission fault)."""


class RunStatus(Enum):
    OUTPUT = "output"
    RUNTIME_ERROR = "runtime-error"
    TIMEOUT = "timeout"


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    RUNTIME_ERROR = "runtime-error"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class Toolchain:
    name: str
    compile_command: str  # template; tokens {src} {dir} {python}
    run_command: str
    source_extension: str = ".java"
    time_limit: float = DEFAULT_TIME_LIMIT
    output_limit: int = DEFAULT_OUTPUT_LIMIT

    def render(self, template: str, src: Path) -> list[str]:
        mapping = {"src": str(src), "dir": str(src.parent), "python": sys.executable}
        return [part.format(**mapping) for part in shlex.split(template)]


def builtin_toolchains() -> dict[str, Toolchain]:
    """Toolchains shipped with the platform.

    `java` is the default: a bundled interpreter for the intro-Java subset,
    so grading needs no JDK. `jdk` swaps in a real javac/java if the host has
    one. `pyscript` treats sources as Python programs; the test suite uses it
    to exercise runner mechanics with arbitrary behaviors.
    """
    return {
        "java": Toolchain(
            name="java",
            compile_command="{python} -m ladderforge.minijava compile {src}",
            run_command="{python} -m ladderforge.minijava run {src}",
            source_extension=".java",
        ),
        "jdk": Toolchain(
            name="jdk",
            compile_command="javac {src}",
            run_command="java -cp {dir} Main",
            source_extension=".java",
        ),
        "pyscript": Toolchain(
            name="pyscript",
            compile_command="{python} -m py_compile {src}",
            run_command="{python} {src}",
            source_extension=".py",
        ),
    }


def load_toolchains(config_path: Path) -> dict[str, Toolchain]:
    """Read extra toolchains from a JSON config; built-ins stay available."""
    import json

    toolchains = builtin_toolchains()
    raw = json.loads(config_path.read_text())
    for entry in raw.get("toolchains", []):
        tc = Toolchain(
            name=entry["name"],
            compile_command=entry["compileCommand"],
            run_command=entry["runCommand"],
            source_extension=entry.get("sourceExtension", ".java"),
            time_limit=float(entry.get("timeLimitSeconds", DEFAULT_TIME_LIMIT)),
            output_limit=int(entry.get("outputLimitBytes", DEFAULT_OUTPUT_LIMIT)),
        )
        toolchains[tc.name] = tc
    return toolchains


@dataclass(frozen=True)
class RunOutcome:
    status: RunStatus
    stdout: str
    stderr: str
    truncated: bool = False


@dataclass(frozen=True)
class GradeReport:
    submission_id: str
    compiled: bool
    verdicts: tuple[tuple[int, Verdict], ...] = ()
    score: float | None = None
    diagnostics: str = ""

    def passed(self) -> int:
        return sum(1 for _, v in self.verdicts if v is Verdict.PASS)


RUNTIME_ERROR_MARKER = "<runtime-error>"
TIMEOUT_MARKER = "<timeout>"


def outcome_text(outcome: RunOutcome) -> str:
    """Rendered output used for comparisons: stdout, or an error marker."""
    if outcome.status is RunStatus.OUTPUT:
        return outcome.stdout.strip()
    if outcome.status is RunStatus.TIMEOUT:
        return TIMEOUT_MARKER
    return RUNTIME_ERROR_MARKER


def splice(problem: Problem, submission: Submission) -> str:
    return problem.driver_template.replace(SUBMISSION_PLACEHOLDER, submission.code)


class Workspace:
    """Temp directory holding one spliced program."""

    def __init__(self, source: str, extension: str):
        self._dir = tempfile.TemporaryDirectory(prefix="ladderforge-run-")
        self.src = Path(self._dir.name) / f"Main{extension}"
        self.src.write_text(source)

    def cleanup(self) -> None:
        self._dir.cleanup()

    def __enter__(self) -> "Workspace":
        return self

    def __exit__(self, *exc) -> None:
        self.cleanup()


def _drain(stream, limit: int, chunks: list[bytes], flag: dict) -> None:
    # Keeps reading past the cap (discarding) so the child never blocks on a
    # full pipe; only bytes actually dropped set the truncated flag.
    remaining = limit
    while True:
        chunk = stream.read(4096)
        if not chunk:
            return
        if remaining >= len(chunk):
            chunks.append(chunk)
            remaining -= len(chunk)
        elif remaining > 0:
            chunks.append(chunk[:remaining])
            remaining = 0
            flag["truncated"] = True
        else:
            flag["truncated"] = True


def _execute(command: list[str], stdin_text: str, time_limit: float, output_limit: int) -> tuple[int | None, str, str, bool]:
    """Run a command; returns (returncode or None on timeout, stdout, stderr, truncated)."""
    try:
        proc = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
    except FileNotFoundError as exc:
        raise EnvironmentError_(f"toolchain executable not found: {command[0]}") from exc

    out_chunks: list[bytes] = []
    err_chunks: list[bytes] = []
    flag = {"truncated": False}
    readers = [
        threading.Thread(target=_drain, args=(proc.stdout, output_limit, out_chunks, flag)),
        threading.Thread(target=_drain, args=(proc.stderr, output_limit, err_chunks, flag)),
    ]
    for reader in readers:
        reader.start()
    timed_out = False
    try:
        proc.stdin.write(stdin_text.encode())
        proc.stdin.close()
    except BrokenPipeError:
        pass
    try:
        proc.wait(timeout=time_limit)
    except subprocess.TimeoutExpired:
        timed_out = True
        proc.kill()
        proc.wait()
    for reader in readers:
        reader.join()
    stdout = b"".join(out_chunks).decode(errors="replace")
    stderr = b"".join(err_chunks).decode(errors="replace")
    return (None if timed_out else proc.returncode), stdout, stderr, flag["truncated"]


def compile_in_workspace(workspace: Workspace, toolchain: Toolchain) -> tuple[bool, str]:
    command = toolchain.render(toolchain.compile_command, workspace.src)
    code, stdout, stderr, _ = _execute(command, "", max(toolchain.time_limit, 20.0), toolchain.output_limit)
    if code is None:
        raise EnvironmentError_(f"compiler timed out: {' '.join(command)}")
    return code == 0, (stderr or stdout)


def compile_check(submission: Submission, problem: Problem, toolchain: Toolchain) -> bool:
    """True iff the spliced program compiles cleanly under the toolchain."""
    with Workspace(splice(problem, submission), toolchain.source_extension) as ws:
        ok, _ = compile_in_workspace(ws, toolchain)
        return ok


def run_in_workspace(
    workspace: Workspace, arguments: tuple[Value, ...] | list[Value], toolchain: Toolchain
) -> RunOutcome:
    stdin_text = "".join(render_value(arg) + "\n" for arg in arguments)
    command = toolchain.render(toolchain.run_command, workspace.src)
    code, stdout, stderr, truncated = _execute(
        command, stdin_text, toolchain.time_limit, toolchain.output_limit
    )
    if code is None:
        return RunOutcome(RunStatus.TIMEOUT, stdout, stderr, truncated)
    if code != 0:
        return RunOutcome(RunStatus.RUNTIME_ERROR, stdout, stderr, truncated)
    return RunOutcome(RunStatus.OUTPUT, stdout, stderr, truncated)


def run_single(
    submission: Submission,
    problem: Problem,
    arguments: tuple[Value, ...] | list[Value],
    toolchain: Toolchain,
) -> RunOutcome:
    """Execute the submission once on the given arguments."""
    if len(arguments) != len(problem.signature.parameters):
        raise ValueError(
            f"expected {len(problem.signature.parameters)} arguments, got {len(arguments)}"
        )
    with Workspace(splice(problem, submission), toolchain.source_extension) as ws:
        return run_in_workspace(ws, arguments, toolchain)


def run_source(
    code: str, problem: Problem, arguments: tuple[Value, ...] | list[Value], toolchain: Toolchain
) -> RunOutcome:
    """Like run_single but for bare source text (reference solutions)."""
    source = problem.driver_template.replace(SUBMISSION_PLACEHOLDER, code)
    with Workspace(source, toolchain.source_extension) as ws:
        return run_in_workspace(ws, arguments, toolchain)


def _judge(outcome: RunOutcome, test: TestCase) -> Verdict:
    if outcome.status is RunStatus.TIMEOUT:
        return Verdict.TIMEOUT
    if outcome.status is RunStatus.RUNTIME_ERROR:
        return Verdict.RUNTIME_ERROR
    actual = outcome.stdout.strip()
    expected = render_value(test.expected).strip()
    return Verdict.PASS if actual == expected else Verdict.FAIL


def grade(
    submission: Submission,
    problem: Problem,
    toolchain: Toolchain,
    max_workers: int = 4,
) -> GradeReport:
    """Compile once, run every test; verdict order is stable by test index."""
    with Workspace(splice(problem, submission), toolchain.source_extension) as ws:
        compiled, diagnostics = compile_in_workspace(ws, toolchain)
        if not compiled:
            return GradeReport(submission.id, compiled=False, diagnostics=diagnostics.strip())

        def run_test(indexed: tuple[int, TestCase]) -> tuple[int, Verdict]:
            index, test = indexed
            outcome = run_in_workspace(ws, test.arguments, toolchain)
            return index, _judge(outcome, test)

        workers = max(1, min(max_workers, len(problem.tests)))
        if workers == 1:
            results = [run_test(item) for item in enumerate(problem.tests)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_test, enumerate(problem.tests)))
        results.sort(key=lambda pair: pair[0])
        score = sum(1 for _, v in results if v is Verdict.PASS) / len(problem.tests)
        return GradeReport(
            submission.id,
            compiled=True,
            verdicts=tuple(results),
            score=score,
        )
