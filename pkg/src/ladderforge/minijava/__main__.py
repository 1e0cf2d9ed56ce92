"""Command entry: `python -m ladderforge.minijava {compile|run} <file.java>`.

`compile` exits 0 when the source parses as the supported subset, 1 with a
diagnostic on stderr otherwise. `run` executes `public static void main`,
wiring stdin through to Scanner; an uncaught exception prints a Java-style
trace line on stderr and exits 1.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .errors import JavaCompileError, JavaRuntimeError
from .interp import Interpreter, check_program
from .parser import parse_program


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2 or argv[0] not in ("compile", "run"):
        print("usage: python -m ladderforge.minijava {compile|run} <file.java>", file=sys.stderr)
        return 2
    command, src_path = argv
    try:
        source = Path(src_path).read_text()
    except OSError as exc:
        print(f"cannot read {src_path}: {exc}", file=sys.stderr)
        return 2

    try:
        program = parse_program(source)
        check_program(program)
    except JavaCompileError as exc:
        print(f"{src_path}:{exc}", file=sys.stderr)
        return 1
    if command == "compile":
        return 0

    stdin_text = sys.stdin.read() if not sys.stdin.closed else ""
    interpreter = Interpreter(program, stdin_text=stdin_text, out=sys.stdout)
    try:
        interpreter.run_main()
    except JavaRuntimeError as exc:
        detail = f": {exc.detail}" if exc.detail else ""
        print(f'Exception in thread "main" {exc.exception_class}{detail}', file=sys.stderr)
        print(f"\tat Main.main({Path(src_path).name})", file=sys.stderr)
        return 1
    except RecursionError:
        print('Exception in thread "main" java.lang.StackOverflowError', file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
