"""Self-contained execution toolchain for the intro-Java subset.

Student submissions in this platform are single-method Java programs using
ints, booleans, Strings, int arrays, loops, and conditionals. This package
lexes, parses, and interprets that subset directly so grading works on hosts
without a JDK. Drivers written against it are plain Java and also compile
under javac, so a real JDK toolchain can be swapped in via configuration.
"""

from .errors import JavaCompileError, JavaRuntimeError
from .parser import parse_program
from .interp import Interpreter, check_program

__all__ = [
    "JavaCompileError",
    "JavaRuntimeError",
    "parse_program",
    "check_program",
    "Interpreter",
]
