class JavaCompileError(Exception):
    """Source does not lex or parse as the supported Java subset."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}:{self.column}: error: {self.message}"
        return f"error: {self.message}"


class JavaRuntimeError(Exception):
    """Uncaught exception inside the interpreted program."""

    def __init__(self, exception_class: str, message: str = ""):
        super().__init__(f"{exception_class}: {message}" if message else exception_class)
        self.exception_class = exception_class
        self.detail = message
