"""Tokenizer for the supported Java subset."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import JavaCompileError

KEYWORDS = {
    "class", "public", "private", "protected", "static", "final", "void",
    "int", "boolean", "char", "long", "if", "else", "for", "while", "do",
    "return", "break", "continue", "new", "true", "false", "null",
    "import", "package", "this",
}

# Longest first so e.g. "<=" wins over "<".
PUNCTUATION = [
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=",
    "(", ")", "{", "}", "[", "]", ";", ",", ".",
    "+", "-", "*", "/", "%", "!", "=", "<", ">", "?", ":",
]

_CHAR_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | int | string | char | punct | eof
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(msg: str) -> JavaCompileError:
        return JavaCompileError(msg, line, col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise error("unterminated block comment")
            skipped = source[i : end + 2]
            line += skipped.count("\n")
            col = len(skipped) - skipped.rfind("\n") if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            text = source[start:i]
            tokens.append(Token("int", text, line, col))
            col += len(text)
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            start = i
            while i < n and (source[i].isalnum() or source[i] in "_$"):
                i += 1
            text = source[start:i]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, col))
            col += len(text)
            continue
        if ch == '"':
            text, consumed = _read_quoted(source, i, '"', error)
            tokens.append(Token("string", text, line, col))
            i += consumed
            col += consumed
            continue
        if ch == "'":
            text, consumed = _read_quoted(source, i, "'", error)
            if len(text) != 1:
                raise error(f"invalid char literal of length {len(text)}")
            tokens.append(Token("char", text, line, col))
            i += consumed
            col += consumed
            continue
        for punct in PUNCTUATION:
            if source.startswith(punct, i):
                tokens.append(Token("punct", punct, line, col))
                i += len(punct)
                col += len(punct)
                break
        else:
            raise error(f"unexpected character {ch!r}")

    tokens.append(Token("eof", "", line, col))
    return tokens


def _read_quoted(source, start, quote, error) -> tuple[str, int]:
    out: list[str] = []
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\\":
            if i + 1 >= n:
                raise error("dangling escape in literal")
            esc = source[i + 1]
            if esc not in _CHAR_ESCAPES:
                raise error(f"unsupported escape '\\{esc}'")
            out.append(_CHAR_ESCAPES[esc])
            i += 2
        elif ch == quote:
            return "".join(out), i + 1 - start
        elif ch == "\n":
            raise error("newline inside literal")
        else:
            out.append(ch)
            i += 1
    raise error("unterminated literal")
