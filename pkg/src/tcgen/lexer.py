"""Tolerant lexer for a Java-like token stream.

Produces identifiers, keywords, literals, punctuation, and comments with
source offsets. It never raises: the downstream invocation extractor must be
total on arbitrary text (including non-compiling LLM output), so unterminated
strings stop at end of line, unterminated comments at end of file, and a
quote that cannot open a valid char literal degrades to punctuation.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
IDENT_PART = IDENT_START | frozenset("0123456789")
_ESCAPES = {"n": "\n", "t": "\t", "b": "\b", "r": "\r", "f": "\f", "0": "\0",
            "'": "'", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | string | char | number | punct | comment
    value: str  # decoded value for strings, raw text otherwise
    start: int  # offset into the source text
    end: int  # offset one past the last character
    line: int  # 1-based line of `start`


def _decode_string(raw: str) -> str:
    """Decode the interior of a string literal; lenient on bad escapes."""
    out = []
    i = 0
    while i < len(raw):
        c = raw[i]
        if c == "\\" and i + 1 < len(raw):
            nxt = raw[i + 1]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
                continue
            if nxt == "u":
                j = i + 2
                while j < len(raw) and raw[j] == "u":
                    j += 1
                hexpart = raw[j : j + 4]
                if len(hexpart) == 4 and all(h in "0123456789abcdefABCDEF" for h in hexpart):
                    out.append(chr(int(hexpart, 16)))
                    i = j + 4
                    continue
            out.append(nxt)
            i += 2
            continue
        out.append(c)
        i += 1
    return "".join(out)


def _char_literal_end(text: str, start: int) -> int:
    """Return the offset past a char literal opening at `start`, or -1.

    Accepts 'x', escape forms, and '\\uXXXX'; anything else (an apostrophe in
    prose, say) is not a char literal.
    """
    i = start + 1
    n = len(text)
    if i >= n:
        return -1
    if text[i] == "\\":
        i += 1
        if i < n and text[i] == "u":
            while i < n and text[i] == "u":
                i += 1
            if all(i + k < n and text[i + k] in "0123456789abcdefABCDEF" for k in range(4)):
                i += 4
            else:
                return -1
        elif i < n and text[i] in "01234567":
            while i < n and text[i] in "01234567" and i - start <= 4:
                i += 1
        elif i < n:
            i += 1
        else:
            return -1
    elif text[i] not in ("'", "\n"):
        i += 1
    else:
        return -1
    if i < n and text[i] == "'":
        return i + 1
    return -1


def lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1

    def emit(kind: str, start: int, end: int, value: str | None = None) -> None:
        tokens.append(Token(kind, text[start:end] if value is None else value, start, end, line))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "/":
            j = text.find("\n", i)
            j = n if j == -1 else j
            emit("comment", i, j)
            i = j
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            j = n if j == -1 else j + 2
            emit("comment", i, j)
            line += text.count("\n", i, j)
            i = j
            continue
        if text.startswith('"""', i):
            # text block: runs to the next unescaped triple quote
            j = text.find('"""', i + 3)
            j = n if j == -1 else j + 3
            emit("string", i, j, _decode_string(text[i + 3 : max(i + 3, j - 3)]))
            line += text.count("\n", i, j)
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] not in ('"', "\n"):
                j += 2 if text[j] == "\\" else 1
            end = j + 1 if j < n and text[j] == '"' else min(j, n)
            emit("string", i, end, _decode_string(text[i + 1 : min(j, n)]))
            i = end
            continue
        if c == "'":
            end = _char_literal_end(text, i)
            if end != -1:
                emit("char", i, end)
                i = end
                continue
            emit("punct", i, i + 1)
            i += 1
            continue
        if c in IDENT_START:
            j = i + 1
            while j < n and text[j] in IDENT_PART:
                j += 1
            word = text[i:j]
            emit("keyword" if word in KEYWORDS else "ident", i, j)
            i = j
            continue
        if c.isdigit():
            j = i + 1
            while j < n and (text[j] in IDENT_PART or text[j] == "."):
                j += 1
            emit("number", i, j)
            i = j
            continue
        emit("punct", i, i + 1)
        i += 1

    return tokens


def structural(tokens: list[Token]) -> list[Token]:
    """Drop comment tokens, keeping everything that shapes the program."""
    return [t for t in tokens if t.kind != "comment"]


def match_brackets(tokens: list[Token]) -> dict[int, int]:
    """Map each opening (, [, { token index to its matching closer.

    Unmatched brackets simply have no entry; callers decide whether that is
    an error (the structural parser) or noise (the invocation extractor).
    """
    pairs: dict[int, int] = {}
    stack: list[tuple[str, int]] = []
    closers = {")": "(", "]": "[", "}": "{"}
    for idx, tok in enumerate(tokens):
        if tok.kind != "punct":
            continue
        if tok.value in "([{":
            stack.append((tok.value, idx))
        elif tok.value in closers:
            want = closers[tok.value]
            # pop past mismatched openers so one stray bracket cannot
            # derail the rest of the file
            while stack and stack[-1][0] != want:
                stack.pop()
            if stack:
                pairs[stack.pop()[1]] = idx
    return pairs
