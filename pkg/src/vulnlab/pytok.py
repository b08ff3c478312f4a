"""Normalization and lexing of Python source into token streams.

The lexer reproduces standard Python lexical categories on comment-free
input: names, numbers, strings (all prefix/quote forms as single tokens,
f-strings included), operators, and the INDENT/DEDENT/NEWLINE structure
tokens, which carry the canonical texts "<indent>", "<dedent>" and
"<newline>". Keywords are split out of NAME using the Python 3.8 keyword
list, frozen below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum, unique
from typing import NamedTuple

from ._srcscan import scan_lines, strip_comments
from .errors import LexError

log = logging.getLogger(__name__)

# Python 3.8 keyword list, frozen.
KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def
    del elif else except finally for from global if import in is lambda
    nonlocal not or pass raise return while with yield""".split()
)

INDENT_TEXT = "<indent>"
DEDENT_TEXT = "<dedent>"
NEWLINE_TEXT = "<newline>"

STRING_PREFIXES = frozenset(
    ["r", "b", "u", "f", "br", "rb", "fr", "rf"]
)

_OPERATORS_3 = ("**=", "//=", ">>=", "<<=", "...")
_OPERATORS_2 = (
    "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
)
_OPERATORS_1 = "+-*/%@&|^~<>()[]{},:.;="

_TABSIZE = 8  # reference column width used when measuring raw indentation


@unique
class TokenKind(Enum):
    NAME = "name"
    NUMBER = "number"
    STRING = "string"
    OP = "op"
    KEYWORD = "keyword"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    ERRORTOKEN = "errortoken"


class Token(NamedTuple):
    kind: TokenKind
    text: str


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple
    source_id: str = ""

    def texts(self):
        return [t.text for t in self.tokens]

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _indent_width(ws):
    """Column width of a whitespace run, tabs advancing to 8-column stops."""
    col = 0
    for ch in ws:
        if ch == "\t":
            col = (col // _TABSIZE + 1) * _TABSIZE
        elif ch == "\f":
            col = 0
        else:
            col += 1
    return col


def normalize_source(text):
    """Normalize source before lexing.

    CRLF becomes LF, comments are removed (same semantics as
    snippets.strip_comments), tabs outside string literals become spaces,
    the indentation of every block is re-based to a multiple of four
    columns, and the result ends with exactly one newline. Lines inside
    multi-line strings are preserved verbatim. Idempotent.
    """
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    out = []
    # Stack of (observed indent width, assigned level).
    stack = [(0, 0)]
    for info in scan_lines(text):
        line = info.text
        if info.has_comment:
            line = line[: info.comment_start].rstrip(" \t")
        if not info.in_string_at_start and not line.strip():
            out.append("")
            continue
        # Expand tabs, leaving string-literal spans untouched.
        if "\t" in line:
            pieces = []
            prev = 0
            for start, end in info.string_spans:
                start = min(start, len(line))
                end = min(end, len(line))
                pieces.append(line[prev:start].replace("\t", "    "))
                pieces.append(line[start:end])
                prev = end
            pieces.append(line[prev:].replace("\t", "    "))
            expanded = "".join(pieces)
        else:
            expanded = line
        if not info.starts_logical:
            out.append(expanded)
            continue
        # Re-base the leading indentation of this logical line.
        stripped = expanded.lstrip(" \t\f")
        raw_indent = line[: len(line) - len(line.lstrip(" \t\f"))]
        width = _indent_width(raw_indent)
        top_w, top_l = stack[-1]
        if width > top_w:
            level = top_l + 1
            stack.append((width, level))
        elif width == top_w:
            level = top_l
        else:
            while stack[-1][0] > width:
                stack.pop()
            if stack[-1][0] == width:
                level = stack[-1][1]
            else:
                # Inconsistent dedent: treat as a fresh level above the top.
                level = stack[-1][1] + 1
                stack.append((width, level))
        out.append(" " * (4 * level) + stripped)
    return "\n".join(out).rstrip("\n") + "\n"


class _Lexer:
    def __init__(self, text, strict, source_id=""):
        self.text = text
        self.strict = strict
        self.source_id = source_id
        self.pos = 0
        self.paren_depth = 0
        self.indents = [0]
        self.tokens = []

    def _linecol(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        last_nl = self.text.rfind("\n", 0, pos)
        return line, pos - last_nl - 1

    def _fail(self, message, pos):
        line, col = self._linecol(pos)
        raise LexError(message, line, col)

    def _error_resync(self, message, start):
        """Lenient recovery: swallow to end of line as one ERRORTOKEN."""
        if self.strict:
            self._fail(message, start)
        end = self.text.find("\n", start)
        if end == -1:
            end = len(self.text)
        self.tokens.append(Token(TokenKind.ERRORTOKEN, self.text[start:end]))
        self.pos = end

    def _emit(self, kind, text):
        self.tokens.append(Token(kind, text))

    def run(self):
        text = self.text
        n = len(text)
        at_line_start = True
        continuation = False
        while self.pos < n:
            if at_line_start:
                at_line_start = False
                if not continuation and self.paren_depth == 0:
                    if self._handle_line_start():
                        at_line_start = True
                        continue
                continuation = False
            if self.pos >= n:
                break
            ch = text[self.pos]
            if ch == "\n":
                self._emit(TokenKind.NEWLINE, NEWLINE_TEXT)
                self.pos += 1
                at_line_start = True
                continue
            if ch in " \t\f":
                self.pos += 1
                continue
            if ch == "\\":
                if self.pos + 1 < n and text[self.pos + 1] == "\n":
                    self.pos += 2
                    at_line_start = True
                    continuation = True
                    continue
                if self.pos + 1 == n:
                    self.pos += 1
                    continue
                self._error_resync("unexpected character after line continuation", self.pos)
                continue
            if ch == "#":
                end = text.find("\n", self.pos)
                self.pos = end if end != -1 else n
                continue
            if ch in "\"'":
                self._scan_string(self.pos, self.pos)
                continue
            if self._is_name_start(ch):
                self._scan_name()
                continue
            if ch.isdigit() or (ch == "." and self.pos + 1 < n and text[self.pos + 1].isdigit()):
                self._scan_number()
                continue
            if not self._scan_operator():
                self._error_resync(f"unexpected character {ch!r}", self.pos)
        # End of input: every stream finishes with NEWLINE, then any
        # dedents still open.
        if not self.tokens or self.tokens[-1].kind != TokenKind.NEWLINE:
            self._emit(TokenKind.NEWLINE, NEWLINE_TEXT)
        while len(self.indents) > 1:
            self.indents.pop()
            self._emit(TokenKind.DEDENT, DEDENT_TEXT)
        return TokenStream(tuple(self.tokens), self.source_id)

    def _handle_line_start(self):
        """Measure indentation. Returns True when the line was blank."""
        text = self.text
        n = len(text)
        start = self.pos
        i = start
        while i < n and text[i] in " \t\f":
            i += 1
        if i >= n:
            self.pos = i
            return False
        if text[i] == "\n":
            self._emit(TokenKind.NEWLINE, NEWLINE_TEXT)
            self.pos = i + 1
            return True
        if text[i] == "#":
            # Comment-only lines do not take part in indentation.
            end = text.find("\n", i)
            if end == -1:
                self.pos = n
                return False
            self._emit(TokenKind.NEWLINE, NEWLINE_TEXT)
            self.pos = end + 1
            return True
        width = _indent_width(text[start:i])
        if width > self.indents[-1]:
            self.indents.append(width)
            self._emit(TokenKind.INDENT, INDENT_TEXT)
        elif width < self.indents[-1]:
            while self.indents[-1] > width:
                self.indents.pop()
                self._emit(TokenKind.DEDENT, DEDENT_TEXT)
            if self.indents[-1] != width:
                if self.strict:
                    self._fail("unindent does not match any outer level", i)
                # Lenient: adopt the nearest enclosing level.
        self.pos = i
        return False

    @staticmethod
    def _is_name_start(ch):
        return ch == "_" or ch.isalpha() or (ord(ch) > 127 and ch.isidentifier())

    @staticmethod
    def _is_name_continue(ch):
        return ch == "_" or ch.isalnum() or (ord(ch) > 127 and ("a" + ch).isidentifier())

    def _scan_name(self):
        text = self.text
        n = len(text)
        start = self.pos
        i = start + 1
        while i < n and self._is_name_continue(text[i]):
            i += 1
        name = text[start:i]
        if i < n and text[i] in "\"'" and name.casefold() in STRING_PREFIXES:
            self._scan_string(i, start)
            return
        self.pos = i
        kind = TokenKind.KEYWORD if name in KEYWORDS else TokenKind.NAME
        self._emit(kind, name)

    def _scan_string(self, quote_pos, token_start):
        text = self.text
        n = len(text)
        q = text[quote_pos]
        triple = text[quote_pos : quote_pos + 3] == q * 3
        i = quote_pos + (3 if triple else 1)
        while i < n:
            ch = text[i]
            if ch == "\\":
                i += 2
                continue
            if ch == q and (not triple or text[i : i + 3] == q * 3):
                i += 3 if triple else 1
                self._emit(TokenKind.STRING, text[token_start:i])
                self.pos = i
                return
            if ch == "\n" and not triple:
                self._error_resync("unterminated string literal", token_start)
                return
            i += 1
        if self.strict:
            self._fail("unterminated string literal", token_start)
        self._emit(TokenKind.ERRORTOKEN, text[token_start:n])
        self.pos = n

    def _scan_number(self):
        text = self.text
        n = len(text)
        start = self.pos
        i = start

        def _digits(pred):
            nonlocal i
            while i < n and (pred(text[i]) or text[i] == "_"):
                i += 1

        if text[i] == "0" and i + 1 < n and text[i + 1] in "xXbBoO":
            base = text[i + 1].lower()
            i += 2
            if base == "x":
                _digits(lambda c: c in "0123456789abcdefABCDEF")
            else:
                _digits(str.isdigit)
            if i < n and text[i] in "jJ":  # not valid Python; kept leniently
                i += 1
            self.pos = i
            self._emit(TokenKind.NUMBER, text[start:i])
            return
        _digits(str.isdigit)
        if i < n and text[i] == ".":
            i += 1
            _digits(str.isdigit)
        if i < n and text[i] in "eE":
            j = i + 1
            if j < n and text[j] in "+-":
                j += 1
            if j < n and text[j].isdigit():
                i = j
                _digits(str.isdigit)
        if i < n and text[i] in "jJ":
            i += 1
        self.pos = i
        self._emit(TokenKind.NUMBER, text[start:i])

    def _scan_operator(self):
        text = self.text
        three = text[self.pos : self.pos + 3]
        if three in _OPERATORS_3:
            self._emit(TokenKind.OP, three)
            self.pos += 3
            return True
        two = text[self.pos : self.pos + 2]
        if two in _OPERATORS_2:
            self._emit(TokenKind.OP, two)
            self.pos += 2
            return True
        one = text[self.pos]
        if one in _OPERATORS_1:
            if one in "([{":
                self.paren_depth += 1
            elif one in ")]}" and self.paren_depth > 0:
                self.paren_depth -= 1
            self._emit(TokenKind.OP, one)
            self.pos += 1
            return True
        return False


def tokenize(text, strict=False, source_id=""):
    """Lex normalized source into a TokenStream.

    In lenient mode (default) unlexable input becomes an ERRORTOKEN covering
    the rest of the line; strict mode raises LexError with line and column.
    """
    return _Lexer(text, strict, source_id).run()


def build_corpus(source_files, strict=False, source_ids=None):
    """Lex a list of source strings into one TokenStream per file.

    Every file is normalized first. Files that fail strict lexing are
    skipped (with a logged count) unless ``strict`` is set, in which case
    the error propagates.
    """
    streams = []
    skipped = 0
    for idx, source in enumerate(source_files):
        sid = source_ids[idx] if source_ids else str(idx)
        normalized = normalize_source(source)
        try:
            streams.append(tokenize(normalized, strict=True, source_id=sid))
        except LexError:
            if strict:
                raise
            skipped += 1
    if skipped:
        log.warning("build_corpus: skipped %d unlexable file(s)", skipped)
    return streams


def corpus_to_text(streams):
    """Serialize token streams to the corpus text format.

    One line of space-joined token texts per source line group; a blank
    line separates consecutive streams. Only texts are serialized.
    """
    blocks = []
    for stream in streams:
        lines = []
        current = []
        for tok in stream.tokens:
            current.append(tok.text)
            if tok.kind == TokenKind.NEWLINE:
                lines.append(" ".join(current))
                current = []
        if current:
            lines.append(" ".join(current))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def write_corpus(streams, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(corpus_to_text(streams))


def read_corpus_token_lists(path):
    """Read a corpus file back as lists of token texts, one per stream."""
    with open(path, "r", encoding="utf-8") as fh:
        content = fh.read()
    blocks = [b for b in content.split("\n\n") if b.strip()]
    return [b.split() for b in blocks]
