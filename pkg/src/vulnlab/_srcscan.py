"""Line-level scanning of Python source: string spans, comments, continuations.

Shared by comment stripping (snippets) and source normalization (pytok).
The scanner is deliberately lenient: unterminated single-quoted strings are
closed at end of line, bracket depth never goes negative.
"""

from dataclasses import dataclass, field


@dataclass
class LineInfo:
    text: str
    # True when this physical line begins a new logical line (not a bracket or
    # backslash continuation, not the interior of a multi-line string).
    starts_logical: bool
    in_string_at_start: bool
    # Half-open [start, end) spans of string-literal characters in this line.
    string_spans: list = field(default_factory=list)
    comment_start: int = -1  # -1 when the line holds no comment

    @property
    def has_comment(self):
        return self.comment_start >= 0


_OPENERS = "([{"
_CLOSERS = ")]}"


def scan_lines(text):
    """Split ``text`` on '\\n' and annotate each physical line.

    Returns a list of LineInfo, one per physical line (newlines excluded).
    """
    infos = []
    # Cross-line state.
    in_string = False
    quote = ""
    triple = False
    depth = 0
    backslash_cont = False

    for raw in text.split("\n"):
        starts_logical = not (in_string or depth > 0 or backslash_cont)
        info = LineInfo(raw, starts_logical, in_string)
        backslash_cont = False
        spans = info.string_spans
        span_start = 0 if in_string else -1

        i = 0
        n = len(raw)
        while i < n:
            ch = raw[i]
            if in_string:
                if ch == "\\":
                    i += 2  # escapes the next char; at EOL this eats the newline
                    continue
                if ch == quote and (not triple or raw[i : i + 3] == quote * 3):
                    i += 3 if triple else 1
                    spans.append((span_start, i))
                    in_string = False
                    span_start = -1
                    continue
                i += 1
                continue
            if ch == "#":
                info.comment_start = i
                break
            if ch in "\"'":
                span_start = i
                quote = ch
                triple = raw[i : i + 3] == ch * 3
                in_string = True
                i += 3 if triple else 1
                continue
            if ch in _OPENERS:
                depth += 1
            elif ch in _CLOSERS and depth > 0:
                depth -= 1
            elif ch == "\\" and i == n - 1:
                backslash_cont = True
            i += 1

        if in_string:
            spans.append((span_start, n))
            # i > n means a trailing backslash consumed the newline, which
            # legally continues a single-quoted string onto the next line.
            if not triple and i <= n:
                in_string = False  # unterminated: close leniently at EOL
        infos.append(info)
    return infos


def strip_comments(code):
    """Remove '#' comments that lie outside string literals.

    Whole-line comments become empty lines; trailing comments are cut along
    with the whitespace that separated them from the code. Line structure is
    otherwise preserved, including the presence of a final newline.
    """
    out = []
    for info in scan_lines(code):
        if info.has_comment:
            kept = info.text[: info.comment_start].rstrip(" \t")
            out.append(kept)
        else:
            out.append(info.text)
    return "\n".join(out)
