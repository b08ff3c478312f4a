"""Unified diff parsing and hunk application.

Understands plain ``diff -u`` output as well as git-style diffs
(``diff --git`` / ``index`` header lines are skipped, ``a/`` and ``b/``
path prefixes are stripped). Only hunks touching ``.py`` files are kept.
"""

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import BlockExtractionError, DiffParseError


class LineKind(Enum):
    CONTEXT = "context"
    REMOVED = "removed"
    ADDED = "added"


@dataclass(frozen=True)
class HunkLine:
    kind: LineKind
    text: str


@dataclass
class DiffHunk:
    old_path: str
    new_path: str
    old_start: int
    old_count: int
    new_start: int
    new_count: int
    lines: list = field(default_factory=list)

    def old_line_numbers(self, kind):
        """1-based old-file line numbers of lines with the given kind."""
        nums = []
        pos = self.old_start
        for ln in self.lines:
            if ln.kind == LineKind.ADDED:
                continue
            if ln.kind == kind:
                nums.append(pos)
            pos += 1
        return nums

    def new_line_numbers(self, kind):
        """1-based new-file line numbers of lines with the given kind."""
        nums = []
        pos = self.new_start
        for ln in self.lines:
            if ln.kind == LineKind.REMOVED:
                continue
            if ln.kind == kind:
                nums.append(pos)
            pos += 1
        return nums


_HUNK_RE = re.compile(
    r"^@@ -(?P<old_start>\d+)(?:,(?P<old_count>\d+))?"
    r" \+(?P<new_start>\d+)(?:,(?P<new_count>\d+))? @@"
)


def _clean_path(raw):
    # "--- a/pkg/mod.py<TAB>timestamp" -> "pkg/mod.py"
    path = raw.split("\t")[0].strip()
    if path.startswith(("a/", "b/")):
        path = path[2:]
    return path


def parse_unified_diff(text):
    """Parse unified diff text into a list of DiffHunk.

    Hunks keep input order and exact line texts. File sections whose
    effective path does not end in ".py" are dropped entirely. Raises
    DiffParseError (with the 1-based line number) on malformed hunk
    headers or on hunk bodies that contradict the declared counts.
    """
    hunks = []
    old_path = new_path = None
    lines = text.split("\n")
    i = 0
    n = len(lines)
    while i < n:
        line = lines[i]
        if line.startswith("--- "):
            old_path = _clean_path(line[4:])
            if i + 1 < n and lines[i + 1].startswith("+++ "):
                new_path = _clean_path(lines[i + 1][4:])
                i += 2
                continue
            raise DiffParseError("'---' header without matching '+++'", i + 1)
        if line.startswith("@@"):
            m = _HUNK_RE.match(line)
            if not m:
                raise DiffParseError(f"malformed hunk header {line!r}", i + 1)
            if old_path is None or new_path is None:
                raise DiffParseError("hunk before any file header", i + 1)
            hunk = DiffHunk(
                old_path,
                new_path,
                int(m.group("old_start")),
                int(m.group("old_count") or "1"),
                int(m.group("new_start")),
                int(m.group("new_count") or "1"),
            )
            old_count = hunk.old_count
            new_count = hunk.new_count
            i += 1
            seen_old = seen_new = 0
            while i < n and (seen_old < old_count or seen_new < new_count):
                body = lines[i]
                if body.startswith("\\"):  # "\ No newline at end of file"
                    i += 1
                    continue
                if body.startswith("-"):
                    hunk.lines.append(HunkLine(LineKind.REMOVED, body[1:]))
                    seen_old += 1
                elif body.startswith("+"):
                    hunk.lines.append(HunkLine(LineKind.ADDED, body[1:]))
                    seen_new += 1
                elif body.startswith(" ") or body == "":
                    hunk.lines.append(HunkLine(LineKind.CONTEXT, body[1:]))
                    seen_old += 1
                    seen_new += 1
                else:
                    raise DiffParseError(f"unexpected hunk body line {body!r}", i + 1)
                i += 1
            if seen_old != old_count or seen_new != new_count:
                raise DiffParseError(
                    f"hunk body does not match declared counts "
                    f"(old {seen_old}/{old_count}, new {seen_new}/{new_count})",
                    i,
                )
            effective = new_path if new_path != "/dev/null" else old_path
            if effective.endswith(".py"):
                hunks.append(hunk)
            continue
        i += 1
    return hunks


def apply_hunks(pre_text, hunks):
    """Apply hunks to the pre-image text, reconstructing the post-image.

    Used to validate that parsed hunks are consistent with the file pair
    they were computed from. Raises BlockExtractionError on out-of-range
    or mismatching context.
    """
    pre_lines = pre_text.split("\n")
    if pre_lines and pre_lines[-1] == "":
        pre_lines.pop()
    out = []
    cursor = 0  # 0-based index into pre_lines
    for hunk in sorted(hunks, key=lambda h: h.old_start):
        # old_start is 1-based; for old_count == 0 the hunk inserts AFTER old_start.
        target = hunk.old_start - 1 if hunk.old_count > 0 else hunk.old_start
        if target < cursor or target > len(pre_lines):
            raise BlockExtractionError(
                f"hunk at old line {hunk.old_start} out of range or overlapping"
            )
        out.extend(pre_lines[cursor:target])
        cursor = target
        for ln in hunk.lines:
            if ln.kind == LineKind.CONTEXT:
                if cursor >= len(pre_lines) or pre_lines[cursor] != ln.text:
                    raise BlockExtractionError(
                        f"context mismatch at old line {cursor + 1}"
                    )
                out.append(ln.text)
                cursor += 1
            elif ln.kind == LineKind.REMOVED:
                if cursor >= len(pre_lines) or pre_lines[cursor] != ln.text:
                    raise BlockExtractionError(
                        f"removed-line mismatch at old line {cursor + 1}"
                    )
                cursor += 1
            else:
                out.append(ln.text)
    out.extend(pre_lines[cursor:])
    return "\n".join(out) + "\n" if out else ""
