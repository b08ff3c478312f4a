"""Labeled snippet extraction from commit diffs.

The pre-fix side of every changed block is labeled vulnerable (1), the
post-fix side fixed (0). Blocks are enclosing function definitions when
one exists, otherwise the changed lines padded with context.
"""

import hashlib
import json
import logging
from dataclasses import dataclass

from ._srcscan import strip_comments  # noqa: F401  (re-exported; used below too)
from .diffs import LineKind, parse_unified_diff
from .errors import BlockExtractionError
from .mining import RepoRef, VulnCategory

log = logging.getLogger(__name__)

DEFAULT_CONTEXT_RADIUS = 5


@dataclass(frozen=True)
class LabeledSnippet:
    id: str
    repo: RepoRef
    sha: str
    category: VulnCategory
    label: int  # 1 = vulnerable (pre-fix), 0 = fixed (post-fix)
    code: str
    origin: str  # "pre" | "post"


def snippet_id(code, label, category):
    digest = hashlib.sha256(
        f"{label}|{category.value}|{code}".encode("utf-8")
    ).hexdigest()
    return digest


def _split_lines(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _leading_ws(line):
    return len(line) - len(line.lstrip(" \t"))


def _enclosing_function(lines, anchors):
    """Innermost def whose body spans all anchor lines, located by indentation.

    Returns a 1-based inclusive (start, end) line range or None.
    """
    lo, hi = min(anchors), max(anchors)
    for i in range(lo, 0, -1):
        stripped = lines[i - 1].lstrip(" \t")
        if not (stripped.startswith("def ") or stripped.startswith("async def ")):
            continue
        indent = _leading_ws(lines[i - 1])
        end = i
        k = i + 1
        while k <= len(lines):
            if not lines[k - 1].strip():
                k += 1
                continue
            if _leading_ws(lines[k - 1]) <= indent:
                break
            end = k
            k += 1
        if end >= hi:
            return i, end
    return None


def _merge_ranges(ranges):
    merged = []
    for start, end in sorted(ranges):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def _side_anchors(hunk, side):
    if side == "pre":
        anchors = hunk.old_line_numbers(LineKind.REMOVED)
        if anchors:
            return anchors
        if hunk.old_count > 0:
            return list(range(hunk.old_start, hunk.old_start + hunk.old_count))
        return [max(1, hunk.old_start)]
    anchors = hunk.new_line_numbers(LineKind.ADDED)
    if anchors:
        return anchors
    if hunk.new_count > 0:
        return list(range(hunk.new_start, hunk.new_start + hunk.new_count))
    return [max(1, hunk.new_start)]


def extract_changed_blocks(pre_file, post_file, hunks, context_radius=DEFAULT_CONTEXT_RADIUS):
    """Code blocks around the changed lines of one file pair.

    For every hunk the enclosing function is extracted from the pre-file
    (for removed lines) and the post-file (for added lines); without an
    enclosing function the changed lines plus ``context_radius`` lines each
    side are used. Overlapping ranges within one file are merged.
    """
    pre_lines = _split_lines(pre_file)
    post_lines = _split_lines(post_file)
    for hunk in hunks:
        if hunk.old_count > 0 and hunk.old_start + hunk.old_count - 1 > len(pre_lines):
            raise BlockExtractionError(
                f"hunk old range {hunk.old_start},{hunk.old_count} exceeds "
                f"pre-file length {len(pre_lines)}"
            )
        if hunk.new_count > 0 and hunk.new_start + hunk.new_count - 1 > len(post_lines):
            raise BlockExtractionError(
                f"hunk new range {hunk.new_start},{hunk.new_count} exceeds "
                f"post-file length {len(post_lines)}"
            )

    def ranges_for(lines, anchor_lists):
        ranges = []
        for anchors in anchor_lists:
            if not anchors:
                continue
            found = _enclosing_function(lines, anchors)
            if found is None:
                lo, hi = min(anchors), max(anchors)
                found = (max(1, lo - context_radius), min(len(lines), hi + context_radius))
            ranges.append(found)
        return _merge_ranges(ranges)

    pre_ranges = ranges_for(pre_lines, [_side_anchors(h, "pre") for h in hunks])
    post_ranges = ranges_for(post_lines, [_side_anchors(h, "post") for h in hunks])
    pre_blocks = ["\n".join(pre_lines[s - 1 : e]) + "\n" for s, e in pre_ranges]
    post_blocks = ["\n".join(post_lines[s - 1 : e]) + "\n" for s, e in post_ranges]
    return pre_blocks, post_blocks


def label_snippets(pre_blocks, post_blocks, commit):
    """Turn extracted blocks into labeled snippets.

    Comments are stripped before hashing; blocks that are empty after
    stripping are dropped.
    """
    snippets = []
    for origin, label, blocks in (("pre", 1, pre_blocks), ("post", 0, post_blocks)):
        for block in blocks:
            code = strip_comments(block)
            if not code.strip():
                continue
            snippets.append(
                LabeledSnippet(
                    id=snippet_id(code, label, commit.category),
                    repo=commit.repo,
                    sha=commit.sha,
                    category=commit.category,
                    label=label,
                    code=code,
                    origin=origin,
                )
            )
    return snippets


def dedupe_snippets(snippets):
    """Drop exact duplicates (keep first) and contradictory code strings.

    A code string that occurs with both labels is evidence noise: every
    copy of it is removed.
    """
    labels_by_code = {}
    for s in snippets:
        labels_by_code.setdefault(s.code, set()).add(s.label)
    contradicted = {code for code, labels in labels_by_code.items() if len(labels) > 1}
    out = []
    seen = set()
    for s in snippets:
        if s.code in contradicted or s.id in seen:
            continue
        seen.add(s.id)
        out.append(s)
    return out


def label_commit(commit, diff_text, files, context_radius=DEFAULT_CONTEXT_RADIUS):
    """Full labeling pass for one commit.

    ``files`` maps changed path -> {"pre": text, "post": text}. Files
    missing from the map are skipped with a warning.
    """
    hunks = parse_unified_diff(diff_text)
    by_path = {}
    for hunk in hunks:
        path = hunk.new_path if hunk.new_path != "/dev/null" else hunk.old_path
        by_path.setdefault(path, []).append(hunk)
    snippets = []
    for path, path_hunks in by_path.items():
        contents = files.get(path)
        if contents is None:
            log.warning("%s: no recorded file contents for %s, skipping", commit.sha, path)
            continue
        pre_blocks, post_blocks = extract_changed_blocks(
            contents.get("pre", ""), contents.get("post", ""), path_hunks, context_radius
        )
        snippets.extend(label_snippets(pre_blocks, post_blocks, commit))
    return snippets


# --- JSON-lines serialization (the dataset contract with the classifier) ---

def snippet_to_dict(s):
    return {
        "id": s.id,
        "repo": {
            "host": s.repo.host,
            "owner": s.repo.owner,
            "name": s.repo.name,
            "clone_url": s.repo.clone_url,
        },
        "sha": s.sha,
        "category": s.category.value,
        "label": s.label,
        "origin": s.origin,
        "code": s.code,
    }


def snippet_from_dict(d):
    return LabeledSnippet(
        id=d["id"],
        repo=RepoRef(**d["repo"]),
        sha=d["sha"],
        category=VulnCategory(d["category"]),
        label=d["label"],
        code=d["code"],
        origin=d["origin"],
    )


def write_snippets(snippets, path):
    with open(path, "w", encoding="utf-8") as fh:
        for s in snippets:
            fh.write(json.dumps(snippet_to_dict(s)) + "\n")


def read_snippets(path):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(snippet_from_dict(json.loads(line)))
    return out
