#!/usr/bin/env python3
"""Snapshot a deterministic set of Python standard-library sources into
tests/data/diffcorpus/ for the lexer differential test.

Selection: top-level stdlib modules, ASCII-only, syntactically valid,
under 12 KiB, no vertical-tab/form-feed control characters; the first 110
in name order. Files are copied verbatim (PSF license).
"""

import ast
import sysconfig
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "diffcorpus"
LIMIT = 110
MAX_BYTES = 12 * 1024


def eligible(path):
    try:
        data = path.read_bytes()
    except OSError:
        return None
    if len(data) > MAX_BYTES:
        return None
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        return None
    if "\x0b" in text or "\x0c" in text:
        return None
    try:
        ast.parse(text)
    except SyntaxError:
        return None
    return text


def main():
    stdlib = Path(sysconfig.get_paths()["stdlib"])
    OUT.mkdir(parents=True, exist_ok=True)
    candidates = sorted(stdlib.glob("*.py"))
    for pkg in ("json", "logging", "http", "urllib", "xml", "email",
                "collections", "wsgiref", "concurrent", "html"):
        candidates.extend(sorted((stdlib / pkg).rglob("*.py")))
    count = 0
    for path in candidates:
        if count >= LIMIT:
            break
        text = eligible(path)
        if text is None:
            continue
        name = str(path.relative_to(stdlib)).replace("/", "__")
        (OUT / name).write_text(text, encoding="ascii")
        count += 1
    print(f"wrote {count} corpus files to {OUT}")


if __name__ == "__main__":
    main()
