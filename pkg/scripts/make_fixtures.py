#!/usr/bin/env python3
"""Regenerate the bundled commit fixtures under fixtures/commits/.

Each fixture commit is a hand-written pre/post file pair; the recorded
diff is produced with difflib so the round-trip property (applying the
parsed hunks to the pre-image reconstructs the post-image) holds by
construction. Deterministic: rerunning rewrites identical bytes.
"""

import difflib
import hashlib
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "commits"

REPO = {
    "repo_host": "github.com",
    "repo_owner": "acme",
    "repo_name": "webapp",
    "clone_url": "https://github.com/acme/webapp.git",
}


def fake_sha(message):
    return hashlib.sha256(message.encode("utf-8")).hexdigest()[:40]


def unified(pre, post, path):
    return "".join(
        difflib.unified_diff(
            pre.splitlines(keepends=True),
            post.splitlines(keepends=True),
            fromfile=f"a/{path}",
            tofile=f"b/{path}",
        )
    )


COMMITS = [
    {
        "message": "Fix SQL injection in user lookup",
        "path": "app/db.py",
        "pre": (
            "import sqlite3\n"
            "\n"
            "def connect():\n"
            "    return sqlite3.connect('app.db')\n"
            "\n"
            "def find_user(conn, name):\n"
            "    # build the lookup query\n"
            "    query = \"SELECT * FROM users WHERE name = '\" + name + \"'\"\n"
            "    cursor = conn.execute(query)\n"
            "    return cursor.fetchone()\n"
            "\n"
            "def close(conn):\n"
            "    conn.close()\n"
        ),
        "post": (
            "import sqlite3\n"
            "\n"
            "def connect():\n"
            "    return sqlite3.connect('app.db')\n"
            "\n"
            "def find_user(conn, name):\n"
            "    # build the lookup query\n"
            "    query = \"SELECT * FROM users WHERE name = ?\"\n"
            "    cursor = conn.execute(query, (name,))\n"
            "    return cursor.fetchone()\n"
            "\n"
            "def close(conn):\n"
            "    conn.close()\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "prevent XSS and CSRF in comment form",
        "path": "app/views.py",
        "pre": (
            "from html import escape\n"
            "\n"
            "def render_comment(comment):\n"
            "    body = comment.body\n"
            "    return '<div class=\"comment\">' + body + '</div>'\n"
            "\n"
            "def render_footer():\n"
            "    return '<footer/>'\n"
        ),
        "post": (
            "from html import escape\n"
            "\n"
            "def render_comment(comment):\n"
            "    body = escape(comment.body)\n"
            "    return '<div class=\"comment\">' + body + '</div>'\n"
            "\n"
            "def render_footer():\n"
            "    return '<footer/>'\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "fix command injection in maintenance script",
        "path": "tools/cleanup.py",
        "pre": (
            "import os\n"
            "import sys\n"
            "\n"
            "TARGET = sys.argv[1]\n"
            "os.system('rm -rf ' + TARGET)\n"
            "print('cleaned', TARGET)\n"
        ),
        "post": (
            "import subprocess\n"
            "import sys\n"
            "\n"
            "TARGET = sys.argv[1]\n"
            "subprocess.run(['rm', '-rf', TARGET], check=True)\n"
            "print('cleaned', TARGET)\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "document the sql injection fix",
        "path": None,  # no .py change: must be rejected
        "pre": "",
        "post": "",
        "extra_paths": ["docs/security.md"],
    },
    {
        "message": "bump version to 1.2.3",
        "path": "app/version.py",  # no keyword: must be rejected
        "pre": "VERSION = '1.2.2'\n",
        "post": "VERSION = '1.2.3'\n",
        "extra_paths": [],
    },
    {
        "message": "Fix path traversal when serving uploads",
        "path": "app/files.py",
        "pre": (
            "import os\n"
            "\n"
            "UPLOADS = '/srv/uploads'\n"
            "\n"
            "def read_upload(name):\n"
            "    path = os.path.join(UPLOADS, name)\n"
            "    with open(path) as fh:\n"
            "        return fh.read()\n"
        ),
        "post": (
            "import os\n"
            "\n"
            "UPLOADS = '/srv/uploads'\n"
            "\n"
            "def read_upload(name):\n"
            "    path = os.path.realpath(os.path.join(UPLOADS, name))\n"
            "    if not path.startswith(UPLOADS + os.sep):\n"
            "        raise ValueError('outside upload root')\n"
            "    with open(path) as fh:\n"
            "        return fh.read()\n"
        ),
        "extra_paths": ["CHANGELOG.md"],
    },
    {
        "message": "Fix SQL injection in order search",
        "path": "app/orders.py",
        "pre": (
            "def search_orders(conn, term, limit):\n"
            "    sql = \"SELECT id FROM orders WHERE ref LIKE '%\" + term + \"%'\"\n"
            "    rows = conn.execute(sql).fetchmany(limit)\n"
            "    return [r[0] for r in rows]\n"
        ),
        "post": (
            "def search_orders(conn, term, limit):\n"
            "    sql = \"SELECT id FROM orders WHERE ref LIKE ?\"\n"
            "    rows = conn.execute(sql, ('%' + term + '%',)).fetchmany(limit)\n"
            "    return [r[0] for r in rows]\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "escape output to avoid XSS in profile page",
        "path": "app/profile.py",
        "pre": (
            "from html import escape\n"
            "\n"
            "def profile_header(user):\n"
            "    title = user.display_name\n"
            "    return '<h1>' + title + '</h1>'\n"
        ),
        "post": (
            "from html import escape\n"
            "\n"
            "def profile_header(user):\n"
            "    title = escape(user.display_name)\n"
            "    return '<h1>' + title + '</h1>'\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "fix CSRF check on settings form",
        "path": "app/settings.py",
        "pre": (
            "def update_settings(request):\n"
            "    data = request.form\n"
            "    save(request.user, data)\n"
            "    return redirect('/settings')\n"
        ),
        "post": (
            "def update_settings(request):\n"
            "    validate_csrf_token(request)\n"
            "    data = request.form\n"
            "    save(request.user, data)\n"
            "    return redirect('/settings')\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "prevent remote code execution in template rendering",
        "path": "app/render.py",
        "pre": (
            "def render_expr(expr, env):\n"
            "    return eval(expr, {}, env)\n"
        ),
        "post": (
            "import ast\n"
            "\n"
            "def render_expr(expr, env):\n"
            "    return ast.literal_eval(expr)\n"
        ),
        "extra_paths": [],
    },
    {
        "message": "clarify xss sanitizer note",
        "path": "app/sanitize.py",
        # Only a comment changes: after stripping, the pre and post blocks
        # carry identical code with opposite labels, so deduplication must
        # drop both copies.
        "pre": (
            "def sanitize(text):\n"
            "    # strip tags\n"
            "    return text.replace('<', '&lt;')\n"
        ),
        "post": (
            "def sanitize(text):\n"
            "    # strip angle brackets only\n"
            "    return text.replace('<', '&lt;')\n"
        ),
        "extra_paths": [],
    },
]

# Non-py sections appended to a diff to exercise the extension filter.
MD_SECTION = (
    "--- a/CHANGELOG.md\n"
    "+++ b/CHANGELOG.md\n"
    "@@ -1 +1,2 @@\n"
    " # Changelog\n"
    "+- harden upload serving\n"
)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for entry in COMMITS:
        sha = fake_sha(entry["message"])
        changed = list(entry["extra_paths"])
        files = {}
        diff = ""
        if entry["path"]:
            changed.insert(0, entry["path"])
            files[entry["path"]] = {"pre": entry["pre"], "post": entry["post"]}
            diff = unified(entry["pre"], entry["post"], entry["path"])
        if "CHANGELOG.md" in entry["extra_paths"]:
            diff += MD_SECTION
        meta = dict(REPO)
        meta.update(
            sha=sha,
            message=entry["message"],
            changed_paths=changed,
            files=files,
        )
        (OUT / f"{sha}.meta.json").write_text(
            json.dumps(meta, indent=2) + "\n", encoding="utf-8"
        )
        (OUT / f"{sha}.diff").write_text(diff, encoding="utf-8")
    # Expected counts are spelled out from the construction above, not
    # re-derived by running the pipeline:
    accepted_messages = [
        "Fix SQL injection in user lookup",
        "prevent XSS and CSRF in comment form",
        "fix command injection in maintenance script",
        "Fix path traversal when serving uploads",
        "Fix SQL injection in order search",
        "escape output to avoid XSS in profile page",
        "fix CSRF check on settings form",
        "prevent remote code execution in template rendering",
        "clarify xss sanitizer note",
    ]
    function_local_messages = [
        m for m in accepted_messages
        if m != "fix command injection in maintenance script"  # top-level change
    ]
    manifest = {
        # every commit except the doc-only one (no .py change) and the
        # version bump (no keyword) passes both filters
        "expected_accepted": 9,
        # one changed region per accepted commit, one pre + one post block
        "expected_snippets_before_dedup": 18,
        # the comment-only commit yields an identical code string under
        # both labels; deduplication drops that contradictory pair
        "expected_snippets_after_dedup": 16,
        # commits whose single hunk lies inside a function in both versions
        "function_local_shas": [fake_sha(m) for m in function_local_messages],
        "accepted_shas": [fake_sha(m) for m in accepted_messages],
    }
    (OUT / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(COMMITS)} fixture commits to {OUT}")


if __name__ == "__main__":
    main()
