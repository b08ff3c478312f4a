"""Discovery of candidate vulnerability-fixing commits.

Two interchangeable sources: a live REST API client (GitHub-compatible,
token via the VULNLAB_API_TOKEN environment variable) and an offline
fixture directory of recorded responses (one ``<sha>.meta.json`` plus one
``<sha>.diff`` per commit). Fixture mode is the first-class path: it makes
the whole pipeline reproducible at desk scale.
"""

import json
import logging
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import AuthError, FixtureError, NetworkError, NotFound

log = logging.getLogger(__name__)

TOKEN_ENV_VAR = "VULNLAB_API_TOKEN"

_SHA_RE = re.compile(r"^[0-9a-f]{40}$")


class VulnCategory(Enum):
    SqlInjection = "SqlInjection"
    CommandInjection = "CommandInjection"
    Xss = "Xss"
    Xsrf = "Xsrf"
    RemoteCodeExecution = "RemoteCodeExecution"
    PathDisclosure = "PathDisclosure"


@dataclass(frozen=True)
class RepoRef:
    host: str
    owner: str
    name: str
    clone_url: str

    def __post_init__(self):
        if not self.owner or not self.name:
            raise ValueError("repository owner and name must be non-empty")


@dataclass(frozen=True)
class CommitRecord:
    repo: RepoRef
    sha: str
    message: str
    matched_keywords: tuple
    category: VulnCategory
    changed_paths: tuple

    def __post_init__(self):
        if not _SHA_RE.match(self.sha):
            raise ValueError(f"sha must be 40 lowercase hex chars, got {self.sha!r}")


# Default keyword table. The entry order defines the match priority:
# specific multi-word terms come before their generic abbreviations.
DEFAULT_KEYWORD_TABLE = (
    ("sql injection", VulnCategory.SqlInjection),
    ("sqli", VulnCategory.SqlInjection),
    ("command injection", VulnCategory.CommandInjection),
    ("shell injection", VulnCategory.CommandInjection),
    ("xss", VulnCategory.Xss),
    ("cross site scripting", VulnCategory.Xss),
    ("cross-site scripting", VulnCategory.Xss),
    ("csrf", VulnCategory.Xsrf),
    ("xsrf", VulnCategory.Xsrf),
    ("cross site request forgery", VulnCategory.Xsrf),
    ("cross-site request forgery", VulnCategory.Xsrf),
    ("remote code execution", VulnCategory.RemoteCodeExecution),
    ("rce", VulnCategory.RemoteCodeExecution),
    ("code execution", VulnCategory.RemoteCodeExecution),
    ("path disclosure", VulnCategory.PathDisclosure),
    ("path traversal", VulnCategory.PathDisclosure),
    ("directory traversal", VulnCategory.PathDisclosure),
)


def load_keyword_table(path):
    """Load a keyword table from a JSON list of [pattern, category] pairs."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    table = []
    for pattern, category in raw:
        if not pattern or pattern != pattern.lower():
            raise ValueError(f"keyword patterns must be non-empty lowercase: {pattern!r}")
        table.append((pattern, VulnCategory(category)))
    return tuple(table)


def match_keywords(message, table=DEFAULT_KEYWORD_TABLE):
    """Scan a commit message for security keywords.

    Returns (matched_keywords, category) where the keywords appear in table
    order and the category belongs to the highest-priority match, or None
    when nothing matches. Matching is a case-insensitive substring scan.
    """
    lowered = message.lower()
    matched = [pattern for pattern, _ in table if pattern in lowered]
    if not matched:
        return None
    category = next(cat for pattern, cat in table if pattern == matched[0])
    return matched, category


def accept_commit(raw, table=DEFAULT_KEYWORD_TABLE):
    """Filter a raw commit dict into a CommitRecord, or None.

    ``raw`` needs: repo_host, repo_owner, repo_name, clone_url, sha,
    message, changed_paths. Accepted iff the message matches a keyword and
    at least one changed path ends with ".py".
    """
    hit = match_keywords(raw["message"], table)
    if hit is None:
        return None
    if not any(p.endswith(".py") for p in raw["changed_paths"]):
        return None
    keywords, category = hit
    repo = RepoRef(
        host=raw.get("repo_host", "github.com"),
        owner=raw["repo_owner"],
        name=raw["repo_name"],
        clone_url=raw.get(
            "clone_url",
            f"https://{raw.get('repo_host', 'github.com')}/{raw['repo_owner']}/{raw['repo_name']}.git",
        ),
    )
    return CommitRecord(
        repo=repo,
        sha=raw["sha"],
        message=raw["message"],
        matched_keywords=tuple(keywords),
        category=category,
        changed_paths=tuple(raw["changed_paths"]),
    )


class FixtureSource:
    """Recorded commits: ``<sha>.meta.json`` + ``<sha>.diff`` in a directory."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def iter_raw_commits(self):
        metas = sorted(self.directory.glob("*.meta.json"))
        for meta_path in metas:
            try:
                with open(meta_path, "r", encoding="utf-8") as fh:
                    raw = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise FixtureError(f"{meta_path.name}: {exc}") from exc
            for key in ("sha", "message", "changed_paths", "repo_owner", "repo_name"):
                if key not in raw:
                    raise FixtureError(f"{meta_path.name}: missing field {key!r}")
            yield raw

    def commit_diff(self, sha):
        path = self.directory / f"{sha}.diff"
        if not path.exists():
            raise NotFound(f"no recorded diff for {sha}")
        return path.read_text(encoding="utf-8")

    def commit_files(self, sha):
        """Pre/post file contents recorded with the commit, if any."""
        path = self.directory / f"{sha}.meta.json"
        if not path.exists():
            raise NotFound(f"no recorded metadata for {sha}")
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return raw.get("files", {})


class RateLimiter:
    """Token bucket, default one request per second. Thread-safe."""

    def __init__(self, rate_per_sec=1.0, clock=time.monotonic, sleep=time.sleep):
        self.interval = 1.0 / rate_per_sec
        self._clock = clock
        self._sleep = sleep
        self._next_at = 0.0
        self._lock = threading.Lock()

    def wait(self):
        with self._lock:
            now = self._clock()
            delay = self._next_at - now
            self._next_at = max(now, self._next_at) + self.interval
        if delay > 0:
            self._sleep(delay)


class LiveSource:
    """GitHub-compatible REST client with retry/backoff on rate limits."""

    def __init__(self, api_base="https://api.github.com", token=None,
                 session=None, rate_limiter=None, max_retries=5, backoff_base=1.0,
                 sleep=time.sleep, workers=1):
        self.api_base = api_base.rstrip("/")
        self.token = token if token is not None else os.environ.get(TOKEN_ENV_VAR, "")
        if not self.token:
            raise AuthError(f"live mode requires {TOKEN_ENV_VAR} to be set")
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.rate_limiter = rate_limiter or RateLimiter()
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._sleep = sleep
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers

    def _get(self, path, params=None):
        url = f"{self.api_base}{path}"
        delay = self.backoff_base
        for attempt in range(self.max_retries + 1):
            self.rate_limiter.wait()
            resp = self.session.get(
                url,
                params=params,
                headers={
                    "Authorization": f"token {self.token}",
                    "Accept": "application/vnd.github.v3+json",
                },
                timeout=30,
            )
            if resp.status_code in (403, 429):
                if attempt == self.max_retries:
                    break
                log.info("rate limited on %s, retrying in %.1fs", path, delay)
                self._sleep(delay)
                delay *= 2
                continue
            if resp.status_code == 401:
                raise AuthError("API token rejected")
            if resp.status_code == 404:
                raise NotFound(path)
            if resp.status_code >= 400:
                raise NetworkError(f"{path}: HTTP {resp.status_code}")
            return resp
        raise NetworkError(f"{path}: rate limited after {self.max_retries} retries")

    def _raw_commit(self, item):
        repo = item.get("repository", {})
        detail = self._get(
            f"/repos/{repo.get('full_name')}/commits/{item['sha']}"
        ).json()
        return {
            "repo_host": "github.com",
            "repo_owner": repo.get("owner", {}).get("login", ""),
            "repo_name": repo.get("name", ""),
            "clone_url": repo.get("clone_url", ""),
            "sha": item["sha"],
            "message": item.get("commit", {}).get("message", ""),
            "changed_paths": [f["filename"] for f in detail.get("files", [])],
        }

    def iter_raw_commits(self, query="vulnerability fix language:python"):
        page = 1
        while True:
            resp = self._get(
                "/search/commits", params={"q": query, "page": page, "per_page": 50}
            )
            items = resp.json().get("items", [])
            if not items:
                return
            if self.workers == 1:
                for item in items:
                    yield self._raw_commit(item)
            else:
                # Bounded pool for the per-commit detail requests; map()
                # keeps the emitted order equal to the search order.
                with ThreadPoolExecutor(max_workers=self.workers) as pool:
                    yield from pool.map(self._raw_commit, items)
            page += 1

    def commit_diff(self, repo, sha):
        resp = self._get(f"/repos/{repo.owner}/{repo.name}/commits/{sha}")
        files = resp.json().get("files", [])
        parts = []
        for f in files:
            patch = f.get("patch")
            if patch is None:
                continue
            parts.append(f"--- a/{f['filename']}\n+++ b/{f['filename']}\n{patch}\n")
        return "".join(parts)

    def commit_files(self, repo, sha):
        """Pre/post contents of the commit's .py files via the contents API."""
        detail = self._get(f"/repos/{repo.owner}/{repo.name}/commits/{sha}").json()
        parents = detail.get("parents", [])
        parent_sha = parents[0]["sha"] if parents else None
        files = {}
        for f in detail.get("files", []):
            path = f["filename"]
            if not path.endswith(".py"):
                continue
            post = self._file_content(repo, path, sha)
            pre = self._file_content(repo, path, parent_sha) if parent_sha else ""
            files[path] = {"pre": pre, "post": post}
        return files

    def _file_content(self, repo, path, ref):
        try:
            resp = self._get(
                f"/repos/{repo.owner}/{repo.name}/contents/{path}", params={"ref": ref}
            )
        except NotFound:
            return ""  # file does not exist at that ref (added or deleted)
        payload = resp.json()
        if payload.get("encoding") == "base64":
            import base64

            raw = payload.get("content", "").encode("ascii")
            return base64.b64decode(raw).decode("utf-8", errors="replace")
        return payload.get("content", "")


def search_candidate_commits(source, table=DEFAULT_KEYWORD_TABLE, limit=None):
    """Yield accepted CommitRecords from a source, up to ``limit``.

    Fixture sources iterate their directory in sorted file order, making
    runs bit-reproducible. Live sources paginate the search endpoint.
    """
    emitted = 0
    for raw in source.iter_raw_commits():
        if limit is not None and emitted >= limit:
            return
        record = accept_commit(raw, table)
        if record is None:
            continue
        yield record
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def fetch_commit_diff(repo, sha, source):
    """Unified diff of a commit restricted to ".py" files.

    Returns "" when no Python file changed. Raises NotFound for unknown
    shas.
    """
    from .diffs import parse_unified_diff

    if isinstance(source, FixtureSource):
        text = source.commit_diff(sha)
    else:
        text = source.commit_diff(repo, sha)
    hunks = parse_unified_diff(text)
    if not hunks:
        return ""
    return _render_python_only(text)


def fetch_commit_files(repo, sha, source):
    """Changed-file contents for a commit, keyed by path.

    Fixture sources replay recorded contents; live sources fetch the pre
    and post versions of every changed .py file.
    """
    if isinstance(source, FixtureSource):
        return source.commit_files(sha)
    return source.commit_files(repo, sha)


def _render_python_only(diff_text):
    """Drop non-.py file sections from a unified diff, byte-preserving the rest."""
    out = []
    keep = False
    lines = diff_text.split("\n")
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("--- ") and i + 1 < len(lines) and lines[i + 1].startswith("+++ "):
            new_path = lines[i + 1][4:].split("\t")[0].strip()
            if new_path.startswith("b/"):
                new_path = new_path[2:]
            old_path = line[4:].split("\t")[0].strip()
            if old_path.startswith("a/"):
                old_path = old_path[2:]
            effective = new_path if new_path != "/dev/null" else old_path
            keep = effective.endswith(".py")
            if keep:
                out.append(line)
                out.append(lines[i + 1])
            i += 2
            continue
        if line.startswith("diff ") or line.startswith("index "):
            keep = False  # re-decided at the next ---/+++ pair
            i += 1
            continue
        if keep:
            out.append(line)
        i += 1
    if not out:
        return ""
    text = "\n".join(out)
    return text if text.endswith("\n") else text + "\n"


# --- JSON-lines serialization (field names are the external contract) ---

def commit_record_to_dict(record):
    return {
        "repo_host": record.repo.host,
        "repo_owner": record.repo.owner,
        "repo_name": record.repo.name,
        "sha": record.sha,
        "message": record.message,
        "matched_keywords": list(record.matched_keywords),
        "category": record.category.value,
        "changed_paths": list(record.changed_paths),
    }


def commit_record_from_dict(d):
    repo = RepoRef(
        host=d["repo_host"],
        owner=d["repo_owner"],
        name=d["repo_name"],
        clone_url=d.get(
            "clone_url", f"https://{d['repo_host']}/{d['repo_owner']}/{d['repo_name']}.git"
        ),
    )
    return CommitRecord(
        repo=repo,
        sha=d["sha"],
        message=d["message"],
        matched_keywords=tuple(d["matched_keywords"]),
        category=VulnCategory(d["category"]),
        changed_paths=tuple(d["changed_paths"]),
    )


def write_commit_records(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(commit_record_to_dict(record)) + "\n")


def read_commit_records(path):
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(commit_record_from_dict(json.loads(line)))
    return records
