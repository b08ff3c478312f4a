#!/usr/bin/env python3
"""Walk the offline mining pipeline: recorded commits -> labeled snippets.

The bundled fixture directory stands in for a hosting-service API. Each
recorded commit is filtered by security keywords in its message and by
whether it touches a .py file; the surviving commits' diffs are cut into
pre-fix (vulnerable) and post-fix (fixed) code blocks.
"""

from pathlib import Path

from vulnlab import mining, snippets

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "commits"

source = mining.FixtureSource(FIXTURES)

print("== keyword filter ==")
for message in (
    "Fix SQL injection in user lookup",
    "bump version to 1.2.3",
    "prevent XSS and CSRF in comment form",
):
    hit = mining.match_keywords(message)
    print(f"  {message!r:55} -> {hit}")

print("\n== accepted commits ==")
records = list(mining.search_candidate_commits(source))
for record in records:
    print(f"  {record.sha[:10]} {record.category.value:20} {record.message}")

print("\n== labeling the first commit ==")
record = records[0]
diff_text = mining.fetch_commit_diff(record.repo, record.sha, source)
print(diff_text)
labeled = snippets.label_commit(record, diff_text, source.commit_files(record.sha))
for snip in labeled:
    tag = "vulnerable" if snip.label == 1 else "fixed"
    print(f"--- {snip.origin} ({tag}) ---")
    print(snip.code)

print("== whole dataset ==")
all_snippets = []
for record in records:
    diff_text = mining.fetch_commit_diff(record.repo, record.sha, source)
    all_snippets.extend(
        snippets.label_commit(record, diff_text, source.commit_files(record.sha))
    )
deduped = snippets.dedupe_snippets(all_snippets)
balance = sum(s.label for s in deduped), sum(1 - s.label for s in deduped)
print(f"{len(all_snippets)} snippets before dedup, {len(deduped)} after;"
      f" {balance[0]} vulnerable / {balance[1]} fixed")
