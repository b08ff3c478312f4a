#!/usr/bin/env python3
"""Show how raw mined code becomes a token stream.

Normalization fixes what mined snippets tend to get wrong (tabs, odd
indentation, comments, missing trailing newline); the lexer then produces
standard Python lexical categories, with INDENT/DEDENT/NEWLINE kept as
explicit tokens because they carry the block structure of the code.
"""

from vulnlab.pytok import build_corpus, corpus_to_text, normalize_source, tokenize

MESSY = 'def check(u):\n\tif u.admin:  # privileged\n\t\treturn "ok"\n\treturn None'

print("== raw ==")
print(repr(MESSY))
normalized = normalize_source(MESSY)
print("\n== normalized ==")
print(repr(normalized))

print("\n== token stream ==")
stream = tokenize(normalized)
for token in stream.tokens:
    print(f"  {token.kind.name:10} {token.text!r}")

print("\n== corpus file format ==")
streams = build_corpus([MESSY, "x = 1\n"])
print(corpus_to_text(streams))

print("== lenient mode on broken input ==")
broken = "query = 'SELECT * FROM users WHERE name = ' + \nname\n"
for token in tokenize(normalize_source(broken)).tokens:
    print(f"  {token.kind.name:10} {token.text!r}")
