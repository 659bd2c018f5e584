"""Convert lexical-database index files to the synset-table TSV format.

Standard index files (``index.noun``, ``index.verb``, ...) carry one lemma
per line: ``lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt
offsets...``. License preamble lines start with whitespace. A lemma listed
under several parts of speech gets the sum of its synset counts.

Usage: python -m readgrade.wordnet_index index.noun index.verb -o synsets.tsv
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


def convert(index_paths: list[Path]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for path in index_paths:
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                if not line.strip() or line[0].isspace():
                    continue
                fields = line.split()
                if len(fields) < 3:
                    continue
                lemma = fields[0].replace("_", " ").casefold()
                try:
                    synset_count = int(fields[2])
                except ValueError:
                    continue
                if synset_count >= 1:
                    counts[lemma] = counts.get(lemma, 0) + synset_count
    return counts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("indexes", nargs="+", help="index.noun / index.verb / ... files")
    parser.add_argument("-o", "--out", required=True, help="output TSV path")
    args = parser.parse_args(argv)
    counts = convert([Path(p) for p in args.indexes])
    with Path(args.out).open("w", encoding="utf-8") as handle:
        for lemma in sorted(counts):
            handle.write(f"{lemma}\t{counts[lemma]}\n")
    print(f"wrote {len(counts)} entries to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
