"""Nucleotide sequence primitives.

Strands are plain uppercase ``str`` objects over ``ACGT`` read 5'->3'.
Coordinates are 0-based and half-open throughout the package.
"""

from __future__ import annotations

import io
from typing import Iterable, TextIO

BASES = "ACGT"

ECORI_SITE = "GAATTC"
MISMATCH_FIELD = "GTTAAC"

_COMPLEMENT = str.maketrans("ACGT", "TGCA")


def as_strand(seq: str) -> str:
    """Normalise ``seq`` to an uppercase strand, rejecting anything but ACGT."""
    s = str(seq).strip().upper()
    if not s:
        raise ValueError("strand must be non-empty")
    bad = set(s) - set(BASES)
    if bad:
        raise ValueError(f"invalid bases in strand: {''.join(sorted(bad))}")
    return s


def complement(s: str) -> str:
    """Base-wise Watson-Crick complement, orientation unchanged."""
    return s.translate(_COMPLEMENT)


def reverse_complement(s: str) -> str:
    return s.translate(_COMPLEMENT)[::-1]


def is_palindrome(s: str) -> bool:
    """True for biological palindromes (strand equals its reverse complement)."""
    return s == reverse_complement(s)


def find_sites(s: str, motif: str) -> list[int]:
    """All start positions of ``motif`` in ``s``, overlapping hits included."""
    if len(motif) > len(s):
        return []
    hits = []
    start = s.find(motif)
    while start != -1:
        hits.append(start)
        start = s.find(motif, start + 1)
    return hits


def hamming(a: str, b: str) -> int:
    if len(a) != len(b):
        raise ValueError(f"hamming distance needs equal lengths ({len(a)} != {len(b)})")
    return sum(x != y for x, y in zip(a, b))


# FASTA ---------------------------------------------------------------------

def format_fasta(records: Iterable[tuple[str, str]], width: int = 60) -> str:
    out = io.StringIO()
    for name, seq in records:
        out.write(f">{name}\n")
        for i in range(0, len(seq), width):
            out.write(seq[i:i + width] + "\n")
    return out.getvalue()


def parse_fasta(text: str | TextIO) -> list[tuple[str, str]]:
    """Parse multi-record FASTA into ``(name, sequence)`` pairs."""
    if not isinstance(text, str):
        text = text.read()
    records: list[tuple[str, str]] = []
    name = None
    chunks: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            if name is not None:
                records.append((name, as_strand("".join(chunks))))
            name, chunks = line[1:].strip(), []
        else:
            if name is None:
                raise ValueError("FASTA sequence data before first header")
            chunks.append(line)
    if name is not None:
        records.append((name, as_strand("".join(chunks))))
    return records
