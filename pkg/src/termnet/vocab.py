"""Term vocabulary: dense integer ids, counts, and relative frequencies.

Ids are assigned by descending count with lexicographic tie-break, so a
vocabulary built from the same corpus is always identical, regardless of
how the counting was sharded.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import UnknownTermError


@dataclass(frozen=True)
class VocabEntry:
    id: int
    count: int
    frequency: float


class Vocabulary:
    """Immutable map from term to (id, count, frequency)."""

    def __init__(self, counts: dict[str, int]):
        if any(c <= 0 for c in counts.values()):
            raise ValueError("vocabulary counts must be positive")
        total = sum(counts.values())
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        self.total_tokens = total
        self.id_to_term: list[str] = [term for term, _ in ordered]
        self.entries: dict[str, VocabEntry] = {
            term: VocabEntry(i, count, count / total)
            for i, (term, count) in enumerate(ordered)
        }

    @classmethod
    def from_corpus(
        cls, corpus: Iterable[Sequence[str]], min_count: int = 1
    ) -> "Vocabulary":
        counts = Counter(token for sentence in corpus for token in sentence)
        kept = {t: c for t, c in counts.items() if c >= min_count}
        return cls(kept)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def __getitem__(self, term: str) -> VocabEntry:
        try:
            return self.entries[term]
        except KeyError:
            raise UnknownTermError(term) from None

    def __iter__(self):
        return iter(self.id_to_term)

    def id_of(self, term: str) -> int:
        return self[term].id

    def counts_by_id(self) -> list[int]:
        return [self.entries[t].count for t in self.id_to_term]

    def frequencies_by_id(self) -> list[float]:
        return [self.entries[t].frequency for t in self.id_to_term]

    def save(self, path: str | Path) -> None:
        """Write the vocabulary file: "<|V|> <total>" header, then "term count"
        per line in id order."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self)} {self.total_tokens}\n")
            for term in self.id_to_term:
                fh.write(f"{term} {self.entries[term].count}\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"malformed vocabulary header in {path}")
            size, total = int(header[0]), int(header[1])
            counts: dict[str, int] = {}
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                term, _, count = line.rpartition(" ")
                counts[term] = int(count)
        vocab = cls(counts)
        if len(vocab) != size or vocab.total_tokens != total:
            raise ValueError(
                f"vocabulary file {path} is inconsistent with its header"
            )
        return vocab
