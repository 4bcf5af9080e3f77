"""Corpus ingestion, sentence splitting, and token normalization.

Raw document records (id, title, abstract) become the line-sentence
interchange format used by every downstream stage: one sentence per line,
lowercase tokens separated by single spaces. Splitting happens exactly
once, here; later stages never re-split text.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

logger = logging.getLogger(__name__)

RawSentence = str
TokenizedSentence = list[str]
TokenizedCorpus = list[TokenizedSentence]

#: Abbreviations whose trailing period never ends a sentence.
DEFAULT_ABBREVIATIONS = frozenset({"e.g.", "i.e.", "fig.", "no.", "u.s."})

_TERMINALS = frozenset(".!?")
#: Punctuation preserved inside tokens. "-" and "/" occur in legitimate
#: word tuples ("inter-link", "ac/dc"); "_" joins detected phrases and must
#: survive re-normalization of already-phrased text.
_KEPT_PUNCT = frozenset("-/_")


class DocumentKind(str, Enum):
    UTILITY = "utility"
    DESIGN = "design"
    OTHER = "other"


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    title: str
    abstract: str
    kind: DocumentKind = DocumentKind.UTILITY


@dataclass(frozen=True)
class RecordError:
    """A malformed input record; carried to the caller, never fatal."""

    line_no: int
    doc_id: str | None
    message: str


def _default_on_error(err: RecordError) -> None:
    logger.warning("skipping record at line %d (%s): %s",
                   err.line_no, err.doc_id or "?", err.message)


def iter_records(
    lines: Iterable[str],
    fmt: str = "jsonl",
    on_error: Callable[[RecordError], None] | None = None,
) -> Iterator[DocumentRecord]:
    """Parse newline-delimited records, skipping and reporting bad ones.

    ``fmt`` is "jsonl" (objects with id/title/abstract and optional kind) or
    "tsv" (3 or 4 tab-separated columns in the same order). Records missing
    a kind default to utility. Duplicate ids within one run are reported and
    the later record skipped.
    """
    if fmt not in ("jsonl", "tsv"):
        raise ValueError(f"unknown record format: {fmt!r}")
    report = on_error or _default_on_error
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        try:
            record = _parse_record(line, fmt)
        except ValueError as exc:
            report(RecordError(line_no, _best_effort_id(line, fmt), str(exc)))
            continue
        if record.doc_id in seen:
            report(RecordError(line_no, record.doc_id, "duplicate doc_id"))
            continue
        seen.add(record.doc_id)
        yield record


def _parse_record(line: str, fmt: str) -> DocumentRecord:
    if fmt == "jsonl":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise ValueError("record is not a JSON object")
        doc_id = obj.get("id")
        if not isinstance(doc_id, str) or not doc_id:
            raise ValueError("missing or empty 'id'")
        title = obj.get("title", "")
        abstract = obj.get("abstract", "")
        if not isinstance(title, str) or not isinstance(abstract, str):
            raise ValueError("'title' and 'abstract' must be strings")
        kind = _parse_kind(obj.get("kind"))
    else:
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise ValueError(f"expected 3 or 4 tab-separated columns, got {len(cols)}")
        doc_id, title, abstract = cols[0], cols[1], cols[2]
        if not doc_id:
            raise ValueError("empty id column")
        kind = _parse_kind(cols[3] if len(cols) == 4 else None)
    return DocumentRecord(doc_id, title, abstract, kind)


def _parse_kind(value: object) -> DocumentKind:
    if value is None or value == "":
        return DocumentKind.UTILITY
    if isinstance(value, str):
        try:
            return DocumentKind(value.lower())
        except ValueError:
            pass
    raise ValueError(f"invalid kind: {value!r}")


def _best_effort_id(line: str, fmt: str) -> str | None:
    if fmt == "tsv":
        first = line.split("\t", 1)[0]
        return first or None
    try:
        obj = json.loads(line)
        doc_id = obj.get("id") if isinstance(obj, dict) else None
        return doc_id if isinstance(doc_id, str) and doc_id else None
    except (json.JSONDecodeError, AttributeError):
        return None


def split_sentences(
    text: str,
    abbreviations: frozenset[str] | set[str] = DEFAULT_ABBREVIATIONS,
) -> list[RawSentence]:
    """Split text on ".", "!", "?" followed by whitespace plus an uppercase
    letter, or by end of text.

    A period between two digits (decimal number) never splits, nor does one
    closing a listed abbreviation. Concatenating the result restores the
    input up to the whitespace trimmed at sentence boundaries.
    """
    sentences: list[str] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in _TERMINALS:
            j += 1
        if _is_boundary(text, i, j, abbreviations):
            piece = text[start:j + 1].strip()
            if piece:
                sentences.append(piece)
            start = j + 1
        i = j + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_boundary(text: str, i: int, j: int, abbreviations) -> bool:
    """Whether the punctuation run text[i..j] terminates a sentence."""
    n = len(text)
    k = j + 1
    while k < n and text[k].isspace():
        k += 1
    if k == n:
        followed_ok = True
    else:
        followed_ok = k > j + 1 and text[k].isupper()
    if not followed_ok:
        return False
    # Decimal numbers: a lone period flanked by digits is never terminal.
    if i == j and text[i] == "." and 0 < i < n - 1 \
            and text[i - 1].isdigit() and text[i + 1].isdigit():
        return False
    if text[j] == ".":
        w = i
        while w > 0 and not text[w - 1].isspace():
            w -= 1
        if text[w:j + 1].lower() in abbreviations:
            return False
    return True


def normalize(sentence: RawSentence) -> TokenizedSentence:
    """Lowercase a sentence and tokenize it on whitespace, deleting every
    punctuation character except "-", "/", and "_". Tokens that end up empty
    are dropped; stop-words are kept (their removal waits until phrases have
    been detected)."""
    kept: list[str] = []
    for ch in sentence.lower():
        if ch.isalnum() or ch in _KEPT_PUNCT:
            kept.append(ch)
        elif ch.isspace():
            kept.append(" ")
    return "".join(kept).split()


def ingest(
    records: Iterable[DocumentRecord],
    filter_kind: DocumentKind | str | None = None,
    abbreviations: frozenset[str] | set[str] = DEFAULT_ABBREVIATIONS,
) -> Iterator[RawSentence]:
    """Yield the sentences of each record passing the kind filter: the title
    as a single sentence (titles are never split), then the sentence-split
    abstract."""
    if isinstance(filter_kind, str):
        filter_kind = DocumentKind(filter_kind)
    for record in records:
        if filter_kind is not None and record.kind != filter_kind:
            continue
        title = record.title.strip()
        if title:
            yield title
        yield from split_sentences(record.abstract, abbreviations)


def tokenize(sentences: Iterable[RawSentence]) -> TokenizedCorpus:
    """Normalize a sentence stream, dropping sentences with no tokens left."""
    corpus = []
    for sentence in sentences:
        tokens = normalize(sentence)
        if tokens:
            corpus.append(tokens)
    return corpus


def write_line_sentences(corpus: Iterable[Sequence[str]], path: str | Path) -> None:
    """Write the line-sentence interchange format: one sentence per line,
    single-space-separated tokens. Empty sentences are skipped."""
    with open(path, "w", encoding="utf-8") as fh:
        for sentence in corpus:
            if sentence:
                fh.write(" ".join(sentence))
                fh.write("\n")


def read_line_sentences(path: str | Path) -> TokenizedCorpus:
    corpus = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if tokens:
                corpus.append(tokens)
    return corpus


class TextNormalizer(TransformerMixin, BaseEstimator):
    """Estimator wrapper over sentence splitting and normalization.

    transform() maps an iterable of raw text blocks to a tokenized corpus.
    With split=False each input is assumed to be one pre-split sentence.
    """

    def __init__(self, split: bool = True,
                 abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS):
        self.split = split
        self.abbreviations = abbreviations

    def fit(self, X: Iterable[str], y=None) -> "TextNormalizer":
        return self

    def transform(self, X: Iterable[str]) -> TokenizedCorpus:
        corpus: TokenizedCorpus = []
        for text in X:
            pieces = (split_sentences(text, self.abbreviations)
                      if self.split else [text])
            for sentence in pieces:
                tokens = normalize(sentence)
                if tokens:
                    corpus.append(tokens)
        return corpus
