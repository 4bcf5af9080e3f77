"""Post-phrasing cleanup: stop-word removal, lemmatization, digit and
rare-term filtering, and final vocabulary construction.

Order matters and is fixed: stop-words first (phrases keep their remaining
components), then lemmatization (so inflected variants pool their counts),
then digit-only tokens, then rare terms.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import TokenizedCorpus
from .vocab import Vocabulary

BUNDLED_STOPLISTS = ("english", "uspto", "patent_jargon")

_VOWELS = frozenset("aeiou")
#: Consonants that may be undoubled after stripping -ing/-ed ("running" ->
#: "run"). "l" is included so "controlling" -> "control"; stems that really
#: end in a double letter ("falling", "filling") live in the exception
#: lexicon. "s" is excluded to protect -ss stems ("passing" -> "pass").
_UNDOUBLE = frozenset("bdglmnprt")
#: Final consonants that never take a restored "e" ("snowing" -> "snow").
_NO_E_FINAL = frozenset("wxy")

_ES_DROP_ENDINGS = ("xes", "zes", "ches", "shes", "oes")


@dataclass(frozen=True)
class StopList:
    name: str
    terms: frozenset[str]


def load_stoplist(path: str | Path, name: str | None = None) -> StopList:
    """Read a stop-list file: one lowercase term per line, "#" comments."""
    terms = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                terms.add(line.lower())
    return StopList(name or Path(path).stem, frozenset(terms))


def _data_path(filename: str) -> Path:
    return Path(str(resources.files("termnet").joinpath("data", filename)))


def load_bundled_stoplist(name: str) -> StopList:
    if name not in BUNDLED_STOPLISTS:
        raise ValueError(f"no bundled stop-list named {name!r}")
    return load_stoplist(_data_path(f"stopwords_{name}.txt"), name)


def load_bundled_stoplists() -> list[StopList]:
    return [load_bundled_stoplist(name) for name in BUNDLED_STOPLISTS]


def load_lemma_lexicon(path: str | Path) -> dict[str, str]:
    """Lemma lexicon file: "form lemma" per line, "#" comments."""
    lexicon: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad lexicon line: {line!r}")
            lexicon[parts[0].lower()] = parts[1].lower()
    return lexicon


def _load_wordset(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(
            line.split("#", 1)[0].strip().lower()
            for line in fh
            if line.split("#", 1)[0].strip()
        )


class Lemmatizer:
    """Deterministic suffix-rule lemmatizer with an exception lexicon.

    Rules are ordered and at most one fires per word: -ies, -sses, -es, -s
    (plural family), then -ing, -ed (verb family, skipped for pos_hint
    "noun"). Irregular forms and rule false-positives come from a bundled
    lexicon, which a user-supplied lexicon can extend or override. Phrases
    lemmatize only their final word.
    """

    def __init__(self, extra_lexicon: Mapping[str, str] | None = None):
        self._lexicon = load_lemma_lexicon(_data_path("lemma_exceptions.txt"))
        if extra_lexicon:
            self._lexicon.update(
                {k.lower(): v.lower() for k, v in extra_lexicon.items()})
        self._no_restore = _load_wordset(_data_path("lemma_no_restore.txt"))

    def lemmatize(self, token: str, pos_hint: str = "other") -> str:
        if pos_hint not in ("noun", "verb", "adj", "other"):
            raise ValueError(f"invalid pos_hint: {pos_hint!r}")
        if "_" in token:
            head, _, last = token.rpartition("_")
            return head + "_" + self._word(last, pos_hint)
        return self._word(token, pos_hint)

    def _word(self, word: str, pos_hint: str) -> str:
        hit = self._lexicon.get(word)
        if hit is not None:
            return hit
        plural = self._plural(word)
        if plural is not None:
            return plural
        if pos_hint != "noun":
            verbal = self._verbal(word)
            if verbal is not None:
                return verbal
        return word

    def _plural(self, word: str) -> str | None:
        if len(word) >= 5 and word.endswith("ies"):
            return word[:-3] + "y"
        if len(word) >= 5 and word.endswith("sses"):
            return word[:-2]
        if len(word) >= 4 and word.endswith("es"):
            if word.endswith(_ES_DROP_ENDINGS):
                return word[:-2]
            return word[:-1]
        if len(word) >= 4 and word.endswith("s") \
                and not word.endswith(("ss", "us", "is")):
            return word[:-1]
        return None

    def _verbal(self, word: str) -> str | None:
        if len(word) >= 5 and word.endswith("ing"):
            return self._stem(word[:-3])
        if len(word) >= 5 and word.endswith("ied"):
            return word[:-3] + "y"
        if word.endswith("eed"):
            return None
        if len(word) >= 4 and word.endswith("ed"):
            return self._stem(word[:-2])
        return None

    def _stem(self, stem: str) -> str | None:
        """Repair a bare -ing/-ed stem; None means leave the word alone."""
        if len(stem) < 2 or not any(c in _VOWELS for c in stem):
            return None
        if stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
            return stem[:-1]
        if stem in self._no_restore:
            return stem
        c1, c2 = stem[-1], stem[-2]
        if c1 == "l" and c2 not in _VOWELS:
            return stem + "e"  # "coupl" -> "couple", "sampl" -> "sample"
        if (c1 not in _VOWELS and c1 not in _NO_E_FINAL and c2 in _VOWELS
                and (len(stem) == 2 or stem[-3] not in _VOWELS)):
            return stem + "e"  # CVC stems: "mak" -> "make", "us" -> "use"
        return stem


def lemmatize_corpus(
    corpus: Iterable[Sequence[str]],
    lemmatizer: Lemmatizer | None = None,
) -> TokenizedCorpus:
    lemmatizer = lemmatizer or Lemmatizer()
    return [[lemmatizer.lemmatize(tok) for tok in sentence]
            for sentence in corpus]


def _strip_components(token: str, should_drop) -> str | None:
    """Remove matching "_"-components; None when nothing is left."""
    if "_" not in token:
        return None if should_drop(token) else token
    parts = [p for p in token.split("_") if not should_drop(p)]
    if not parts:
        return None
    return "_".join(parts)


def remove_stopwords(
    corpus: Iterable[Sequence[str]],
    stoplists: Sequence[StopList],
) -> TokenizedCorpus:
    """Drop stop-word tokens and stop-word components inside phrases.

    A phrase reduced to one component becomes a plain token; reduced to
    none, it vanishes. Sentences emptied out are dropped.
    """
    stops: set[str] = set()
    for sl in stoplists:
        stops |= sl.terms
    out: TokenizedCorpus = []
    for sentence in corpus:
        kept = []
        for token in sentence:
            stripped = _strip_components(token, stops.__contains__)
            if stripped is not None:
                kept.append(stripped)
        if kept:
            out.append(kept)
    return out


def filter_numeric_and_rare(
    corpus: Iterable[Sequence[str]],
    min_count: int = 2,
) -> tuple[TokenizedCorpus, Vocabulary]:
    """Remove digit-only tokens and phrase components, then terms occurring
    fewer than ``min_count`` times; build the vocabulary of what survives."""
    cleaned: TokenizedCorpus = []
    for sentence in corpus:
        kept = []
        for token in sentence:
            stripped = _strip_components(token, str.isdigit)
            if stripped is not None:
                kept.append(stripped)
        if kept:
            cleaned.append(kept)
    counts = Counter(tok for sentence in cleaned for tok in sentence)
    surviving = {t for t, c in counts.items() if c >= min_count}
    final = []
    for sentence in cleaned:
        kept = [t for t in sentence if t in surviving]
        if kept:
            final.append(kept)
    vocab = Vocabulary({t: counts[t] for t in surviving}) if surviving \
        else Vocabulary({})
    return final, vocab


def denoise_corpus(
    corpus: Iterable[Sequence[str]],
    stoplists: Sequence[StopList] | None = None,
    lemmatizer: Lemmatizer | None = None,
    min_count: int = 2,
) -> tuple[TokenizedCorpus, Vocabulary]:
    """The full cleanup pipeline in its mandated order."""
    if stoplists is None:
        stoplists = load_bundled_stoplists()
    cleaned = remove_stopwords(corpus, stoplists)
    cleaned = lemmatize_corpus(cleaned, lemmatizer)
    return filter_numeric_and_rare(cleaned, min_count)


class CorpusCleaner(TransformerMixin, BaseEstimator):
    """Estimator facade over the denoise pipeline.

    fit_transform() cleans a training corpus and learns its vocabulary;
    transform() applies the same cleanup to new data and keeps only terms
    of the learned vocabulary.
    """

    def __init__(
        self,
        stoplists: Sequence[StopList] | None = None,
        extra_lexicon: Mapping[str, str] | None = None,
        min_count: int = 2,
    ):
        self.stoplists = stoplists
        self.extra_lexicon = extra_lexicon
        self.min_count = min_count

    def _parts(self) -> tuple[Sequence[StopList], Lemmatizer]:
        stoplists = (self.stoplists if self.stoplists is not None
                     else load_bundled_stoplists())
        return stoplists, Lemmatizer(self.extra_lexicon)

    def fit(self, X: TokenizedCorpus, y=None) -> "CorpusCleaner":
        self.fit_transform(X)
        return self

    def fit_transform(self, X: TokenizedCorpus, y=None) -> TokenizedCorpus:
        stoplists, lemmatizer = self._parts()
        cleaned, vocab = denoise_corpus(X, stoplists, lemmatizer,
                                        self.min_count)
        self.vocabulary_ = vocab
        return cleaned

    def transform(self, X: TokenizedCorpus) -> TokenizedCorpus:
        if not hasattr(self, "vocabulary_"):
            raise RuntimeError("CorpusCleaner must be fitted before transform")
        stoplists, lemmatizer = self._parts()
        cleaned = remove_stopwords(X, stoplists)
        cleaned = lemmatize_corpus(cleaned, lemmatizer)
        out: TokenizedCorpus = []
        for sentence in cleaned:
            kept = [t for t in sentence if t in self.vocabulary_]
            if kept:
                out.append(kept)
        return out
