"""Deterministic text normalization, lexicon polarity, word-list counts, and
char/word n-gram vocabulary fitting and vectorization.

The normalizer is intentionally dependency-free: URLs stripped, accents folded
to ASCII, everything outside [a-z0-9] replaced by spaces, stopwords dropped.
Fitted vocabularies index word n-grams first, then char n-grams, so a single
sparse count map covers both spaces.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

_URL_RE = re.compile(r"(?:[a-z][a-z0-9+.\-]*://\S+|www\.\S+)", re.IGNORECASE)
_NON_ALNUM_RE = re.compile(r"[^a-z0-9]+")


def normalize_text(raw: str, stopwords: "WordList | None" = None) -> list[str]:
    """Lowercased ASCII tokens with URLs, punctuation and stopwords removed.

    Idempotent: normalizing the space-joined output returns the same tokens.
    """
    text = _URL_RE.sub(" ", raw)
    text = unicodedata.normalize("NFKD", text)
    text = text.encode("ascii", "ignore").decode("ascii").lower()
    text = _NON_ALNUM_RE.sub(" ", text)
    tokens = text.split()
    if stopwords is not None and len(stopwords) > 0:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


@dataclass(frozen=True)
class WordList:
    """Set of lowercase tokens (stopwords, bad words, commonly reverted words)."""

    tokens: frozenset[str] = frozenset()

    def __post_init__(self):
        for token in self.tokens:
            if not token or token != token.lower() or any(c.isspace() for c in token):
                raise ValueError(f"word list tokens must be lowercase and whitespace-free: {token!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "WordList":
        tokens = set()
        for line in lines:
            text = line.split("#", 1)[0].strip().lower()
            if text:
                tokens.add(text)
        return cls(frozenset(tokens))

    @classmethod
    def from_file(cls, path: str) -> "WordList":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(fh)


def count_wordlist(tokens: Sequence[str], words: WordList) -> int:
    """Occurrences (with multiplicity) of tokens that belong to the list."""
    return sum(1 for t in tokens if t in words)


@dataclass(frozen=True)
class Lexicon:
    """Token polarity map; values in [-1, 1]."""

    entries: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for token, value in self.entries.items():
            if not token or any(c.isspace() for c in token) or token != token.lower():
                raise ValueError(f"lexicon tokens must be lowercase and whitespace-free: {token!r}")
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"polarity for {token!r} outside [-1, 1]: {value}")

    @classmethod
    def from_file(cls, path: str) -> "Lexicon":
        entries: dict[str, float] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                parts = text.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{line_no}: expected 'token<TAB>polarity'")
                entries[parts[0].lower()] = float(parts[1])
        return cls(entries)


def polarity(tokens: Sequence[str], lexicon: Lexicon) -> float:
    """Mean polarity of the tokens present in the lexicon; 0.0 when none match."""
    matched = [lexicon.entries[t] for t in tokens if t in lexicon.entries]
    if not matched:
        return 0.0
    return sum(matched) / len(matched)


@dataclass(frozen=True)
class NgramConfig:
    word_range: tuple[int, int] = (1, 4)
    char_range: tuple[int, int] = (1, 4)
    min_df: float = 0.001
    max_df: float = 0.7
    max_features: int | None = None

    def __post_init__(self):
        if not (0.0 <= self.min_df <= self.max_df <= 1.0):
            raise ValueError("need 0 <= min_df <= max_df <= 1")
        for lo, hi in (self.word_range, self.char_range):
            if not (1 <= lo <= hi):
                raise ValueError("n-gram ranges must satisfy 1 <= low <= high")


def _word_ngrams(tokens: Sequence[str], lo: int, hi: int) -> Iterable[str]:
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i : i + n])


def _char_ngrams(tokens: Sequence[str], lo: int, hi: int) -> Iterable[str]:
    text = " ".join(tokens)
    for n in range(lo, hi + 1):
        for i in range(len(text) - n + 1):
            yield text[i : i + n]


@dataclass(frozen=True)
class NgramVocabulary:
    """Fitted word and char n-gram index maps; word slots come first."""

    word_ngrams: dict[str, int]
    char_ngrams: dict[str, int]
    config: NgramConfig = NgramConfig()

    @property
    def width(self) -> int:
        return len(self.word_ngrams) + len(self.char_ngrams)

    def slot_token(self, index: int) -> str:
        """The n-gram stored at a combined column index."""
        if index < 0 or index >= self.width:
            raise IndexError(index)
        if index < len(self.word_ngrams):
            return _inverse(self.word_ngrams)[index]
        return _inverse(self.char_ngrams)[index - len(self.word_ngrams)]

    def ordered_tokens(self) -> list[str]:
        words = sorted(self.word_ngrams, key=self.word_ngrams.__getitem__)
        chars = sorted(self.char_ngrams, key=self.char_ngrams.__getitem__)
        return words + chars

    def to_json_dict(self) -> dict:
        return {
            "format": "wikirevert-vocabulary/1",
            "config": {
                "word_range": list(self.config.word_range),
                "char_range": list(self.config.char_range),
                "min_df": self.config.min_df,
                "max_df": self.config.max_df,
                "max_features": self.config.max_features,
            },
            "word_ngrams": dict(sorted(self.word_ngrams.items())),
            "char_ngrams": dict(sorted(self.char_ngrams.items())),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "NgramVocabulary":
        cfg = obj["config"]
        return cls(
            word_ngrams={str(k): int(v) for k, v in obj["word_ngrams"].items()},
            char_ngrams={str(k): int(v) for k, v in obj["char_ngrams"].items()},
            config=NgramConfig(
                word_range=tuple(cfg["word_range"]),
                char_range=tuple(cfg["char_range"]),
                min_df=cfg["min_df"],
                max_df=cfg["max_df"],
                max_features=cfg["max_features"],
            ),
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "NgramVocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def _inverse(mapping: dict[str, int]) -> dict[int, str]:
    return {v: k for k, v in mapping.items()}


def _df_filter(df: dict[str, int], n_docs: int, config: NgramConfig) -> dict[str, int]:
    kept = [
        gram
        for gram, count in df.items()
        if config.min_df <= count / n_docs <= config.max_df
    ]
    if config.max_features is not None and len(kept) > config.max_features:
        kept.sort(key=lambda g: (-df[g], g))
        kept = kept[: config.max_features]
    kept.sort()
    return {gram: i for i, gram in enumerate(kept)}


def fit_ngram_vocabulary(
    documents: Sequence[Sequence[str]], config: NgramConfig | None = None
) -> NgramVocabulary:
    """Fit word and char n-gram vocabularies by document frequency.

    Keeps an n-gram iff min_df <= df/N <= max_df over the corpus; column
    indices follow lexicographic n-gram order, so fitting is deterministic.
    """
    if config is None:
        config = NgramConfig()
    n_docs = len(documents)
    if n_docs == 0:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    word_df: dict[str, int] = {}
    char_df: dict[str, int] = {}
    for doc in documents:
        for gram in set(_word_ngrams(doc, *config.word_range)):
            word_df[gram] = word_df.get(gram, 0) + 1
        for gram in set(_char_ngrams(doc, *config.char_range)):
            char_df[gram] = char_df.get(gram, 0) + 1
    return NgramVocabulary(
        word_ngrams=_df_filter(word_df, n_docs, config),
        char_ngrams=_df_filter(char_df, n_docs, config),
        config=config,
    )


def vectorize(tokens: Sequence[str], vocab: NgramVocabulary) -> dict[int, int]:
    """Sparse counts of in-vocabulary n-grams over the combined column space."""
    counts: dict[int, int] = {}
    word_map = vocab.word_ngrams
    for gram in _word_ngrams(tokens, *vocab.config.word_range):
        idx = word_map.get(gram)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    offset = len(word_map)
    char_map = vocab.char_ngrams
    for gram in _char_ngrams(tokens, *vocab.config.char_range):
        idx = char_map.get(gram)
        if idx is not None:
            counts[offset + idx] = counts.get(offset + idx, 0) + 1
    return counts
