"""Deterministic tokenization, sentence splitting, syllable counting, n-grams.

Everything here is a pure function over strings; all the metrics are built
on top of these primitives, so their behavior is pinned down by tests.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field


class InvalidN(ValueError):
    """Raised when an n-gram order outside 1..4 is requested."""


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class TokenSequence:
    """Case-folded tokens plus the size of the text they came from."""

    tokens: tuple[str, ...]
    source_span_count: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @classmethod
    def of(cls, tokens) -> "TokenSequence":
        """Wrap an already-tokenized list (mainly for tests)."""
        toks = tuple(tokens)
        return cls(tokens=toks, source_span_count=sum(len(t) for t in toks))


def tokenize(text: str) -> TokenSequence:
    """Case-fold and split into word and punctuation tokens.

    Splits on whitespace, then detaches leading/trailing punctuation marks
    from each chunk as single-character tokens. Apostrophes and hyphens
    inside a word stay inside it ("it's", "gpu-optimized").
    """
    span = sum(1 for ch in text if not ch.isspace())
    folded = text.casefold()
    tokens: list[str] = []
    for chunk in folded.split():
        start = 0
        end = len(chunk)
        leading: list[str] = []
        trailing: list[str] = []
        while start < end and _is_punct(chunk[start]):
            leading.append(chunk[start])
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            trailing.append(chunk[end - 1])
            end -= 1
        tokens.extend(leading)
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(trailing))
    return TokenSequence(tokens=tuple(tokens), source_span_count=span)


def is_word_token(token: str) -> bool:
    """True for tokens that count as words (not pure punctuation)."""
    return not all(_is_punct(ch) for ch in token)


# Trailing-period abbreviations that never end a sentence on their own.
ABBREVIATIONS = frozenset(
    a.casefold()
    for a in (
        "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "e.g.", "i.e.", "etc.",
        "Fig.", "Eq.", "vs.", "et al.", "al.", "St.", "No.", "cf.",
    )
)

_TERMINATORS = ".!?"


def split_sentences(text: str) -> list[str]:
    """Split on '.', '!', '?' followed by whitespace and an uppercase/digit.

    A terminator at end of input also closes a sentence, and a known
    abbreviation before a period never does. Text without any terminator
    is returned as a single sentence.
    """
    if not text.strip():
        return []
    sentences: list[str] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch in _TERMINATORS:
            if ch == "." and _ends_with_abbreviation(text, start, i):
                i += 1
                continue
            j = i + 1
            # Consume any directly repeated terminators ("?!", "...").
            while j < n and text[j] in _TERMINATORS:
                j += 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            at_end = k >= n
            boundary = at_end or (k > j and (text[k].isupper() or text[k].isdigit()))
            if boundary:
                piece = text[start:j].strip()
                if piece:
                    sentences.append(piece)
                start = k
                i = k
                continue
            i = j
            continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _ends_with_abbreviation(text: str, start: int, dot: int) -> bool:
    # The chunk is the run of non-space characters ending at the period.
    j = dot
    while j > start and not text[j - 1].isspace():
        j -= 1
    chunk = text[j : dot + 1].casefold()
    return chunk in ABBREVIATIONS


_VOWELS = frozenset("aeiouy")


def count_syllables(word: str) -> int:
    """Heuristic syllable count: maximal vowel groups, with a silent-e rule.

    'y' counts as a vowel; a terminal 'e' is dropped unless the word ends
    in consonant+"le" ("readable" keeps its last syllable). Result is
    clamped to a minimum of 1.
    """
    w = word.casefold()
    groups = 0
    prev_vowel = False
    for ch in w:
        is_vowel = ch in _VOWELS
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if w.endswith("e") and not _ends_consonant_le(w):
        groups -= 1
    return max(1, groups)


def _ends_consonant_le(w: str) -> bool:
    return (
        len(w) >= 3
        and w.endswith("le")
        and w[-3].isalpha()
        and w[-3] not in _VOWELS
    )


@dataclass(frozen=True)
class NgramMultiset:
    """Counted n-grams of a fixed order n."""

    n: int
    counts: Counter = field(default_factory=Counter)

    def total(self) -> int:
        return sum(self.counts.values())

    def grams(self) -> frozenset:
        return frozenset(self.counts)


def ngrams(tokens: TokenSequence, n: int) -> NgramMultiset:
    """Sliding-window n-gram multiset for n in 1..4."""
    if not 1 <= n <= 4:
        raise InvalidN(f"n must be in 1..4, got {n}")
    toks = tuple(tokens)
    counts = Counter(toks[i : i + n] for i in range(len(toks) - n + 1))
    return NgramMultiset(n=n, counts=counts)
