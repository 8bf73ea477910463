"""BLEU, SARI, and Flesch readability metrics, plus corpus aggregation.

All metrics operate on case-folded token sequences from
:mod:`plainlang.analysis`. Conventions pinned here:

* BLEU is sentence-level, N truncated to the candidate length, uniform
  weights, no smoothing; any zero n-gram precision zeroes the score.
* SARI uses set semantics over n-grams (n = 1..4) with a single
  reference; every zero-denominator ratio evaluates to 0.
* FRE/FKG use the analysis module's sentence splitter and syllable
  counter; punctuation tokens are excluded from word and syllable counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .analysis import TokenSequence, is_word_token, ngrams, split_sentences, count_syllables, tokenize
from .core import Audience, CorpusPair, MetricReport


class EmptyInput(ValueError):
    """Raised when a metric receives an empty token sequence."""


class NoWords(ValueError):
    """Raised when a readability formula gets text without word tokens."""


class LengthMismatch(ValueError):
    """Raised when outputs and corpus pairs differ in count."""


def bleu(candidate: TokenSequence, reference: TokenSequence) -> float:
    """Sentence BLEU in [0, 1] against a single reference.

    N = min(4, len(candidate)); modified n-gram precision with clipping;
    brevity penalty exp(1 - len(ref)/len(cand)) when the candidate is not
    longer than the reference.
    """
    c_len = len(candidate)
    r_len = len(reference)
    if c_len == 0 or r_len == 0:
        raise EmptyInput("bleu requires non-empty candidate and reference")
    n_max = min(4, c_len)
    log_sum = 0.0
    for n in range(1, n_max + 1):
        cand_counts = ngrams(candidate, n).counts
        ref_counts = ngrams(reference, n).counts
        clipped = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        total = sum(cand_counts.values())
        if clipped == 0:
            return 0.0
        log_sum += math.log(clipped / total) / n_max
    bp = 1.0 if c_len > r_len else math.exp(1.0 - r_len / c_len)
    return bp * math.exp(log_sum)


def corpus_bleu(candidates: Sequence[TokenSequence], references: Sequence[TokenSequence]) -> float:
    """Aggregate-count corpus BLEU (N = 4, counts pooled over all pairs).

    Exposed for comparison with the per-sentence average; not used in
    MetricReport aggregation.
    """
    if len(candidates) != len(references):
        raise LengthMismatch("candidates and references differ in length")
    if not candidates:
        raise EmptyInput("corpus_bleu requires at least one pair")
    log_sum = 0.0
    for n in range(1, 5):
        clipped = 0
        total = 0
        for cand, ref in zip(candidates, references):
            cand_counts = ngrams(cand, n).counts
            ref_counts = ngrams(ref, n).counts
            clipped += sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
            total += sum(cand_counts.values())
        if total == 0 or clipped == 0:
            return 0.0
        log_sum += math.log(clipped / total) / 4.0
    c_total = sum(len(c) for c in candidates)
    r_total = sum(len(r) for r in references)
    bp = 1.0 if c_total > r_total else math.exp(1.0 - r_total / c_total)
    return bp * math.exp(log_sum)


@dataclass(frozen=True)
class SariBreakdown:
    """SARI component scores: add-F1, keep-F1, delete-precision."""

    f_add: float
    f_keep: float
    p_del: float

    @property
    def sari(self) -> float:
        return 100.0 * (self.f_add + self.f_keep + self.p_del) / 3.0


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _harmonic(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if (p + r) else 0.0


def sari(source: TokenSequence, candidate: TokenSequence, reference: TokenSequence) -> SariBreakdown:
    """SARI breakdown with set semantics over n-grams for n in 1..4."""
    if len(source) == 0 or len(candidate) == 0 or len(reference) == 0:
        raise EmptyInput("sari requires non-empty source, candidate, and reference")
    add_scores = []
    keep_scores = []
    del_scores = []
    for n in range(1, 5):
        s = ngrams(source, n).grams()
        c = ngrams(candidate, n).grams()
        r = ngrams(reference, n).grams()

        added = c - s
        ref_added = r - s
        p_add = _ratio(len(added & r), len(added))
        r_add = _ratio(len(ref_added & c), len(ref_added))
        add_scores.append(_harmonic(p_add, r_add))

        kept_c = s & c
        kept_r = s & r
        p_keep = _ratio(len(kept_c & kept_r), len(kept_c))
        r_keep = _ratio(len(kept_c & kept_r), len(kept_r))
        keep_scores.append(_harmonic(p_keep, r_keep))

        deleted_c = s - c
        deleted_r = s - r
        del_scores.append(_ratio(len(deleted_c & deleted_r), len(deleted_c)))

    return SariBreakdown(
        f_add=sum(add_scores) / 4.0,
        f_keep=sum(keep_scores) / 4.0,
        p_del=sum(del_scores) / 4.0,
    )


def _word_and_syllable_counts(text: str) -> tuple[int, int, int]:
    words = [t for t in tokenize(text) if is_word_token(t)]
    if not words:
        raise NoWords("text contains no word tokens")
    sentences = max(1, len(split_sentences(text)))
    syllables = sum(count_syllables(w) for w in words)
    return len(words), sentences, syllables


def flesch_reading_ease(text: str) -> float:
    """FRE = 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words)."""
    n_words, n_sents, n_syll = _word_and_syllable_counts(text)
    return 206.835 - 1.015 * (n_words / n_sents) - 84.6 * (n_syll / n_words)


def fk_grade(text: str) -> float:
    """FKG = 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59."""
    n_words, n_sents, n_syll = _word_and_syllable_counts(text)
    return 0.39 * (n_words / n_sents) + 11.8 * (n_syll / n_words) - 15.59


def evaluate_corpus(
    pairs: Sequence[CorpusPair],
    outputs: Sequence[str],
    audience: Audience,
    model_name: str,
) -> MetricReport:
    """Mean per-pair BLEU/SARI plus mean readability of the outputs.

    Nothing is rounded here; presentation layers round. Means use exact
    (fsum) summation so aggregation is order-independent.
    """
    if len(pairs) != len(outputs):
        raise LengthMismatch(f"{len(pairs)} pairs but {len(outputs)} outputs")
    if not pairs:
        raise EmptyInput("evaluate_corpus requires at least one pair")
    bleu_vals = []
    sari_vals = []
    fre_vals = []
    fkg_vals = []
    for pair, output in zip(pairs, outputs):
        src = tokenize(pair.original)
        ref = tokenize(pair.reference)
        out = tokenize(output)
        bleu_vals.append(bleu(out, ref))
        sari_vals.append(sari(src, out, ref).sari)
        fre_vals.append(flesch_reading_ease(output))
        fkg_vals.append(fk_grade(output))
    n = len(pairs)
    return MetricReport(
        audience=audience,
        model_name=model_name,
        n_pairs=n,
        bleu=math.fsum(bleu_vals) / n,
        sari=math.fsum(sari_vals) / n,
        fk_ease=math.fsum(fre_vals) / n,
        fk_grade=math.fsum(fkg_vals) / n,
    )
