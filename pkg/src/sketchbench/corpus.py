"""Turning text into the counted element stream: unigrams plus adjacent bigrams.

Tokenization is deliberately dumb and reproducible: lowercase, then split on
every maximal run of non-alphanumeric characters.  Bigram keys join the two
tokens with a single 0x1f byte, which tokenization can never produce, so the
key encoding is injective.

For desk-scale experiments that need a skewed stream without shipping a
corpus, zipf_generate draws i.i.d. ranks from a Zipf(s) distribution over a
fixed vocabulary and renders them as tokens "w1", "w2", ...
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

BIGRAM_SEP = b"\x1f"

# Unicode alphanumerics: word characters minus the underscore.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class NgramKind(enum.Enum):
    UNIGRAM = "unigram"
    BIGRAM = "bigram"


class NgramEvent(NamedTuple):
    kind: NgramKind
    key: bytes


def tokenize(text: str | bytes) -> list[str]:
    """Lowercased tokens split on maximal non-alphanumeric runs.

    Bytes input must be valid UTF-8; the raised UnicodeDecodeError carries
    the offending byte offset.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _TOKEN_RE.findall(text.lower())


def unigram_key(token: str) -> bytes:
    return token.encode("utf-8")


def bigram_key(left: str, right: str) -> bytes:
    return left.encode("utf-8") + BIGRAM_SEP + right.encode("utf-8")


def split_bigram_key(key: bytes) -> tuple[bytes, bytes]:
    """Constituent unigram keys of a bigram key."""
    left, sep, right = key.partition(BIGRAM_SEP)
    if not sep:
        raise ValueError(f"not a bigram key: {key!r}")
    return left, right


def is_bigram_key(key: bytes) -> bool:
    return BIGRAM_SEP in key


def ngram_stream(tokens: Iterable[str]) -> Iterator[NgramEvent]:
    """One unigram event per token, one bigram event per adjacent pair.

    Events interleave in document order: U(t0), B(t0 t1), U(t1), ...
    A sequence of L tokens yields 2L - 1 events (L >= 1).
    """
    it = iter(tokens)
    try:
        prev = next(it)
    except StopIteration:
        return
    yield NgramEvent(NgramKind.UNIGRAM, unigram_key(prev))
    for tok in it:
        yield NgramEvent(NgramKind.BIGRAM, bigram_key(prev, tok))
        yield NgramEvent(NgramKind.UNIGRAM, unigram_key(tok))
        prev = tok


@dataclass(frozen=True)
class ZipfSpec:
    """Synthetic token stream: `length` i.i.d. draws with P(rank r) ~ r^-exponent."""

    vocab_size: int
    exponent: float
    length: int
    seed: int

    def __post_init__(self):
        if self.vocab_size < 1:
            raise ValueError(f"vocab_size must be >= 1, got {self.vocab_size}")
        if not self.exponent > 0:
            raise ValueError(f"exponent must be > 0, got {self.exponent}")
        if self.length < 0:
            raise ValueError(f"length must be >= 0, got {self.length}")


def zipf_probabilities(vocab_size: int, exponent: float) -> np.ndarray:
    """Normalized Zipf pmf over ranks 1..vocab_size."""
    ranks = np.arange(1, vocab_size + 1, dtype=np.float64)
    weights = ranks ** (-exponent)
    return weights / weights.sum()

def zipf_generate(spec: ZipfSpec) -> list[str]:
    """Deterministic per seed (numpy PCG64 stream + inverse-CDF sampling)."""
    cumulative = np.cumsum(zipf_probabilities(spec.vocab_size, spec.exponent))
    cumulative[-1] = 1.0  # guard the top rank against cumsum rounding
    rng = np.random.default_rng(spec.seed)
    draws = rng.random(spec.length)
    ranks = np.searchsorted(cumulative, draws, side="right") + 1
    return [f"w{r}" for r in ranks]


def iter_corpus_tokens(path: str | Path) -> Iterator[list[str]]:
    """Token lists for a UTF-8 text file, or every file under a directory.

    Directories are walked in lexicographic path order and each file is a
    separate token sequence, so bigrams never span file boundaries.  Mail or
    markup headers are not stripped.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.rglob("*") if p.is_file())
        if not files:
            raise FileNotFoundError(f"no files under corpus directory {path}")
    else:
        files = [path]
    for file in files:
        yield tokenize(file.read_bytes())


def corpus_events(source: str | Path | ZipfSpec) -> Iterator[NgramEvent]:
    """Event stream for a corpus path or a synthetic Zipf spec."""
    if isinstance(source, ZipfSpec):
        yield from ngram_stream(zipf_generate(source))
    else:
        for tokens in iter_corpus_tokens(source):
            yield from ngram_stream(tokens)
