"""Subword tokenization with a word-to-piece span map.

Masking operates on whole words, so every word keeps a half-open range
into the piece sequence. Pre-tokenization splits on whitespace and then
splits punctuation characters off as standalone words; matching against
the vocabulary is lowercase, greedy longest-prefix-first, with ``##``
continuations.
"""

import unicodedata
from dataclasses import dataclass
from typing import List, Tuple

from .corpus import VocabTable


@dataclass(frozen=True)
class TokenizedSentence:
    words: Tuple[str, ...]
    pieces: Tuple[str, ...]
    spans: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if len(self.spans) != len(self.words):
            raise ValueError("one span per word required")
        cursor = 0
        for begin, end in self.spans:
            if begin != cursor or end <= begin:
                raise ValueError("spans must be contiguous, ordered, non-empty")
            cursor = end
        if cursor != len(self.pieces):
            raise ValueError("spans must exactly cover the pieces")

    def word_pieces(self, word_index: int) -> Tuple[str, ...]:
        begin, end = self.spans[word_index]
        return self.pieces[begin:end]


def _is_punct_char(c: str) -> bool:
    return unicodedata.category(c).startswith("P")


def pretokenize(text: str) -> List[str]:
    """Whitespace split, then split punctuation off as standalone words."""
    words: List[str] = []
    for chunk in text.split():
        current = []
        for c in chunk:
            if _is_punct_char(c):
                if current:
                    words.append("".join(current))
                    current = []
                words.append(c)
            else:
                current.append(c)
        if current:
            words.append("".join(current))
    return words


def _wordpiece_split(word: str, vocab: VocabTable) -> List[str]:
    if len(word) > vocab.max_chars_per_word:
        return [vocab.unk_token]
    pieces = []
    start = 0
    while start < len(word):
        end = len(word)
        match = None
        while end > start:
            candidate = word[start:end]
            if start > 0:
                candidate = vocab.continuation_prefix + candidate
            if candidate in vocab:
                match = candidate
                break
            end -= 1
        if match is None:
            return [vocab.unk_token]
        pieces.append(match)
        start = end
    return pieces


def wordpiece_tokenize(text: str, vocab: VocabTable) -> TokenizedSentence:
    """Tokenize into words and subword pieces with per-word spans.

    Words that exceed the character limit or admit no decomposition
    collapse to a single unknown-token piece.
    """
    if not text:
        raise ValueError("text must be non-empty")
    words = pretokenize(text)
    pieces: List[str] = []
    spans: List[Tuple[int, int]] = []
    for word in words:
        sub = _wordpiece_split(word.lower(), vocab)
        begin = len(pieces)
        pieces.extend(sub)
        spans.append((begin, len(pieces)))
    return TokenizedSentence(
        words=tuple(words), pieces=tuple(pieces), spans=tuple(spans)
    )


def word_spans(ts: TokenizedSentence) -> List[Tuple[int, int]]:
    return list(ts.spans)


def reconstruct_words(ts: TokenizedSentence, vocab: VocabTable) -> List[str]:
    """Join each word's pieces with ## markers stripped; lowercased words
    round-trip exactly unless they fell back to the unknown token."""
    out = []
    prefix = vocab.continuation_prefix
    for i in range(len(ts.words)):
        parts = []
        for j, piece in enumerate(ts.word_pieces(i)):
            parts.append(piece[len(prefix):] if j > 0 and piece.startswith(prefix) else piece)
        out.append("".join(parts))
    return out
