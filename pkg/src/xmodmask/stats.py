"""Corpus- and strategy-level descriptive statistics: caption length
histograms and the masked-class share report (zero-mask rate, stop-word
share, semantic-class shares)."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from .masking.config import StrategyConfig
from .masking.planner import select_words
from .rng import Rng, derive_seed

SHARE_CLASSES = (
    "stopword_punct",
    "content",
    "object",
    "attribute",
    "relationship",
    "grounded_object",
)


@dataclass
class LengthHistogram:
    word_counts: Counter
    piece_counts: Counter
    mean_words: float
    mean_pieces: float

    def to_dict(self):
        return {
            "word_counts": dict(sorted(self.word_counts.items())),
            "piece_counts": dict(sorted(self.piece_counts.items())),
            "mean_words": self.mean_words,
            "mean_pieces": self.mean_pieces,
        }


@dataclass
class MaskingReport:
    sentences: int
    trials: int
    seed: int
    empty_plan_rate: float
    mean_selected_per_sentence: float
    masked_class_shares: Dict[str, float]
    piece_class_shares: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            "sentences": self.sentences,
            "trials": self.trials,
            "seed": self.seed,
            "empty_plan_rate": self.empty_plan_rate,
            "mean_selected_per_sentence": self.mean_selected_per_sentence,
            "masked_class_shares": self.masked_class_shares,
            "piece_class_shares": self.piece_class_shares,
        }


def length_histogram(tokenized) -> LengthHistogram:
    """Exact word- and piece-length counts with means.

    ``tokenized`` is a sequence of TokenizedSentence.
    """
    words = Counter()
    pieces = Counter()
    total_w = total_p = n = 0
    for ts in tokenized:
        words[len(ts.words)] += 1
        pieces[len(ts.pieces)] += 1
        total_w += len(ts.words)
        total_p += len(ts.pieces)
        n += 1
    if n == 0:
        raise ValueError("empty corpus")
    return LengthHistogram(
        word_counts=words,
        piece_counts=pieces,
        mean_words=total_w / n,
        mean_pieces=total_p / n,
    )


def _word_classes(ann):
    classes = []
    if ann.is_stopword or ann.is_punct:
        classes.append("stopword_punct")
    if ann.is_content:
        classes.append("content")
    if ann.is_object:
        classes.append("object")
    if ann.is_attribute:
        classes.append("attribute")
    if ann.is_relationship:
        classes.append("relationship")
    if ann.grounded_object:
        classes.append("grounded_object")
    return classes


def masking_report(
    sentences: Sequence,  # (id, TokenizedSentence, [TokenAnnotation]) triples
    cfg: StrategyConfig,
    trials: int = 1,
) -> MaskingReport:
    """Run the strategy ``trials`` times per sentence with derived seeds
    and aggregate selection statistics. Deterministic given cfg.seed."""
    if trials <= 0:
        raise ValueError("trials must be >= 1")
    plan_count = 0
    empty_count = 0
    selected_total = 0
    class_counts = Counter()
    piece_class_counts = Counter()
    piece_total = 0
    for sid, ts, anns in sentences:
        for trial in range(trials):
            rng = Rng(derive_seed(cfg.seed, f"{sid}#trial{trial}"))
            selected, _ = select_words(ts, anns, cfg, rng)
            plan_count += 1
            if not selected:
                empty_count += 1
            selected_total += len(selected)
            for i in selected:
                width = ts.spans[i][1] - ts.spans[i][0]
                piece_total += width
                for cls in _word_classes(anns[i]):
                    class_counts[cls] += 1
                    piece_class_counts[cls] += width
    if plan_count == 0:
        raise ValueError("empty corpus")
    shares = {
        cls: (class_counts[cls] / selected_total if selected_total else 0.0)
        for cls in SHARE_CLASSES
    }
    piece_shares = {
        cls: (piece_class_counts[cls] / piece_total if piece_total else 0.0)
        for cls in SHARE_CLASSES
    }
    return MaskingReport(
        sentences=plan_count // trials,
        trials=trials,
        seed=cfg.seed,
        empty_plan_rate=empty_count / plan_count,
        mean_selected_per_sentence=selected_total / plan_count,
        masked_class_shares=shares,
        piece_class_shares=piece_shares,
    )
