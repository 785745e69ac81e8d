"""Strategy configuration and mask-plan records."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

STRATEGY_KINDS = (
    "uniform",
    "class_restricted",
    "one_word_random",
    "one_word_object",
    "one_word_content80",
    "one_word_top_concrete",
    "ablation_no_zero",
    "ablation_no_multi",
)

ONE_WORD_KINDS = (
    "one_word_random",
    "one_word_object",
    "one_word_content80",
    "one_word_top_concrete",
)

RESTRICTED_CLASSES = ("stopword_punct", "content")

MASK_TOKEN = "MASK"
RANDOM_TOKEN = "RANDOM"
KEEP_ORIGINAL = "KEEP"

# rank weights for the top-concrete selector: most concrete word first
TOP_CONCRETE_WEIGHTS = (0.55, 0.30, 0.15)
CONTENT_WORD_PROBABILITY = 0.8


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    mask_probability: float = 0.15
    restricted_class: Optional[str] = None
    replacement_policy: Tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ConfigError(f"unknown strategy kind {self.kind!r}")
        if not 0.0 <= self.mask_probability <= 1.0:
            raise ConfigError(f"mask probability out of [0, 1]: {self.mask_probability}")
        if abs(sum(self.replacement_policy) - 1.0) > 1e-9:
            raise ConfigError(
                f"replacement proportions must sum to 1: {self.replacement_policy}"
            )
        if any(x < 0 for x in self.replacement_policy):
            raise ConfigError("replacement proportions must be non-negative")
        if self.kind == "class_restricted":
            if self.restricted_class not in RESTRICTED_CLASSES:
                raise ConfigError(
                    f"class_restricted requires restricted_class in {RESTRICTED_CLASSES}"
                )

    @classmethod
    def from_dict(cls, d):
        policy = d.get("replacement_policy", (0.8, 0.1, 0.1))
        return cls(
            kind=d["kind"],
            mask_probability=d.get("mask_probability", 0.15),
            restricted_class=d.get("restricted_class"),
            replacement_policy=tuple(policy),
            seed=d.get("seed", 0),
        )


@dataclass(frozen=True)
class PieceAction:
    pos: int
    action: str  # MASK | RANDOM | KEEP
    gold: str
    replacement: str

    def to_dict(self):
        return {"pos": self.pos, "action": self.action, "gold": self.gold}


@dataclass(frozen=True)
class MaskPlan:
    sentence_id: str
    selected_words: Tuple[int, ...]
    actions: Tuple[PieceAction, ...] = ()
    fallback_used: bool = False
    derived_seed: int = 0
