from .config import (
    KEEP_ORIGINAL,
    MASK_TOKEN,
    ONE_WORD_KINDS,
    RANDOM_TOKEN,
    RESTRICTED_CLASSES,
    STRATEGY_KINDS,
    ConfigError,
    MaskPlan,
    PieceAction,
    StrategyConfig,
)
from .planner import (
    apply_replacement_policy,
    build_plan,
    plan_ablation,
    plan_class_restricted,
    plan_one_word,
    plan_to_dict,
    plan_uniform,
    render,
    select_words,
)

__all__ = [
    "ConfigError",
    "KEEP_ORIGINAL",
    "MASK_TOKEN",
    "MaskPlan",
    "ONE_WORD_KINDS",
    "PieceAction",
    "RANDOM_TOKEN",
    "RESTRICTED_CLASSES",
    "STRATEGY_KINDS",
    "StrategyConfig",
    "apply_replacement_policy",
    "build_plan",
    "plan_ablation",
    "plan_class_restricted",
    "plan_one_word",
    "plan_to_dict",
    "plan_uniform",
    "render",
    "select_words",
]
