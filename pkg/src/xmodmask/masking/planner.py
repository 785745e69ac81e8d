"""Deterministic, seeded mask-plan generation.

Every strategy consumes a per-sentence splitmix64 stream in a fixed
order, so plans are identical across runs, worker counts, and record
order. Selection operates on words; replacement actions are drawn once
per selected word and applied to all of its pieces (the whole-word
contract).
"""

from typing import List, Optional, Sequence

from ..annotate import TokenAnnotation
from ..corpus import VocabTable
from ..rng import Rng, derive_seed
from ..wordpiece import TokenizedSentence
from .config import (
    CONTENT_WORD_PROBABILITY,
    KEEP_ORIGINAL,
    MASK_TOKEN,
    ONE_WORD_KINDS,
    RANDOM_TOKEN,
    TOP_CONCRETE_WEIGHTS,
    MaskPlan,
    PieceAction,
    StrategyConfig,
)

_ACTION_NAMES = (MASK_TOKEN, RANDOM_TOKEN, KEEP_ORIGINAL)


def _select_uniform(rng: Rng, n: int, p: float) -> List[int]:
    return rng.bernoulli_indices(n, p)


def plan_uniform(
    ts: TokenizedSentence, annotation, cfg: StrategyConfig, rng: Rng
) -> tuple:
    """Independent Bernoulli(p) per word; empty selection allowed."""
    return _select_uniform(rng, len(ts.words), cfg.mask_probability), False


def plan_class_restricted(
    ts: TokenizedSentence,
    annotation: Sequence[TokenAnnotation],
    cfg: StrategyConfig,
    rng: Rng,
) -> tuple:
    """Bernoulli(p) over the restricted class only."""
    if cfg.restricted_class == "stopword_punct":
        eligible = [
            i for i, a in enumerate(annotation) if a.is_stopword or a.is_punct
        ]
    else:
        eligible = [i for i, a in enumerate(annotation) if a.is_content]
    hits = _select_uniform(rng, len(eligible), cfg.mask_probability)
    return [eligible[i] for i in hits], False


def plan_one_word(
    ts: TokenizedSentence,
    annotation: Sequence[TokenAnnotation],
    cfg: StrategyConfig,
    rng: Rng,
) -> tuple:
    """Select exactly one word, per the configured selector."""
    n = len(ts.words)
    if n == 0:
        raise ValueError("cannot mask an empty sentence")
    fallback = False
    if cfg.kind == "one_word_random":
        idx = rng.randbelow(n)
    elif cfg.kind == "one_word_object":
        pool = [i for i, a in enumerate(annotation) if a.is_object]
        if not pool:
            pool = list(range(n))
            fallback = True
        idx = pool[rng.randbelow(len(pool))]
    elif cfg.kind == "one_word_content80":
        content = [i for i, a in enumerate(annotation) if a.is_content]
        other = [i for i in range(n) if i not in set(content)]
        pool = content if rng.next_float() < CONTENT_WORD_PROBABILITY else other
        if not pool:
            pool = other if pool is content else content
        idx = pool[rng.randbelow(len(pool))]
    elif cfg.kind == "one_word_top_concrete":
        scored = [
            (i, annotation[i].concreteness)
            for i in range(n)
            if annotation[i].concreteness is not None
        ]
        if not scored:
            idx = rng.randbelow(n)
            fallback = True
        else:
            # ties break by earlier sentence position at the higher rank
            scored.sort(key=lambda pair: (-pair[1], pair[0]))
            top = scored[: len(TOP_CONCRETE_WEIGHTS)]
            weights = TOP_CONCRETE_WEIGHTS[: len(top)]
            idx = top[rng.weighted_index(weights)][0]
    else:
        raise ValueError(f"not a one-word strategy: {cfg.kind}")
    return [idx], fallback


def plan_ablation(
    ts: TokenizedSentence,
    annotation,
    cfg: StrategyConfig,
    rng: Rng,
) -> tuple:
    """Uniform Bernoulli(p) with the zero / multi repairs applied."""
    n = len(ts.words)
    if n == 0:
        raise ValueError("cannot mask an empty sentence")
    selected = _select_uniform(rng, n, cfg.mask_probability)
    if cfg.kind == "ablation_no_zero":
        if not selected:
            selected = [rng.randbelow(n)]
    elif cfg.kind == "ablation_no_multi":
        if len(selected) > 1:
            selected = [selected[rng.randbelow(len(selected))]]
    else:
        raise ValueError(f"not an ablation strategy: {cfg.kind}")
    return selected, False


_PLANNERS = {
    "uniform": plan_uniform,
    "class_restricted": plan_class_restricted,
    "ablation_no_zero": plan_ablation,
    "ablation_no_multi": plan_ablation,
}
for _kind in ONE_WORD_KINDS:
    _PLANNERS[_kind] = plan_one_word


def select_words(ts, annotation, cfg, rng) -> tuple:
    """Dispatch to the strategy's selector; returns (sorted indices, fallback)."""
    selected, fallback = _PLANNERS[cfg.kind](ts, annotation, cfg, rng)
    return sorted(selected), fallback


def apply_replacement_policy(
    selected: Sequence[int],
    ts: TokenizedSentence,
    vocab: VocabTable,
    cfg: StrategyConfig,
    rng: Rng,
) -> List[PieceAction]:
    """Draw one action per selected word and apply it to all its pieces.

    RANDOM replaces each piece independently by a uniform vocab token;
    KEEP leaves the original pieces in place but still emits labels.
    """
    actions: List[PieceAction] = []
    vocab_size = len(vocab.tokens)
    for word_index in selected:
        begin, end = ts.spans[word_index]
        action = _ACTION_NAMES[rng.weighted_index(cfg.replacement_policy)]
        for pos in range(begin, end):
            gold = ts.pieces[pos]
            if action == MASK_TOKEN:
                replacement = vocab.mask_token
            elif action == RANDOM_TOKEN:
                replacement = vocab.tokens[rng.randbelow(vocab_size)]
            else:
                replacement = gold
            actions.append(
                PieceAction(pos=pos, action=action, gold=gold, replacement=replacement)
            )
    return actions


def build_plan(
    sentence_id: str,
    ts: TokenizedSentence,
    annotation: Sequence[TokenAnnotation],
    cfg: StrategyConfig,
    vocab: Optional[VocabTable] = None,
) -> MaskPlan:
    """Full per-sentence plan: seed derivation, selection, replacement."""
    seed = derive_seed(cfg.seed, sentence_id)
    rng = Rng(seed)
    selected, fallback = select_words(ts, annotation, cfg, rng)
    actions = (
        apply_replacement_policy(selected, ts, vocab, cfg, rng)
        if vocab is not None
        else []
    )
    return MaskPlan(
        sentence_id=sentence_id,
        selected_words=tuple(selected),
        actions=tuple(actions),
        fallback_used=fallback,
        derived_seed=seed,
    )


def render(ts: TokenizedSentence, plan: MaskPlan) -> tuple:
    """Apply the plan's piece actions; returns (pieces, labels).

    Labels are (position, gold piece) pairs for every acted-on piece.
    """
    pieces = list(ts.pieces)
    labels = []
    for act in plan.actions:
        if act.pos >= len(pieces):
            raise ValueError(f"action position {act.pos} outside sentence")
        pieces[act.pos] = act.replacement
        labels.append((act.pos, act.gold))
    return pieces, labels


def plan_to_dict(plan: MaskPlan, ts: TokenizedSentence) -> dict:
    """plans.jsonl record for one sentence."""
    pieces, _ = render(ts, plan)
    return {
        "id": plan.sentence_id,
        "selected_words": list(plan.selected_words),
        "fallback_used": plan.fallback_used,
        "pieces": pieces,
        "actions": [a.to_dict() for a in plan.actions],
        "masked_text": " ".join(pieces),
    }
