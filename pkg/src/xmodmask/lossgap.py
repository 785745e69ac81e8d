"""Image-necessity metrics computed from external model prediction logs:
the per-token loss gap (loss without image minus loss with image),
Accuracy@k, exponentiated-loss aggregates, and the per-class hierarchy.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence


@dataclass(frozen=True)
class PredictionRecord:
    sentence_id: str
    word_index: int
    gold: str
    loss_with: float
    loss_without: float
    topk_with: tuple
    topk_without: tuple

    def __post_init__(self):
        if self.loss_with < 0 or self.loss_without < 0:
            raise ValueError(
                f"losses must be non-negative: {self.loss_with}, {self.loss_without}"
            )
        if not self.topk_with or not self.topk_without:
            raise ValueError("top-k lists must be non-empty")

    @classmethod
    def from_dict(cls, d):
        if "loss_without" not in d or d["loss_without"] is None:
            raise ValueError(
                f"record {d.get('id')!r}: missing without-image loss; refusing to impute"
            )
        return cls(
            sentence_id=d["id"],
            word_index=d["word_index"],
            gold=d["gold"],
            loss_with=d["loss_with"],
            loss_without=d["loss_without"],
            topk_with=tuple(d["topk_with"]),
            topk_without=tuple(d["topk_without"]),
        )


@dataclass
class ClassReport:
    name: str
    count: int
    mean_loss_gap: float
    exp_loss_with: float
    exp_loss_without: float
    exp_loss_gap: float
    acc_at_k_with: float
    acc_at_k_without: float
    acc_gap: float

    def to_dict(self):
        return self.__dict__.copy()


def lossgap(rec: PredictionRecord) -> float:
    """loss without image minus loss with image; negative values allowed."""
    return rec.loss_without - rec.loss_with


def accuracy_at_k(records: Sequence[PredictionRecord], k: int, side: str) -> float:
    """Fraction of records whose gold word is among the first k predictions."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not records:
        raise ValueError("empty record set")
    if side not in ("with", "without"):
        raise ValueError(f"side must be 'with' or 'without', got {side!r}")
    hits = 0
    for rec in records:
        topk = rec.topk_with if side == "with" else rec.topk_without
        if rec.gold in topk[:k]:
            hits += 1
    return hits / len(records)


def exp_mean_loss(
    records: Sequence[PredictionRecord], side: str, mean_of_exp: bool = False
) -> float:
    """exp(mean loss) by default; mean(exp loss) behind the flag."""
    if not records:
        raise ValueError("empty record set")
    losses = [
        rec.loss_with if side == "with" else rec.loss_without for rec in records
    ]
    if mean_of_exp:
        return sum(math.exp(x) for x in losses) / len(losses)
    return math.exp(sum(losses) / len(losses))


def class_report(
    records: Sequence[PredictionRecord],
    class_of: Dict[tuple, List[str]],
    k: int = 5,
    mean_of_exp: bool = False,
) -> List[ClassReport]:
    """Group records by the class memberships of their masked word.

    ``class_of`` maps (sentence_id, word_index) to the word's class
    names; classes may overlap. Reports are sorted by mean loss gap,
    descending. A record with no entry in ``class_of`` is an error.
    """
    groups: Dict[str, List[PredictionRecord]] = {}
    missing = []
    for rec in records:
        key = (rec.sentence_id, rec.word_index)
        if key not in class_of:
            missing.append(key)
            continue
        for cls in class_of[key]:
            groups.setdefault(cls, []).append(rec)
    if missing:
        raise ValueError(f"records without annotations: {missing[:10]}")
    reports = []
    for name, group in groups.items():
        ew = exp_mean_loss(group, "with", mean_of_exp)
        ewo = exp_mean_loss(group, "without", mean_of_exp)
        aw = accuracy_at_k(group, k, "with")
        awo = accuracy_at_k(group, k, "without")
        reports.append(
            ClassReport(
                name=name,
                count=len(group),
                mean_loss_gap=sum(lossgap(r) for r in group) / len(group),
                exp_loss_with=ew,
                exp_loss_without=ewo,
                exp_loss_gap=ewo - ew,
                acc_at_k_with=aw,
                acc_at_k_without=awo,
                acc_gap=aw - awo,
            )
        )
    reports.sort(key=lambda r: (-r.mean_loss_gap, r.name))
    return reports


def load_predictions(path) -> List[PredictionRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(PredictionRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
    return records
