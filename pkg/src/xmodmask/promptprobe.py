"""Prompt-based object detection evaluation: intersect a model's ranked
cloze completions with the image's ground-truth object set and report
precision@k / recall@k curves."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence

from .corpus import SceneGraph


@dataclass(frozen=True)
class ProbeRecord:
    image_id: str
    prompt: str
    predictions: tuple  # ranked, highest confidence first

    def __post_init__(self):
        if not self.predictions:
            raise ValueError(f"image {self.image_id!r}: empty prediction list")
        normalized = [p.strip().lower() for p in self.predictions]
        if len(set(normalized)) != len(normalized):
            raise ValueError(f"image {self.image_id!r}: duplicate predictions")

    @classmethod
    def from_dict(cls, d):
        return cls(
            image_id=d["image_id"],
            prompt=d["prompt"],
            predictions=tuple(d["predictions"]),
        )


@dataclass
class ProbeResult:
    prompt: str
    images: int
    images_without_objects: int
    # k -> metric, k = 1..K; macro-averaged over images unless micro
    precision_at: Dict[int, float]
    recall_at: Dict[int, float]

    def curve(self):
        return [
            (k, self.precision_at[k], self.recall_at[k])
            for k in sorted(self.precision_at)
        ]

    def to_dict(self):
        return {
            "prompt": self.prompt,
            "images": self.images,
            "images_without_objects": self.images_without_objects,
            "precision_at": self.precision_at,
            "recall_at": self.recall_at,
        }


def _normalize(token: str, plural_fold: bool) -> str:
    t = token.strip().lower()
    if plural_fold:
        for suffix in ("es", "s"):
            if t.endswith(suffix) and len(t) > len(suffix) + 1:
                return t[: -len(suffix)]
    return t


def evaluate_probe(
    records: Sequence[ProbeRecord],
    scene_graphs: Dict[str, SceneGraph],
    k_max: int,
    plural_fold: bool = False,
    micro: bool = False,
) -> List[ProbeResult]:
    """One ProbeResult per distinct prompt.

    A prediction is correct iff its normalized form is in the image's
    object set. Precision@k averages correct/k over images; recall@k
    averages correct/|objects|, excluding images with empty object sets
    (counted separately). Macro-averaged by default.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    missing = sorted(
        {r.image_id for r in records if r.image_id not in scene_graphs}
    )
    if missing:
        raise ValueError(f"missing scene graphs for image_ids: {missing}")
    short = [r.image_id for r in records if len(r.predictions) < k_max]
    if short:
        raise ValueError(
            f"k_max={k_max} exceeds prediction list length for images: {short[:10]}"
        )
    by_prompt: Dict[str, List[ProbeRecord]] = {}
    for rec in records:
        by_prompt.setdefault(rec.prompt, []).append(rec)

    results = []
    for prompt in sorted(by_prompt):
        group = by_prompt[prompt]
        precision_at: Dict[int, float] = {}
        recall_at: Dict[int, float] = {}
        no_objects = sum(
            1 for r in group if not scene_graphs[r.image_id].objects
        )
        for k in range(1, k_max + 1):
            prec_terms = []
            rec_terms = []
            correct_sum = 0
            objects_sum = 0
            for r in group:
                objects = scene_graphs[r.image_id].objects
                topk = {_normalize(p, plural_fold) for p in r.predictions[:k]}
                correct = len(topk & objects)
                prec_terms.append(correct / k)
                correct_sum += correct
                if objects:
                    rec_terms.append(correct / len(objects))
                    objects_sum += len(objects)
            if micro:
                precision_at[k] = correct_sum / (k * len(group))
                recall_at[k] = correct_sum / objects_sum if objects_sum else 0.0
            else:
                precision_at[k] = sum(prec_terms) / len(prec_terms)
                recall_at[k] = (
                    sum(rec_terms) / len(rec_terms) if rec_terms else 0.0
                )
        results.append(
            ProbeResult(
                prompt=prompt,
                images=len(group),
                images_without_objects=no_objects,
                precision_at=precision_at,
                recall_at=recall_at,
            )
        )
    return results


def load_probe_records(path) -> List[ProbeRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(ProbeRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
    return records
