"""Loading and validation of external resources: caption corpora,
scene graphs, class lexicons, the concreteness table, the subword
vocabulary, and the stop-word list.

All lexicon-facing text is lowercased at load time; the caption ``text``
field keeps its original casing.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Set


class CorpusError(Exception):
    """Malformed or invariant-violating input data."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class CaptionRecord:
    id: str
    image_id: str
    text: str
    words: Optional[List[str]] = None
    pos: Optional[List[str]] = None

    def __post_init__(self):
        if not self.text:
            raise CorpusError(f"caption {self.id!r}: empty text")
        if self.pos is not None:
            if self.words is None:
                raise CorpusError(f"caption {self.id!r}: pos without words")
            if len(self.pos) != len(self.words):
                raise CorpusError(
                    f"caption {self.id!r}: pos length {len(self.pos)} != "
                    f"words length {len(self.words)}"
                )

    def to_dict(self):
        d = {"id": self.id, "image_id": self.image_id, "text": self.text}
        if self.words is not None:
            d["words"] = list(self.words)
        if self.pos is not None:
            d["pos"] = list(self.pos)
        return d


@dataclass(frozen=True)
class SceneGraph:
    image_id: str
    objects: frozenset
    attributes: frozenset
    relationships: frozenset

    @classmethod
    def from_dict(cls, d):
        def norm(values):
            return frozenset(v.strip().lower() for v in values if v.strip())

        return cls(
            image_id=d["image_id"],
            objects=norm(d.get("objects", [])),
            attributes=norm(d.get("attributes", [])),
            relationships=norm(d.get("relationships", [])),
        )

    def to_dict(self):
        return {
            "image_id": self.image_id,
            "objects": sorted(self.objects),
            "attributes": sorted(self.attributes),
            "relationships": sorted(self.relationships),
        }


@dataclass(frozen=True)
class LexiconSet:
    objects: frozenset
    attributes: frozenset
    relationships: frozenset


@dataclass(frozen=True)
class ConcretenessTable:
    scores: Dict[str, float]

    def __post_init__(self):
        for lemma, score in self.scores.items():
            if not 1.0 <= score <= 5.0:
                raise CorpusError(
                    f"concreteness score for {lemma!r} out of [1, 5]: {score}"
                )


@dataclass(frozen=True)
class VocabTable:
    tokens: tuple
    continuation_prefix: str = "##"
    unk_token: str = "[UNK]"
    mask_token: str = "[MASK]"
    max_chars_per_word: int = 100
    token_set: frozenset = field(init=False)

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise CorpusError("vocabulary contains duplicate tokens")
        object.__setattr__(self, "token_set", frozenset(self.tokens))
        for required in (self.unk_token, self.mask_token):
            if required not in self.token_set:
                raise CorpusError(f"vocabulary is missing {required!r}")

    def __contains__(self, token):
        return token in self.token_set

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset
    punctuation: frozenset

    def is_stopword(self, word: str) -> bool:
        return word.lower() in self.words

    def is_punct(self, token: str) -> bool:
        # a token is punctuation iff every character is punctuation
        return len(token) > 0 and all(c in self.punctuation for c in token)


def _iter_jsonl(path, strict=True):
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                if strict:
                    raise CorpusError(f"invalid JSON: {exc}", lineno) from exc
                yield lineno, None


def load_captions(path, strict=True, skipped_counter=None) -> Iterator[CaptionRecord]:
    """Stream caption records from a JSONL file, in file order.

    With ``strict=False`` malformed lines are skipped; pass a list as
    ``skipped_counter`` to collect their line numbers.
    """
    seen_ids = set()
    for lineno, obj in _iter_jsonl(path, strict=strict):
        if obj is None:
            if skipped_counter is not None:
                skipped_counter.append(lineno)
            continue
        try:
            rec = CaptionRecord(
                id=obj["id"],
                image_id=obj["image_id"],
                text=obj["text"],
                words=obj.get("words"),
                pos=obj.get("pos"),
            )
            if rec.id in seen_ids:
                raise CorpusError(f"duplicate caption id {rec.id!r}")
            seen_ids.add(rec.id)
        except (KeyError, CorpusError, TypeError) as exc:
            if strict:
                raise CorpusError(str(exc), lineno) from exc
            if skipped_counter is not None:
                skipped_counter.append(lineno)
            continue
        yield rec


def load_scene_graphs(path, strict=True) -> Dict[str, SceneGraph]:
    """Load scene graphs keyed by image id; duplicate ids are an error."""
    graphs: Dict[str, SceneGraph] = {}
    for lineno, obj in _iter_jsonl(path, strict=strict):
        if obj is None:
            continue
        try:
            graph = SceneGraph.from_dict(obj)
        except (KeyError, AttributeError, TypeError) as exc:
            if strict:
                raise CorpusError(f"malformed scene graph: {exc}", lineno) from exc
            continue
        if graph.image_id in graphs:
            raise CorpusError(f"duplicate image_id {graph.image_id!r}", lineno)
        graphs[graph.image_id] = graph
    return graphs


def load_wordlist(path) -> Set[str]:
    """One lowercase term per line; blank lines ignored."""
    with Path(path).open("r", encoding="utf-8") as fh:
        return {line.strip().lower() for line in fh if line.strip()}


def load_lexicons(objects_path, attributes_path, relationships_path) -> LexiconSet:
    return LexiconSet(
        objects=frozenset(load_wordlist(objects_path)),
        attributes=frozenset(load_wordlist(attributes_path)),
        relationships=frozenset(load_wordlist(relationships_path)),
    )


def load_concreteness(path) -> ConcretenessTable:
    """Two-column TSV: lemma<TAB>score, score in [1, 5]."""
    scores = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusError(f"expected 'lemma<TAB>score', got {line!r}", lineno)
            lemma, raw = parts
            try:
                score = float(raw)
            except ValueError as exc:
                raise CorpusError(f"bad score {raw!r}", lineno) from exc
            if not 1.0 <= score <= 5.0:
                raise CorpusError(f"score out of [1, 5]: {score}", lineno)
            scores[lemma.strip().lower()] = score
    return ConcretenessTable(scores=scores)


def load_vocab(path, max_chars_per_word=100) -> VocabTable:
    """One token per line, order-preserving; continuations start with ##."""
    tokens = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            token = line.rstrip("\n")
            if token:
                tokens.append(token)
    return VocabTable(tokens=tuple(tokens), max_chars_per_word=max_chars_per_word)


def load_stopwords(words_path=None, punct_path=None) -> StopwordSet:
    """Load the stop-word and punctuation sets; defaults ship with the
    package so runs are reproducible without external downloads."""
    if words_path is None:
        words_path = resources.files("xmodmask.data") / "stopwords.txt"
    if punct_path is None:
        punct_path = resources.files("xmodmask.data") / "punctuation.txt"
    with Path(str(words_path)).open("r", encoding="utf-8") as fh:
        words = frozenset(w.strip().lower() for w in fh if w.strip())
    with Path(str(punct_path)).open("r", encoding="utf-8") as fh:
        chars = frozenset(c for line in fh for c in line.strip())
    return StopwordSet(words=words, punctuation=chars)
