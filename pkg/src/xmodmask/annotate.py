"""Per-word semantic annotation: part-of-speech tags, semantic class
flags (object / attribute / relationship), stop-word and punctuation
status, concreteness, and grounding against the image's scene graph.

Class detection follows simple lexicon heuristics: a word is an object
iff it is a NOUN appearing in the objects lexicon, an attribute iff it
is an ADJ in the attributes lexicon, and a relationship iff it is an ADP
or VERB in the relationships lexicon. Grounding is exact lowercase match
against the scene-graph name sets, with no fuzzy matching.
"""

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Sequence

from .corpus import ConcretenessTable, LexiconSet, SceneGraph, StopwordSet

TAGS = ("NOUN", "VERB", "ADJ", "ADP", "OTHER")

_VERB_SUFFIXES = ("ing", "ed")
_ADJ_SUFFIXES = ("ous", "ful", "ish")


@dataclass(frozen=True)
class TokenAnnotation:
    pos: str
    is_stopword: bool
    is_punct: bool
    is_content: bool
    is_object: bool
    is_attribute: bool
    is_relationship: bool
    concreteness: Optional[float]
    # None means "no scene graph available", distinct from False
    grounded_object: Optional[bool]
    grounded_attribute: Optional[bool]
    grounded_relationship: Optional[bool]

    def to_dict(self):
        return {
            "pos": self.pos,
            "is_stopword": self.is_stopword,
            "is_punct": self.is_punct,
            "is_content": self.is_content,
            "is_object": self.is_object,
            "is_attribute": self.is_attribute,
            "is_relationship": self.is_relationship,
            "concreteness": self.concreteness,
            "grounded_object": self.grounded_object,
            "grounded_attribute": self.grounded_attribute,
            "grounded_relationship": self.grounded_relationship,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


_DEFAULT_TAG_LEXICON: Optional[Dict[str, str]] = None


def default_tag_lexicon() -> Dict[str, str]:
    """Most-frequent-tag lookup table shipped with the package."""
    global _DEFAULT_TAG_LEXICON
    if _DEFAULT_TAG_LEXICON is None:
        table = {}
        data = (resources.files("xmodmask.data") / "pos_lexicon.tsv").read_text("utf-8")
        for line in data.splitlines():
            if line.strip():
                word, tag = line.split("\t")
                table[word] = tag
        _DEFAULT_TAG_LEXICON = table
    return _DEFAULT_TAG_LEXICON


def pos_tag(
    words: Sequence[str],
    supplied: Optional[Sequence[str]] = None,
    stops: Optional[StopwordSet] = None,
    lexicon: Optional[Dict[str, str]] = None,
) -> List[str]:
    """Tag words; pre-supplied tags pass through verbatim.

    The built-in tagger is lexicon lookup, then suffix rules, else NOUN.
    Punctuation tokens tag as OTHER.
    """
    if not words:
        raise ValueError("words must be non-empty")
    if supplied is not None:
        if len(supplied) != len(words):
            raise ValueError(
                f"supplied tags length {len(supplied)} != words length {len(words)}"
            )
        return list(supplied)
    if lexicon is None:
        lexicon = default_tag_lexicon()
    tags = []
    for word in words:
        w = word.lower()
        if stops is not None and stops.is_punct(w):
            tags.append("OTHER")
            continue
        tag = lexicon.get(w)
        if tag is None:
            if any(w.endswith(s) for s in _VERB_SUFFIXES) and len(w) > 4:
                tag = "VERB"
            elif any(w.endswith(s) for s in _ADJ_SUFFIXES) and len(w) > 4:
                tag = "ADJ"
            else:
                tag = "NOUN"
        tags.append(tag)
    return tags


def classify_semantic(words, tags, lexicons: LexiconSet):
    """Object / attribute / relationship flags per word."""
    if len(tags) != len(words):
        raise ValueError("tags must align with words")
    flags = []
    for word, tag in zip(words, tags):
        w = word.lower()
        flags.append(
            (
                tag == "NOUN" and w in lexicons.objects,
                tag == "ADJ" and w in lexicons.attributes,
                tag in ("ADP", "VERB") and w in lexicons.relationships,
            )
        )
    return flags


def mark_stopwords(words, stops: StopwordSet):
    """(is_stopword, is_punct, is_content) per word."""
    out = []
    for word in words:
        punct = stops.is_punct(word)
        stop = not punct and stops.is_stopword(word)
        out.append((stop, punct, not (stop or punct)))
    return out


def score_concreteness(words, table: ConcretenessTable):
    """Exact lemma lookup with a crude suffix-stripping fallback."""
    scores = []
    for word in words:
        w = word.lower()
        score = table.scores.get(w)
        if score is None:
            for suffix in ("ing", "ed", "es", "s"):
                if w.endswith(suffix) and len(w) > len(suffix) + 1:
                    score = table.scores.get(w[: -len(suffix)])
                    if score is not None:
                        break
        scores.append(score)
    return scores


def ground(words, graph: Optional[SceneGraph]):
    """Exact-match grounding flags; None per flag when no graph exists."""
    if graph is None:
        return [(None, None, None) for _ in words]
    out = []
    for word in words:
        w = word.lower()
        out.append(
            (w in graph.objects, w in graph.attributes, w in graph.relationships)
        )
    return out


def annotate_sentence(
    words,
    lexicons: LexiconSet,
    stops: StopwordSet,
    concreteness: Optional[ConcretenessTable] = None,
    graph: Optional[SceneGraph] = None,
    supplied_tags=None,
    tag_lexicon=None,
) -> List[TokenAnnotation]:
    tags = pos_tag(words, supplied=supplied_tags, stops=stops, lexicon=tag_lexicon)
    sem = classify_semantic(words, tags, lexicons)
    stop_flags = mark_stopwords(words, stops)
    scores = (
        score_concreteness(words, concreteness)
        if concreteness is not None
        else [None] * len(words)
    )
    grounded = ground(words, graph)
    return [
        TokenAnnotation(
            pos=tags[i],
            is_stopword=stop_flags[i][0],
            is_punct=stop_flags[i][1],
            is_content=stop_flags[i][2],
            is_object=sem[i][0],
            is_attribute=sem[i][1],
            is_relationship=sem[i][2],
            concreteness=scores[i],
            grounded_object=grounded[i][0],
            grounded_attribute=grounded[i][1],
            grounded_relationship=grounded[i][2],
        )
        for i in range(len(words))
    ]


CLASS_NAMES = ("object", "attribute", "relationship")


def evaluate_detection(annotated_sentences):
    """Per-class precision ("accuracy") and recall of the lexicon
    heuristics against scene-graph grounding.

    ``annotated_sentences`` is an iterable of TokenAnnotation lists;
    sentences without scene graphs (grounded flags None) are skipped.
    Returns a dict: class -> {tp, predicted, grounded, precision, recall};
    precision is None when nothing was predicted, recall None when
    nothing is grounded.
    """
    counts = {name: {"tp": 0, "predicted": 0, "grounded": 0} for name in CLASS_NAMES}
    for anns in annotated_sentences:
        for ann in anns:
            if ann.grounded_object is None:
                continue
            triples = (
                ("object", ann.is_object, ann.grounded_object),
                ("attribute", ann.is_attribute, ann.grounded_attribute),
                ("relationship", ann.is_relationship, ann.grounded_relationship),
            )
            for name, predicted, grounded in triples:
                c = counts[name]
                if predicted:
                    c["predicted"] += 1
                if grounded:
                    c["grounded"] += 1
                if predicted and grounded:
                    c["tp"] += 1
    report = {}
    for name, c in counts.items():
        report[name] = {
            **c,
            "precision": c["tp"] / c["predicted"] if c["predicted"] else None,
            "recall": c["tp"] / c["grounded"] if c["grounded"] else None,
        }
    return report
