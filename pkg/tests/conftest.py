import json

import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            when = getattr(rep, "when", "call")
            if outcome == "skipped" or when == "call":
                lines.append((nodeid.split("::", 1)[1], outcome.upper()))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, outcome in sorted(set(lines)):
            terminalreporter.write_line(f"  [{outcome}] {name}")

from xmodmask import corpus

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

WORDS = [
    "the", "a", "an", "is", "are", "was", "on", "in", "at", "of", "with",
    "and", "to", "eat", "tiger", "carrot", "rabbit", "orange", "person",
    "man", "woman", "men", "dog", "cat", "ball", "car", "street", "table",
    "chair", "red", "blue", "green", "small", "big", "sit", "stand",
    "jump", "stunt", "perform", "motorcycle", "parade", "crowd", "photo",
    "bathroom", "beach", "city", "kitchen", "behind", "under", "over",
    "white", "black", "grass", "field", "park", "play", "walk", "ride",
    "hold", "wear", "bike", "bicycle", "boy", "girl", "tree", "water",
    "food", "plate", "glass", "hand", "head", "hair", "shirt", "tiger's",
]

CONTINUATIONS = ["##ing", "##ed", "##s", "##er", "##ting", "##es", "##y"]

PUNCT = [".", ",", "!", "?", "'"]


def vocab_tokens():
    letters = [chr(c) for c in range(ord("a"), ord("z") + 1)]
    cont_letters = ["##" + l for l in letters]
    seen = set()
    tokens = []
    for tok in SPECIALS + PUNCT + WORDS + CONTINUATIONS + letters + cont_letters:
        if tok not in seen:
            seen.add(tok)
            tokens.append(tok)
    return tokens


OBJECTS_LEXICON = [
    "tiger", "carrot", "rabbit", "person", "man", "woman", "dog", "cat",
    "ball", "car", "street", "table", "chair", "motorcycle", "parade",
    "crowd", "bathroom", "beach", "city", "kitchen", "grass", "field",
    "park", "bike", "bicycle", "boy", "girl", "tree", "water", "food",
    "plate", "glass", "hand", "head", "hair", "shirt", "orange",
]

ATTRIBUTES_LEXICON = [
    "red", "blue", "green", "orange", "small", "big", "white", "black",
    "wooden", "old", "young", "tall",
]

RELATIONSHIPS_LEXICON = [
    "eating", "sitting", "standing", "holding", "wearing", "riding",
    "behind", "under", "over", "on", "in", "with", "jumping", "walking",
    "playing", "eat", "sit", "hold", "wear", "ride",
]

CONCRETENESS = {
    "tiger": 5.0,
    "carrot": 4.9,
    "rabbit": 4.9,
    "eating": 4.4,
    "motorcycle": 4.9,
    "man": 4.8,
    "woman": 4.8,
    "dog": 4.9,
    "cat": 4.9,
    "ball": 4.9,
    "street": 4.7,
    "orange": 4.6,
    "photo": 4.5,
    "person": 4.6,
    "the": 1.4,
    "a": 1.5,
    "is": 1.6,
    "of": 1.3,
    "idea": 1.6,
}


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("resources")
    (root / "vocab.txt").write_text("\n".join(vocab_tokens()) + "\n")
    (root / "objects.txt").write_text("\n".join(OBJECTS_LEXICON) + "\n")
    (root / "attributes.txt").write_text("\n".join(ATTRIBUTES_LEXICON) + "\n")
    (root / "relationships.txt").write_text("\n".join(RELATIONSHIPS_LEXICON) + "\n")
    (root / "concreteness.tsv").write_text(
        "".join(f"{k}\t{v}\n" for k, v in CONCRETENESS.items())
    )
    return root


@pytest.fixture(scope="session")
def vocab(data_dir):
    return corpus.load_vocab(data_dir / "vocab.txt")


@pytest.fixture(scope="session")
def lexicons(data_dir):
    return corpus.load_lexicons(
        data_dir / "objects.txt",
        data_dir / "attributes.txt",
        data_dir / "relationships.txt",
    )


@pytest.fixture(scope="session")
def stops():
    return corpus.load_stopwords()


@pytest.fixture(scope="session")
def concreteness(data_dir):
    return corpus.load_concreteness(data_dir / "concreteness.tsv")


FIXTURE_TEXTS = [
    "A tiger is eating the carrot",
    "The rabbit is eating the orange carrot",
    "A person performs a stunt jump on a motorcycle.",
    "A man riding a bicycle on the street",
    "The small dog is under the table.",
    "A woman holding a glass of water",
    "Two men standing behind the crowd!",
    "Is the cat sitting on the chair?",
    "A photo of a parade in the city",
    "The boy and the girl play ball in the park",
    "Green grass in a big field",
    "A black cat and a white dog",
    "An orange on a plate",
    "The man wears a red shirt",
    "A bike parked near a tree",
    "Food and water on the table",
    "The tiger jumped over the carrot!",
    "A girl with long hair holding food",
    "The dog is in the grass",
    "A cat on a red chair",
]


def fixture_captions(n=20):
    return [
        {"id": f"s{i:04d}", "image_id": f"i{i % 10:03d}",
         "text": FIXTURE_TEXTS[i % len(FIXTURE_TEXTS)]}
        for i in range(n)
    ]


def fixture_scene_graphs():
    return [
        {"image_id": f"i{k:03d}",
         "objects": ["tiger", "carrot", "dog", "man"][: (k % 4) + 1],
         "attributes": ["orange"] if k % 2 == 0 else [],
         "relationships": ["eating"] if k % 3 == 0 else []}
        for k in range(10)
    ]


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory, data_dir):
    root = tmp_path_factory.mktemp("corpus")
    write_jsonl(root / "captions.jsonl", fixture_captions())
    write_jsonl(root / "scene_graphs.jsonl", fixture_scene_graphs())
    config = {
        "resources": {
            "vocab": str(data_dir / "vocab.txt"),
            "objects_lexicon": str(data_dir / "objects.txt"),
            "attributes_lexicon": str(data_dir / "attributes.txt"),
            "relationships_lexicon": str(data_dir / "relationships.txt"),
            "concreteness": str(data_dir / "concreteness.tsv"),
        }
    }
    (root / "config.json").write_text(json.dumps(config, indent=1))
    return root


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return path
