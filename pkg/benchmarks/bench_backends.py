"""Throughput comparison between the compiled sampling kernel and the
pure-Python fallback.

Measures raw RNG stream speed and end-to-end mask planning over a
synthetic corpus, once per backend.  Run from the repository root:

    python3 benchmarks/bench_backends.py
"""

import argparse
import importlib
import os
import random
import sys
import time


def _reload_backend(pure):
    os.environ["XMODMASK_PURE"] = "1" if pure else "0"
    for name in list(sys.modules):
        if name.startswith("xmodmask"):
            del sys.modules[name]
    rng = importlib.import_module("xmodmask.rng")
    return rng


def _build_fixture(n_sentences):
    rnd = random.Random(1234)
    nouns = ["tiger", "carrot", "rabbit", "dog", "cat", "ball", "car",
             "street", "table", "chair", "tree", "water", "plate"]
    glue = ["the", "a", "an", "is", "on", "in", "with", "and", "of"]
    sentences = []
    for i in range(n_sentences):
        length = rnd.randint(4, 12)
        words = [rnd.choice(nouns if j % 2 else glue) for j in range(length)]
        sentences.append((f"b{i:05d}", " ".join(words)))
    return sentences


def bench_stream(rng_mod, draws):
    r = rng_mod.Rng(42)
    start = time.perf_counter()
    for _ in range(draws):
        r.next_float()
    return draws / (time.perf_counter() - start)


def bench_planning(n_sentences):
    from xmodmask import annotate, corpus, wordpiece
    from xmodmask.masking import StrategyConfig, build_plan

    letters = [chr(c) for c in range(ord("a"), ord("z") + 1)]
    vocab_tokens = (["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
                    + letters + ["##" + l for l in letters])
    vocab = corpus.VocabTable(tuple(vocab_tokens))
    lex = corpus.LexiconSet(frozenset(), frozenset(), frozenset())
    stops = corpus.load_stopwords()
    conc = corpus.ConcretenessTable({})
    cfg = StrategyConfig(kind="uniform", seed=7)

    sentences = _build_fixture(n_sentences)
    prepared = []
    for sid, text in sentences:
        ts = wordpiece.wordpiece_tokenize(text, vocab)
        anns = annotate.annotate_sentence(
            wordpiece.reconstruct_words(ts, vocab), lex, stops, conc, None
        )
        prepared.append((sid, ts, anns))

    start = time.perf_counter()
    for sid, ts, anns in prepared:
        build_plan(sid, ts, anns, cfg, vocab)
    return n_sentences / (time.perf_counter() - start)


def run(pure, draws, n_sentences):
    rng_mod = _reload_backend(pure)
    backend = rng_mod.BACKEND
    stream = bench_stream(rng_mod, draws)
    plans = bench_planning(n_sentences)
    return backend, stream, plans


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--draws", type=int, default=2_000_000,
                        help="float draws for the raw-stream benchmark")
    parser.add_argument("--sentences", type=int, default=20_000,
                        help="sentences for the planning benchmark")
    args = parser.parse_args()

    rows = []
    for pure in (False, True):
        backend, stream, plans = run(pure, args.draws, args.sentences)
        rows.append((backend, stream, plans))

    print(f"{'backend':<10} {'floats/s':>14} {'plans/s':>12}")
    for backend, stream, plans in rows:
        print(f"{backend:<10} {stream:>14,.0f} {plans:>12,.0f}")
    if len({r[0] for r in rows}) == 1:
        print("note: compiled kernel unavailable; both runs used the "
              "pure-Python fallback")
    else:
        speedup = rows[0][1] / rows[1][1]
        print(f"raw-stream speedup (compiled / pure): {speedup:.1f}x")


if __name__ == "__main__":
    main()
