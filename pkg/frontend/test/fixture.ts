/** Shared test fixture: a small WordPiece vocabulary, class lexicons, a
 * concreteness table, and a generated 1000-caption corpus. */

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

const SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"];
const PUNCT = [".", ",", "!", "?", "'"];
const WORDS = [
  "the", "a", "an", "is", "are", "was", "on", "in", "at", "of", "with",
  "and", "to", "eat", "tiger", "carrot", "rabbit", "orange", "person",
  "man", "woman", "dog", "cat", "ball", "car", "street", "table", "chair",
  "red", "blue", "green", "small", "big", "tree", "water", "food", "plate",
  "glass", "hand", "grass", "field", "park", "bike", "boy", "girl",
];
const CONTINUATIONS = ["##ing", "##ed", "##s", "##er", "##es"];

function vocabTokens(): string[] {
  const letters = Array.from({ length: 26 }, (_, i) =>
    String.fromCharCode(97 + i)
  );
  const seen = new Set<string>();
  const tokens: string[] = [];
  for (const tok of [
    ...SPECIALS,
    ...PUNCT,
    ...WORDS,
    ...CONTINUATIONS,
    ...letters,
    ...letters.map((l) => "##" + l),
  ]) {
    if (!seen.has(tok)) {
      seen.add(tok);
      tokens.push(tok);
    }
  }
  return tokens;
}

const OBJECTS = [
  "tiger", "carrot", "rabbit", "person", "man", "woman", "dog", "cat",
  "ball", "car", "street", "table", "chair", "tree", "water", "food",
  "plate", "glass", "hand", "grass", "field", "park", "bike", "boy", "girl",
];
const ATTRIBUTES = ["red", "blue", "green", "orange", "small", "big"];
const RELATIONSHIPS = ["on", "in", "with", "eating", "eat", "behind"];
const CONCRETENESS: Record<string, number> = {
  tiger: 5.0, carrot: 4.9, rabbit: 4.9, dog: 4.9, cat: 4.9, ball: 4.9,
  man: 4.8, woman: 4.8, street: 4.7, orange: 4.6, the: 1.4, a: 1.5, is: 1.6,
};

/** Writes all resource files plus a config.json and returns their paths. */
export function writeResources(): { dir: string; configPath: string } {
  const dir = mkdtempSync(join(tmpdir(), "xmodmask-fixture-"));
  const file = (name: string, body: string) => {
    const p = join(dir, name);
    writeFileSync(p, body);
    return p;
  };
  const resources = {
    vocab: file("vocab.txt", vocabTokens().join("\n") + "\n"),
    objects_lexicon: file("objects.txt", OBJECTS.join("\n") + "\n"),
    attributes_lexicon: file("attributes.txt", ATTRIBUTES.join("\n") + "\n"),
    relationships_lexicon: file(
      "relationships.txt",
      RELATIONSHIPS.join("\n") + "\n"
    ),
    concreteness: file(
      "concreteness.tsv",
      Object.entries(CONCRETENESS)
        .map(([w, v]) => `${w}\t${v}\n`)
        .join("")
    ),
  };
  const configPath = file("config.json", JSON.stringify({ resources }));
  return { dir, configPath };
}

/** Small deterministic PRNG so the corpus is identical across runs. */
export function makeRng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 4294967296;
  };
}

/** Deterministic corpus of `n` captions built from the fixture vocabulary. */
export function makeCorpus(n: number): { ids: string[]; texts: string[] } {
  const rng = makeRng(20240801);
  const pick = <T>(xs: T[]) => xs[Math.floor(rng() * xs.length)];
  const glue = ["the", "a", "an", "is", "on", "in", "with", "and", "of"];
  const ids: string[] = [];
  const texts: string[] = [];
  for (let i = 0; i < n; i++) {
    const length = 4 + Math.floor(rng() * 8);
    const words: string[] = [];
    for (let j = 0; j < length; j++) {
      words.push(j % 2 === 0 ? pick(glue) : pick(OBJECTS));
    }
    ids.push(`s${String(i).padStart(4, "0")}`);
    texts.push(words.join(" "));
  }
  return { ids, texts };
}
