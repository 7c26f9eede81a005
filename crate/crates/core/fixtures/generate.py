"""Regenerate the frozen embedding fixture and its expected values.

Vectors are small integers so every dot product and squared norm is exact
in binary64. Cosine similarities are formed as
dot / (sqrt(|a|^2) * sqrt(|b|^2)), clamped to [-1, 1]: the same sequence of
correctly rounded operations the library performs, so bit-exact comparison
is meaningful.

    python3 generate.py
"""

import itertools
import json
import math

import numpy as np

DIM = 24
ALPHABET = "acstx"
MAX_LEN = 3
PROMPTS = {
    "I want to talk about cats.": (0.35, 0.9),
    "I like cats.": (0.3, 1.0),
    "I am afraid of dogs.": (1.0, 0.3),
    "Dogs are more loyal than cats.": (0.8, 0.75),
}
VARIANTS = ["no", "No", "no.", "nobody", "mono"]

rng = np.random.default_rng(20240917)


def draw():
    return rng.integers(-20, 21, size=DIM).astype(np.int64)


vectors = {}
vectors["dogs"] = draw()
vectors["cats"] = draw()
vectors["dog"] = vectors["dogs"] + rng.integers(-3, 4, size=DIM)
vectors["cat"] = vectors["cats"] + rng.integers(-3, 4, size=DIM)
for text, (wd, wc) in PROMPTS.items():
    mix = wd * vectors["dogs"] + wc * vectors["cats"] + rng.normal(0.0, 6.0, size=DIM)
    vectors[text] = np.rint(mix).astype(np.int64)
base = draw()
for i, token in enumerate(VARIANTS):
    vectors[token] = base + (rng.integers(-2 * i, 2 * i + 1, size=DIM) if i else 0)
for n in range(1, MAX_LEN + 1):
    for letters in itertools.product(ALPHABET, repeat=n):
        token = "".join(letters)
        if token not in vectors:
            vectors[token] = draw()

for token, v in vectors.items():
    assert np.any(v != 0), token


def cos(a, b):
    a, b = vectors[a], vectors[b]
    dot = float(np.dot(a, b))
    s = dot / (math.sqrt(float(np.dot(a, a))) * math.sqrt(float(np.dot(b, b))))
    return min(1.0, max(-1.0, s))


with open("embeddings.jsonl", "w") as f:
    for token, v in vectors.items():
        f.write(json.dumps({"token": token, "vector": [float(x) for x in v]}) + "\n")

candidates = ["".join(p) for n in range(1, MAX_LEN + 1) for p in itertools.product(ALPHABET, repeat=n)]
scan = sorted(
    ((c, abs(cos(c, "dog") - cos(c, "cat"))) for c in candidates),
    key=lambda e: e[1],
)
best = {}
for c, d in scan:
    best.setdefault(len(c), [c, d])

expected = {
    "prompt_similarities": {p: {"dogs": cos(p, "dogs"), "cats": cos(p, "cats")} for p in PROMPTS},
    "variant_similarities": {t: cos("no", t) for t in VARIANTS},
    "scan": {
        "alphabet": ALPHABET,
        "max_len": MAX_LEN,
        "targets": ["dog", "cat"],
        "entries": [[c, d] for c, d in scan],
        "best_per_length": {str(k): v for k, v in sorted(best.items())},
    },
}
with open("expected.json", "w") as f:
    json.dump(expected, f, indent=2)
    f.write("\n")
