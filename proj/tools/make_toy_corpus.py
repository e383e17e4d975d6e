#!/usr/bin/env python3
"""Generates data/toy_corpus.jsonl, the synthetic fixture used by the
end-to-end tests. Output is deterministic; rerun after editing templates."""

import json
import random
import sys

ASPECTS = [
    # term, article, feminine
    ("hotel", "o", False),
    ("quarto", "o", False),
    ("piscina", "a", True),
    ("café da manhã", "o", False),
    ("atendimento", "o", False),
    ("localização", "a", True),
    ("cama", "a", True),
    ("ar condicionado", "o", False),
]

ADJECTIVES = {
    "positive": [("ótimo", "ótima"), ("excelente", "excelente"),
                 ("maravilhoso", "maravilhosa"), ("agradável", "agradável")],
    "negative": [("péssimo", "péssima"), ("horrível", "horrível"),
                 ("sujo", "suja"), ("ruim", "ruim")],
    "neutral": [("razoável", "razoável"), ("normal", "normal"),
                ("comum", "comum"), ("simples", "simples")],
}

TEMPLATES = [
    "{Art} {aspect} é {adj}.",
    "{Art} {aspect} estava {adj}.",
    "Achei {art} {aspect} {adj}.",
    "{Art} {aspect} do lugar é {adj}.",
]

FILLERS = [
    "Ficamos três noites.",
    "Viagem em família.",
    "Voltaremos em breve!",
    "Chegamos tarde no sábado.",
    "Fomos no feriado de maio.",
]

N_REVIEWS = 300

POLARITY_WEIGHTS = [("positive", 0.6), ("negative", 0.25), ("neutral", 0.15)]


def pick_polarity(rng):
    x = rng.random()
    for name, w in POLARITY_WEIGHTS:
        if x < w:
            return name
        x -= w
    return POLARITY_WEIGHTS[-1][0]


def make_review(rng):
    n_aspects = rng.choice([1, 1, 2, 2, 3])
    chosen = rng.sample(ASPECTS, n_aspects)
    parts, spans = [], []
    text = ""
    if rng.random() < 0.3:
        text = rng.choice(FILLERS)
    for term, art, fem in chosen:
        pol = pick_polarity(rng)
        adj = rng.choice(ADJECTIVES[pol])[1 if fem else 0]
        tpl = rng.choice(TEMPLATES)
        sentence = tpl.format(Art=art.upper(), art=art, aspect=term, adj=adj)
        if text:
            text += " "
        start = len(text) + sentence.index(term)
        text += sentence
        spans.append({"term": term, "start": start, "end": start + len(term),
                      "polarity": pol})
    if rng.random() < 0.3:
        text += " " + rng.choice(FILLERS)
    return text, spans


def main():
    rng = random.Random(2022)
    out = sys.argv[1] if len(sys.argv) > 1 else "data/toy_corpus.jsonl"
    seen = set()
    reviews = []
    next_id = 1000
    while len(reviews) < N_REVIEWS:
        text, spans = make_review(rng)
        if text in seen:
            continue
        seen.add(text)
        ids = list(range(next_id, next_id + len(spans)))
        next_id += len(spans)
        spans.sort(key=lambda s: s["start"])
        reviews.append({"text": text, "source_ids": ids, "spans": spans})
    with open(out, "w", encoding="utf-8") as f:
        for r in reviews:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
