#!/usr/bin/env python3
"""Generate the synthetic word vectors used by the demo fixture.

Each word is a weighted sum of topic axes plus seeded noise. Words that name a
single culture pole get that pole's axis; words with no topic live in a
separate block of filler axes so they stay away from every topic. Multi-word
ontology labels are also emitted as underscore-joined phrase tokens.

Usage: gen_demo_vectors.py [--root DIR] [--out FILE] [--seed N]
"""

import argparse
import json
import random
import re
from pathlib import Path

TOPICS = {
    "ai": "artificial intelligence ai machine learning ml deep neural networks network models model nlp natural "
          "language processing vision computer trained classification",
    "data": "data mining science scientist scientists statistics statistical analysis analytics sql databases "
            "database pipelines excel",
    "prog": "python java c++ javascript software engineering engineer developer programming languages web "
            "development code platform services",
    "cloud": "cloud computing docker kubernetes distributed systems deployed deploy images platforms",
    "semweb": "ontology ontologies matching mapping semantic knowledge graphs representation",
    "finance": "finance financial accounting budgeting analysis audit investment banking bank risk credit payments "
               "insurance reports fraud",
    "marketing": "marketing digital market research brands brand campaigns consumer goods retail ecommerce online",
    "sales": "sales negotiation negotiated negotiate customer relationship crm business development accounts "
             "clients deals partnerships commerce",
    "mgmt": "management project manager managed leadership led offices agile methods scrum transformation supply "
            "chain logistics operations manufacturing",
    "health": "healthcare health medical imaging clinical care",
    "telecom": "telecommunications telecom",
}
FILLER_DIMS = 8


def words_of(text):
    return re.findall(r"[a-z0-9+#]+", text.lower())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=Path(__file__).resolve().parent.parent, type=Path)
    ap.add_argument("--out", default=None, type=Path)
    ap.add_argument("--seed", default=20240611, type=int)
    args = ap.parse_args()
    root = args.root
    out = args.out or root / "fixtures" / "demo" / "vectors.txt"

    culture = json.loads((root / "data" / "culture_graph.json").read_text())
    poles = []
    for dim in culture.values():
        for pole in dim.values():
            terms = [t for ts in pole.values() for t in ts]
            poles.append(set(w for t in terms for w in words_of(t)))

    vocab = set()
    for p in sorted((root / "fixtures" / "demo").glob("*/*.json")):
        d = json.loads(p.read_text())
        for body in d["sections"].values():
            vocab.update(words_of(body))
        for e in d.get("education", []):
            vocab.update(words_of(e["degree"]))
        vocab.update(w for s in d.get("required_skills", []) for w in words_of(s))
    phrases = set()
    for name in ("general_ontology.csv", "domain_ontology.csv"):
        for line in (root / "fixtures" / "demo" / name).read_text().splitlines():
            if not line.startswith("@concept,"):
                continue
            for label in line.split(",")[2:]:
                ws = words_of(label)
                vocab.update(ws)
                if len(ws) > 1:
                    phrases.add("_".join(ws))
    for p in poles:
        vocab.update(p)

    topic_names = sorted(TOPICS)
    topic_words = {t: set(TOPICS[t].split()) for t in topic_names}
    dim = len(topic_names) + len(poles) + FILLER_DIMS
    rng = random.Random(args.seed)

    def word_vector(w):
        v = [0.0] * dim
        hit = False
        for i, t in enumerate(topic_names):
            if w in topic_words[t]:
                v[i] += 1.0
                hit = True
        owners = [i for i, p in enumerate(poles) if w in p]
        if len(owners) == 1:
            v[len(topic_names) + owners[0]] += 1.0
            hit = True
        noise = 0.15 if hit else 0.6
        for i in range(dim):
            v[i] += rng.gauss(0.0, noise) * (0.3 if i < dim - FILLER_DIMS else 1.0)
        if not hit:
            v[dim - FILLER_DIMS + rng.randrange(FILLER_DIMS)] += 1.0
        return v

    vectors = {}
    for w in sorted(vocab):
        vectors[w] = word_vector(w)
    for ph in sorted(phrases):
        parts = [vectors[w] for w in ph.split("_")]
        vectors[ph] = [sum(c) / len(parts) + rng.gauss(0.0, 0.02) for c in zip(*parts)]

    with open(out, "w") as f:
        f.write(f"{len(vectors)} {dim}\n")
        for w in sorted(vectors):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vectors[w]) + "\n")


if __name__ == "__main__":
    main()
