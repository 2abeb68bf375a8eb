import os
import random

import numpy as np
from hypothesis import HealthCheck, settings

from sublcs import Corpus

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def naive_occurrences(p, t):
    p, t = list(p), list(t)
    return [i + 1 for i in range(len(t) - len(p) + 1) if t[i:i + len(p)] == p]


def contains(doc, pat) -> bool:
    return bool(naive_occurrences(pat, doc))


def random_corpus(rng: random.Random, max_len=30, max_m=6, sigma=None, plant=True) -> Corpus:
    m = rng.randint(2, max_m)
    k = sigma or rng.choice([1, 2, 3, 4, 26])
    docs = [[rng.randrange(k) for _ in range(rng.randint(0, max_len))] for _ in range(m)]
    if plant and rng.random() < 0.6:
        base = [rng.randrange(k) for _ in range(rng.randint(3, max_len))]
        for doc in docs:
            if rng.random() < 0.6:
                p = rng.randint(0, len(doc))
                doc[p:p] = base
    return Corpus.from_docs(docs, rng.randint(2, m), sigma=k)


def doc_list(c: Corpus):
    return [list(map(int, x)) for x in c.docs]


def as_list(x):
    return [int(v) for v in np.asarray(x).reshape(-1)]
