import itertools

import pytest

from actorgame.term import enumerate_terms

CORPUS_PREFIX = 70  # smallest terms, taken verbatim
CORPUS_STRIDE = 37  # then every 37th, reaching well into depth-3 shapes
CORPUS_SAMPLED = 30
CORPUS_DEPTH = 3
CORPUS_WIDTH = 2


@pytest.fixture(scope="session")
def corpus():
    """100 terms per context size from the deterministic stream.

    The stream is ordered by node count, so a plain prefix would see
    only the smallest shapes. The first 70 are taken verbatim and the
    rest are strided deeper into the enumeration; the acceptance
    criteria run over exactly this set.
    """
    picked = {}
    for gamma in (0, 1, 2):
        stream = enumerate_terms(gamma, CORPUS_DEPTH, CORPUS_WIDTH)
        head = list(itertools.islice(stream, CORPUS_PREFIX))
        tail = list(
            itertools.islice(stream, 0, CORPUS_SAMPLED * CORPUS_STRIDE, CORPUS_STRIDE)
        )
        picked[gamma] = head + tail
    return picked


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return {gamma: terms[:25] for gamma, terms in corpus.items()}
