import io
import os

import pytest

from posrank.corpus import build_vocabulary, load_corpus, tag_corpus
from posrank.lexicon import load_wordnet_dir

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
MINI_WORDNET = os.path.join(DATA_DIR, "mini_wordnet")

CAPTIONS = [
    ("v1", "a boy wearing a black t-shirt"),
    ("v2", "a girl runs quickly under the table"),
    ("v3", "an old man walks slowly forward"),
    ("v4", "the big dog sleeps near a white coat"),
    ("v5", "a young woman starts to run fast"),
    ("v6", "a cat rises over the small shirt"),
]


@pytest.fixture(scope="session")
def mini_lex():
    return load_wordnet_dir(MINI_WORDNET)


@pytest.fixture(scope="session")
def small_corpus(mini_lex):
    lines = "".join(
        f'{{"video_id": "{vid}", "text": "{text}"}}\n' for vid, text in CAPTIONS)
    corpus = load_corpus(io.StringIO(lines))
    return tag_corpus(corpus, mini_lex)


@pytest.fixture(scope="session")
def small_vocab(small_corpus):
    return build_vocabulary(small_corpus)
