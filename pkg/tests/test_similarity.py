import io
import math

import pytest

from posrank.errors import LengthMismatch, NonFiniteScore, UnknownCaption
from posrank.negatives import gen_eval_suite
from posrank.similarity import (ExactMatchScorer, TfidfScorer,
                                load_external_scores, load_score_matrix,
                                save_score_matrix, score_suite, ScoreMatrix)


@pytest.fixture(scope="module")
def tfidf(small_corpus):
    return TfidfScorer().fit(small_corpus)


class TestTfidf:
    def test_identical_texts(self, tfidf):
        assert tfidf.score_pair("a boy runs", "a boy runs") == pytest.approx(1.0)

    def test_disjoint_texts(self, tfidf):
        assert tfidf.score_pair("a boy runs", "the girl walked") == 0.0

    def test_one_word_difference_strictly_between(self, tfidf):
        s = tfidf.score_pair("a boy runs", "a girl runs")
        assert 0.0 < s < 1.0

    def test_symmetry(self, tfidf):
        a, b = "a boy wearing a black t-shirt", "a girl runs quickly"
        assert tfidf.score_pair(a, b) == pytest.approx(tfidf.score_pair(b, a))

    def test_unseen_token_idf(self, tfidf, small_corpus):
        d = len(small_corpus.captions)
        assert tfidf.idf("zzzgibberish") == pytest.approx(math.log(1 + d) + 1)

    def test_single_caption_corpus_equal_idf(self, mini_lex):
        import posrank.corpus as pc
        corpus = pc.load_corpus(io.StringIO('{"video_id":"v1","text":"a boy runs"}\n'))
        scorer = TfidfScorer().fit(corpus)
        idfs = {scorer.idf(w) for w in ["a", "boy", "runs"]}
        assert len(idfs) == 1


def test_exact_match_scorer():
    scorer = ExactMatchScorer()
    assert scorer.score_pair("a boy", "a boy") == 1.0
    assert scorer.score_pair("a boy", "a girl") == 0.0


def test_score_suite_shapes(small_corpus, mini_lex, small_vocab):
    suite = gen_eval_suite(small_corpus, mini_lex, small_vocab, k=3, seed=0)
    sets = score_suite(suite, small_corpus, TfidfScorer().fit(small_corpus))
    assert len(sets) == len(suite.sets)
    for cs in sets:
        assert len(cs.scores) == 1 + len(suite.sets[(cs.caption_id, cs.pos)].negatives)
        assert all(math.isfinite(s) for s in cs.scores)


class TestExternalScores:
    @pytest.fixture()
    def suite(self, small_corpus, mini_lex, small_vocab):
        return gen_eval_suite(small_corpus, mini_lex, small_vocab, k=2, seed=0)

    def _row(self, suite, n_scores):
        (cid, pos), ns = sorted(suite.sets.items())[0]
        return f"{cid},{pos}," + ",".join(["0.5"] * n_scores)

    def test_valid_row(self, suite):
        (cid, pos), ns = sorted(suite.sets.items())[0]
        row = f"{cid},{pos},0.9" + ",0.1" * len(ns.negatives)
        out = load_external_scores(io.StringIO(row + "\n"), suite)
        assert out[0].scores[0] == 0.9

    def test_unknown_caption(self, suite):
        with pytest.raises(UnknownCaption):
            load_external_scores(io.StringIO("nope#0,noun,0.9,0.1\n"), suite)

    def test_length_mismatch(self, suite):
        (cid, pos), ns = sorted(suite.sets.items())[0]
        row = self._row(suite, len(ns.negatives) + 2)
        with pytest.raises(LengthMismatch):
            load_external_scores(io.StringIO(row + "\n"), suite)

    def test_nan_rejected(self, suite):
        (cid, pos), ns = sorted(suite.sets.items())[0]
        row = f"{cid},{pos},nan" + ",0.1" * len(ns.negatives)
        with pytest.raises(NonFiniteScore):
            load_external_scores(io.StringIO(row + "\n"), suite)


def test_score_matrix_round_trip():
    m = ScoreMatrix(["v1", "v2"], ["c1", "c2", "c3"],
                    [[1.0, 0.25, 0.0], [0.5, 0.75, 1.0]])
    buf = io.StringIO()
    save_score_matrix(m, buf)
    loaded = load_score_matrix(io.StringIO(buf.getvalue()))
    assert loaded.video_ids == m.video_ids
    assert loaded.caption_ids == m.caption_ids
    assert (loaded.values == m.values).all()


def test_score_matrix_rejects_nan():
    with pytest.raises(NonFiniteScore):
        ScoreMatrix(["v1"], ["c1"], [[float("nan")]])
