"""Caption-video scorers: lexical baselines plus external score ingestion.

Lexical scorers proxy the video by its ground-truth caption, which makes the
perfect-scorer oracle and near-random behaviors constructible without any
neural model. Scores from real retrieval models are ingested from CSV.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, tokenize
from .errors import LengthMismatch, NonFiniteScore, UnknownCaption
from .negatives import EvalSuite


@dataclass
class CandidateScores:
    caption_id: str
    pos: str
    scores: list[float]  # index 0 = ground truth, 1..K = negatives in suite order


@dataclass
class ScoreMatrix:
    video_ids: list[str]
    caption_ids: list[str]
    values: np.ndarray  # shape (videos, captions)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.video_ids), len(self.caption_ids)):
            raise ValueError("matrix dimensions do not match id lists")
        if not np.isfinite(self.values).all():
            raise NonFiniteScore("score matrix contains non-finite entries")


class TfidfScorer:
    """Cosine similarity of tf-idf vectors; idf = ln((1+D)/(1+df)) + 1."""

    def __init__(self):
        self.df: Counter = Counter()
        self.n_docs = 0

    def fit(self, corpus: Corpus) -> "TfidfScorer":
        for cap in corpus.captions:
            for word in set(tokenize(cap.text)):
                self.df[word] += 1
        self.n_docs = len(corpus.captions)
        return self

    def idf(self, word: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.df.get(word, 0))) + 1.0

    def _vector(self, text: str) -> dict[str, float]:
        tf = Counter(tokenize(text))
        return {w: c * self.idf(w) for w, c in tf.items()}

    def score_pair(self, video_proxy: str, candidate: str) -> float:
        a, b = self._vector(video_proxy), self._vector(candidate)
        dot = sum(v * b[w] for w, v in a.items() if w in b)
        na = math.sqrt(sum(v * v for v in a.values()))
        nb = math.sqrt(sum(v * v for v in b.values()))
        if na == 0.0 or nb == 0.0:
            return 0.0
        return dot / (na * nb)


class ExactMatchScorer:
    """Perfect-scorer oracle: 1.0 on exact text match with the proxy, else 0."""

    def fit(self, corpus: Corpus) -> "ExactMatchScorer":
        return self

    def score_pair(self, video_proxy: str, candidate: str) -> float:
        return 1.0 if video_proxy == candidate else 0.0


SCORERS = {"tfidf": TfidfScorer, "exact": ExactMatchScorer}


def score_suite(suite: EvalSuite, corpus: Corpus, scorer) -> list[CandidateScores]:
    """Score every candidate set in a suite with a lexical scorer."""
    texts = {cap.caption_id: cap.text for cap in corpus.captions}
    out = []
    for (cid, pos), ns in sorted(suite.sets.items()):
        if cid not in texts:
            raise UnknownCaption(cid)
        proxy = " ".join(tokenize(texts[cid]))
        scores = [scorer.score_pair(proxy, proxy)]
        scores.extend(scorer.score_pair(proxy, t) for t in ns.texts())
        out.append(CandidateScores(cid, pos, scores))
    return out


def load_external_scores(stream, suite: EvalSuite) -> list[CandidateScores]:
    """Read `caption_id,pos,s0,...,sK` CSV rows validated against the suite."""
    out = []
    for rowno, row in enumerate(csv.reader(stream), 1):
        if not row:
            continue
        if rowno == 1 and row[:2] == ["caption_id", "pos"]:
            continue
        cid, pos = row[0], row[1]
        key = (cid, pos)
        if key not in suite.sets:
            raise UnknownCaption(f"row {rowno}: ({cid}, {pos}) not in suite")
        expected = 1 + len(suite.sets[key].negatives)
        values = row[2:]
        if len(values) != expected:
            raise LengthMismatch(
                f"row {rowno}: expected {expected} scores, got {len(values)}")
        try:
            scores = [float(v) for v in values]
        except ValueError as exc:
            raise NonFiniteScore(f"row {rowno}: {exc}") from None
        if not all(math.isfinite(s) for s in scores):
            raise NonFiniteScore(f"row {rowno}: non-finite score")
        out.append(CandidateScores(cid, pos, scores))
    return out


def load_score_matrix(stream) -> ScoreMatrix:
    """CSV with a header row of caption ids and one row per video id."""
    rows = list(csv.reader(stream))
    if not rows:
        raise ValueError("empty score matrix stream")
    caption_ids = rows[0][1:]
    video_ids, values = [], []
    for row in rows[1:]:
        if not row:
            continue
        video_ids.append(row[0])
        values.append([float(v) for v in row[1:]])
    return ScoreMatrix(video_ids, caption_ids, np.array(values, dtype=float))


def save_score_matrix(matrix: ScoreMatrix, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(["video_id"] + list(matrix.caption_ids))
    for vid, row in zip(matrix.video_ids, matrix.values):
        writer.writerow([vid] + [repr(float(v)) for v in row])
