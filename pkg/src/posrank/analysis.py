"""Corpus diagnostics: POS-deletion duplicate analysis and summary statistics.

The deletion analysis removes n randomly chosen tokens of one POS from every
caption and counts how many residual captions collide with another caption's
residual. Removal sets are nested across n under the same seed, so the
duplicate fraction is non-decreasing in n by construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import PERTURBABLE, Corpus
from .errors import UnknownCaption
from .negatives import item_rng


def _removal_order(cap, pos: str, seed: int) -> list[int]:
    """Per-caption permutation of this POS's token indices; prefix = removal set."""
    idxs = [i for i, t in enumerate(cap.tokens) if t.pos == pos]
    rng = item_rng(seed, cap.caption_id, pos, "deletion")
    rng.shuffle(idxs)
    return idxs


def pos_deletion_duplicates(corpus: Corpus, pos: str, n_removed: int,
                            seed: int = 0, strict: bool = False) -> float:
    """Fraction of captions whose residual token sequence duplicates another.

    Captions with fewer than n_removed tokens of the POS have all of them
    removed; under strict=True those captions are excluded entirely.
    """
    if n_removed < 1:
        raise ValueError("n_removed must be >= 1")
    residuals = []
    for cap in corpus.captions:
        order = _removal_order(cap, pos, seed)
        if strict and len(order) < n_removed:
            continue
        removed = set(order[:n_removed])
        residuals.append(tuple(t.surface for i, t in enumerate(cap.tokens)
                               if i not in removed))
    if not residuals:
        return 0.0
    counts = Counter(residuals)
    duplicated = sum(1 for r in residuals if counts[r] > 1)
    return duplicated / len(residuals)


@dataclass
class CorpusStatistics:
    n_captions: int
    n_videos: int
    avg_length: float
    pos_fractions: dict[str, float]  # fraction of captions with >=1 token of each POS
    vocab_size: int

    def to_dict(self) -> dict:
        return {"captions": self.n_captions, "videos": self.n_videos,
                "avg_length": self.avg_length, "pos_fractions": self.pos_fractions,
                "vocab_size": self.vocab_size}


def corpus_statistics(corpus: Corpus) -> CorpusStatistics:
    n = len(corpus.captions)
    words = set()
    lengths = []
    has_pos = Counter()
    for cap in corpus.captions:
        lengths.append(len(cap.tokens))
        present = {t.pos for t in cap.tokens}
        for pos in PERTURBABLE:
            if pos in present:
                has_pos[pos] += 1
        words.update(t.surface for t in cap.tokens
                     if any(c.isalnum() for c in t.surface))
    return CorpusStatistics(
        n_captions=n,
        n_videos=len(corpus.by_video),
        avg_length=sum(lengths) / n if n else 0.0,
        pos_fractions={pos: (has_pos[pos] / n if n else 0.0) for pos in PERTURBABLE},
        vocab_size=len(words),
    )


def nearest_captions(corpus: Corpus, scorer, caption_id: str,
                     top_k: int) -> list[tuple[str, float]]:
    """Most similar other captions under a fitted lexical scorer."""
    query = corpus.get(caption_id)
    if query is None:
        raise UnknownCaption(caption_id)
    scored = []
    for cap in corpus.captions:
        if cap.caption_id == caption_id:
            continue
        scored.append((cap.caption_id, scorer.score_pair(query.text, cap.text)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:top_k]
