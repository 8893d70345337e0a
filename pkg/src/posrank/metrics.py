"""PoSRank (mean reciprocal rank per part-of-speech) and coarse retrieval metrics.

Ties default to the mid-rank rule, r = 1 + #strictly-greater + #ties/2, which
equals the expectation under uniform-random tie-breaking; optimistic ("best")
and pessimistic ("worst") modes are available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import PERTURBABLE
from .errors import EmptyInput, MissingGroundTruth
from .similarity import CandidateScores, ScoreMatrix

TIE_MODES = ("mid", "best", "worst")


@dataclass
class PoSRankReport:
    values: dict[str, float] = field(default_factory=dict)  # pos -> PoSRank
    counts: dict[str, int] = field(default_factory=dict)    # pos -> evaluated sets
    mean: float = 0.0

    def to_dict(self) -> dict:
        out = {pos: self.values[pos] for pos in PERTURBABLE if pos in self.values}
        out["mean"] = self.mean
        return out


@dataclass
class CoarseReport:
    direction: str  # v2t | t2v
    r1: float
    r5: float
    r10: float
    mean_recall: float
    average_rank: float

    def to_dict(self) -> dict:
        return {"direction": self.direction, "R@1": self.r1, "R@5": self.r5,
                "R@10": self.r10, "mean_recall": self.mean_recall,
                "average_rank": self.average_rank}


def _rank(target_score: float, competitor_scores, ties: str) -> float:
    greater = sum(1 for s in competitor_scores if s > target_score)
    equal = sum(1 for s in competitor_scores if s == target_score)
    if ties == "mid":
        return 1 + greater + equal / 2
    if ties == "best":
        return 1 + greater
    if ties == "worst":
        return 1 + greater + equal
    raise ValueError(f"unknown tie mode {ties!r}")


def reciprocal_rank(cs: CandidateScores, ties: str = "mid") -> float:
    """1/rank of the ground-truth score among its negatives."""
    return 1.0 / _rank(cs.scores[0], cs.scores[1:], ties)


def posrank(sets: list[CandidateScores], pos: str, ties: str = "mid") -> float:
    """Mean reciprocal rank over all candidate sets of one POS class."""
    values = [reciprocal_rank(cs, ties) for cs in sets if cs.pos == pos]
    if not values:
        raise EmptyInput(f"no candidate sets for pos {pos!r}")
    return sum(values) / len(values)


def posrank_report(sets: list[CandidateScores], ties: str = "mid") -> PoSRankReport:
    report = PoSRankReport()
    for pos in PERTURBABLE:
        pos_sets = [cs for cs in sets if cs.pos == pos]
        if not pos_sets:
            continue
        report.values[pos] = posrank(pos_sets, pos, ties)
        report.counts[pos] = len(pos_sets)
    if not report.values:
        raise EmptyInput("no candidate sets at all")
    report.mean = sum(report.values.values()) / len(report.values)
    return report


def _direction_views(matrix: ScoreMatrix, gt_pairs, direction: str):
    """Yield (query scores, ground-truth column indices) per query."""
    pairs = list(gt_pairs)
    if direction == "v2t":
        col_of = {cid: j for j, cid in enumerate(matrix.caption_ids)}
        gt = {}
        for vid, cid in pairs:
            gt.setdefault(vid, []).append(col_of[cid])
        for i, vid in enumerate(matrix.video_ids):
            if vid not in gt:
                raise MissingGroundTruth(f"video {vid!r} has no ground-truth caption")
            yield matrix.values[i, :], gt[vid]
    elif direction == "t2v":
        row_of = {vid: i for i, vid in enumerate(matrix.video_ids)}
        gt = {}
        for vid, cid in pairs:
            gt.setdefault(cid, []).append(row_of[vid])
        for j, cid in enumerate(matrix.caption_ids):
            if cid not in gt:
                raise MissingGroundTruth(f"caption {cid!r} has no ground-truth video")
            yield matrix.values[:, j], gt[cid]
    else:
        raise ValueError(f"unknown direction {direction!r}")


def _best_gt_rank(scores: np.ndarray, gt_indices, ties: str) -> float:
    """Rank of the best-scoring ground-truth candidate among all candidates."""
    best = max(gt_indices, key=lambda idx: scores[idx])
    others = np.delete(scores, best)
    return _rank(scores[best], others, ties)


def recall_at_k(matrix: ScoreMatrix, gt_pairs, k: int, direction: str,
                ties: str = "mid") -> float:
    """Percentage of queries whose best ground truth ranks within the top k."""
    hits, total = 0, 0
    for scores, gt in _direction_views(matrix, gt_pairs, direction):
        total += 1
        if _best_gt_rank(scores, gt, ties) <= k:
            hits += 1
    return 100.0 * hits / total


def average_rank(matrix: ScoreMatrix, gt_pairs, direction: str,
                 ties: str = "mid") -> float:
    ranks = [_best_gt_rank(scores, gt, ties)
             for scores, gt in _direction_views(matrix, gt_pairs, direction)]
    return float(np.mean(ranks))


def coarse_report(matrix: ScoreMatrix, gt_pairs, direction: str,
                  ties: str = "mid") -> CoarseReport:
    gt_pairs = list(gt_pairs)
    r1 = recall_at_k(matrix, gt_pairs, 1, direction, ties)
    r5 = recall_at_k(matrix, gt_pairs, 5, direction, ties)
    r10 = recall_at_k(matrix, gt_pairs, 10, direction, ties)
    return CoarseReport(direction, r1, r5, r10, (r1 + r5 + r10) / 3,
                        average_rank(matrix, gt_pairs, direction, ties))
