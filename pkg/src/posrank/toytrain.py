"""Desk-scale contrastive trainer verifying the coarse/fine training objectives.

A tiny embedding model is trained on a synthetic compositional dataset where
each "video" is a latent tuple of five attribute words (noun, verb, adjective,
adverb, preposition) and its caption is a fixed template over those words.
Four strategies are supported: coarse-only InfoNCE, word-level negatives,
phrase-level negatives, and a dual-head setup where a separate output head
specializes in fine-grained similarity.

Gradients are hand-derived and verified against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, PosVocabulary, TaggedCaption, Token, build_vocabulary
from .errors import DivergenceDetected, NonFiniteScore
from .lexicon import Lexicon
from .metrics import coarse_report, posrank_report
from .negatives import gen_eval_suite, gen_training_negatives, item_rng
from .similarity import CandidateScores, ScoreMatrix

STRATEGIES = ("coarse", "word", "phrase", "prompt")

_POS_WORDS = {
    "noun": ["dog", "cat", "boy", "girl", "bird", "horse", "truck", "ball"],
    "verb": ["runs", "jumps", "sleeps", "walks", "rolls", "spins", "falls", "slides"],
    "adj": ["red", "blue", "big", "small", "old", "young", "dark", "pale"],
    "adv": ["quickly", "slowly", "quietly", "loudly", "gently", "badly", "happily", "sadly"],
    "prep": ["under", "over", "near", "behind", "inside", "outside", "beside", "past"],
}
_SLOTS = ("adj", "noun", "verb", "adv", "prep")
_TEMPLATE_POS = ("other", "adj", "noun", "verb", "adv", "prep", "other", "other")
_FILLERS = ("the", "area")


def _template_caption(video_id: str, attrs: dict[str, str]) -> TaggedCaption:
    surfaces = ["the", attrs["adj"], attrs["noun"], attrs["verb"],
                attrs["adv"], attrs["prep"], "the", "area"]
    tokens = [Token(s, s, p) for s, p in zip(surfaces, _TEMPLATE_POS)]
    return TaggedCaption(video_id, f"{video_id}#0", " ".join(surfaces), tokens)


@dataclass
class SyntheticDataset:
    videos: list[dict[str, str]]           # latent attribute tuples
    corpus: Corpus                         # one templated caption per video
    train_idx: list[int]
    test_idx: list[int]
    batch_size: int
    word_index: dict[str, int]             # token -> embedding row
    vocab: PosVocabulary = None
    lexicon: Lexicon = field(default_factory=Lexicon)

    @property
    def n_words(self) -> int:
        return len(self.word_index)

    def token_ids(self, text: str) -> np.ndarray:
        return np.array([self.word_index[w] for w in text.split()], dtype=int)

    def attr_ids(self, video_idx: int) -> np.ndarray:
        attrs = self.videos[video_idx]
        return np.array([self.word_index[attrs[s]] for s in _SLOTS], dtype=int)


def make_synthetic_dataset(n_videos: int = 512, batch_size: int = 64,
                           test_fraction: float = 0.125,
                           seed: int = 0) -> SyntheticDataset:
    rng = item_rng(seed, "synthetic-dataset")
    videos = [{slot: rng.choice(_POS_WORDS[slot]) for slot in _SLOTS}
              for _ in range(n_videos)]
    # every attribute word must occur in at least two videos
    for slot in _SLOTS:
        for word in _POS_WORDS[slot]:
            holders = [i for i, v in enumerate(videos) if v[slot] == word]
            while len(holders) < 2:
                i = rng.randrange(n_videos)
                if i not in holders:
                    videos[i][slot] = word
                    holders.append(i)
    corpus = Corpus()
    for i, attrs in enumerate(videos):
        cap = _template_caption(f"vid{i:04d}", attrs)
        corpus.captions.append(cap)
        corpus.by_video[cap.video_id] = [cap.caption_id]
    order = list(range(n_videos))
    rng.shuffle(order)
    n_test = max(1, int(round(n_videos * test_fraction)))
    test_idx = sorted(order[:n_test])
    train_idx = sorted(order[n_test:])
    words = sorted({w for ws in _POS_WORDS.values() for w in ws} | set(_FILLERS))
    word_index = {w: i for i, w in enumerate(words)}
    return SyntheticDataset(videos=videos, corpus=corpus, train_idx=train_idx,
                            test_idx=test_idx, batch_size=batch_size,
                            word_index=word_index, vocab=build_vocabulary(corpus))


# --------------------------------------------------------------------------
# losses (contract surface; the trainer reuses these for loss values)

def coarse_loss(S: np.ndarray) -> float:
    """Symmetric InfoNCE over a square similarity matrix (diagonal = matched)."""
    S = np.asarray(S, dtype=float)
    B = S.shape[0]
    if S.shape != (B, B):
        raise ValueError("similarity matrix must be square")
    lse_rows = np.logaddexp.reduce(S, axis=1)
    lse_cols = np.logaddexp.reduce(S, axis=0)
    diag = np.diag(S)
    return float(np.mean(lse_rows - diag) + np.mean(lse_cols - diag))


def fine_loss(pos_score: float, neg_scores, exclusive: bool = False) -> float:
    """Contrastive loss of one positive against its hard negatives.

    By default the positive is included in the denominator (standard InfoNCE),
    which keeps the loss non-negative; exclusive=True uses a negatives-only
    denominator, permitting negative values.
    """
    neg = np.asarray(list(neg_scores), dtype=float)
    z = neg if exclusive else np.concatenate(([pos_score], neg))
    return float(np.logaddexp.reduce(z) - pos_score)


def combined_loss(coarse: float, fine: float, lam: float) -> float:
    return coarse + lam * fine


# --------------------------------------------------------------------------
# model

@dataclass
class ToyTrainConfig:
    strategy: str = "coarse"
    lam: float = 0.2
    n_negatives: int = 16
    epochs: int = 40
    lr: float = 2.0
    seed: int = 0
    d: int = 32
    temperature: float = 0.05
    k_eval: int = 20
    exclusive_denominator: bool = False
    vocab_sampling: str = "frequency"


class ToyModel:
    """Word-embedding table, video bias, and two linear output heads."""

    def __init__(self, n_words: int, d: int, rng: np.random.Generator):
        self.d = d
        self.params = {
            "E": rng.normal(scale=0.1, size=(n_words, d)),
            "b": rng.normal(scale=0.1, size=d),
            "Wc": np.eye(d) + rng.normal(scale=0.01, size=(d, d)),
            "Wf": np.eye(d) + rng.normal(scale=0.01, size=(d, d)),
        }

    def encode_text(self, ids: np.ndarray) -> np.ndarray:
        c = self.params["E"][np.atleast_2d(ids)].mean(axis=1)
        return c / np.linalg.norm(c, axis=1, keepdims=True)

    def encode_video(self, attr_ids: np.ndarray, head: str) -> np.ndarray:
        u = self.params["E"][np.atleast_2d(attr_ids)].mean(axis=1) + self.params["b"]
        h = u @ self.params[head].T
        return h / np.linalg.norm(h, axis=1, keepdims=True)

    def zero_grads(self) -> dict[str, np.ndarray]:
        return {name: np.zeros_like(p) for name, p in self.params.items()}


def _norm_backward(norms: np.ndarray, y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    # y = x/||x||;  dx = (dy - (dy.y) y) / ||x||
    return (dy - (dy * y).sum(axis=1, keepdims=True) * y) / norms


class _Text:
    """Forward/backward for a (N, L) block of token ids."""

    def __init__(self, model: ToyModel, ids: np.ndarray):
        self.ids = np.atleast_2d(ids)
        c = model.params["E"][self.ids].mean(axis=1)
        self.norms = np.linalg.norm(c, axis=1, keepdims=True)
        self.t = c / self.norms

    def backward(self, dt: np.ndarray, grads) -> None:
        dc = _norm_backward(self.norms, self.t, dt)            # (N, d)
        L = self.ids.shape[1]
        contrib = np.repeat(dc / L, L, axis=0)                 # (N*L, d)
        np.add.at(grads["E"], self.ids.reshape(-1), contrib)


class _Video:
    """Forward/backward for a (N, 5) block of attribute ids through a head."""

    def __init__(self, model: ToyModel, attr_ids: np.ndarray, head: str):
        self.attr_ids = np.atleast_2d(attr_ids)
        self.head = head
        self.W = model.params[head]
        self.u = model.params["E"][self.attr_ids].mean(axis=1) + model.params["b"]
        h = self.u @ self.W.T
        self.norms = np.linalg.norm(h, axis=1, keepdims=True)
        self.v = h / self.norms

    def backward(self, dv: np.ndarray, grads) -> None:
        dh = _norm_backward(self.norms, self.v, dv)            # (N, d)
        grads[self.head] += dh.T @ self.u
        du = dh @ self.W                                       # (N, d)
        grads["b"] += du.sum(axis=0)
        n_attr = self.attr_ids.shape[1]
        contrib = np.repeat(du / n_attr, n_attr, axis=0)
        np.add.at(grads["E"], self.attr_ids.reshape(-1), contrib)


@dataclass
class Batch:
    attr_ids: np.ndarray                       # (B, 5)
    caption_ids: np.ndarray                    # (B, L)
    fine_candidates: list[np.ndarray]          # per sample (1+M, L), row 0 = positive


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max())
    return e / e.sum()


def loss_and_grads(model: ToyModel, batch: Batch, cfg: ToyTrainConfig):
    """Combined objective value and analytic gradients for one batch.

    Returns (total, coarse part, fine part, grads). The fine term and its
    gradients are weighted by cfg.lam inside the total, matching the combined
    objective.
    """
    grads = model.zero_grads()
    tau = cfg.temperature
    B = batch.attr_ids.shape[0]

    vid_c = _Video(model, batch.attr_ids, "Wc")
    txt = _Text(model, batch.caption_ids)
    S = (vid_c.v @ txt.t.T) / tau
    l_coarse = coarse_loss(S)
    P_rows = np.exp(S - np.logaddexp.reduce(S, axis=1, keepdims=True))
    P_cols = np.exp(S - np.logaddexp.reduce(S, axis=0, keepdims=True))
    dS = (P_rows - np.eye(B)) / B + (P_cols - np.eye(B)) / B
    vid_c.backward((dS @ txt.t) / tau, grads)
    txt.backward((dS.T @ vid_c.v) / tau, grads)

    l_fine = 0.0
    if cfg.strategy != "coarse":
        fine_head = "Wf" if cfg.strategy == "prompt" else "Wc"
        vid_f = _Video(model, batch.attr_ids, fine_head)
        dv_f = np.zeros_like(vid_f.v)
        for i, cand_ids in enumerate(batch.fine_candidates):
            if cand_ids.shape[0] < 2:
                continue
            cand = _Text(model, cand_ids)
            z = (cand.t @ vid_f.v[i]) / tau
            l_fine += fine_loss(z[0], z[1:], cfg.exclusive_denominator)
            if cfg.exclusive_denominator:
                dz = np.concatenate(([-1.0], _softmax(z[1:])))
            else:
                dz = _softmax(z)
                dz[0] -= 1.0
            dz *= cfg.lam / B
            dv_f[i] += (cand.t.T @ dz) / tau
            cand.backward(np.outer(dz, vid_f.v[i]) / tau, grads)
        l_fine /= B
        vid_f.backward(dv_f, grads)

    total = combined_loss(l_coarse, l_fine, cfg.lam)
    return total, l_coarse, l_fine, grads


def grad_check(model: ToyModel, batch: Batch, cfg: ToyTrainConfig,
               epsilon: float = 1e-5) -> float:
    """Max relative error of analytic gradients vs. central finite differences."""
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon out of range")
    _, _, _, analytic = loss_and_grads(model, batch, cfg)

    def objective() -> float:
        total, _, _, _ = loss_and_grads(model, batch, cfg)
        return total

    max_err = 0.0
    for name, p in model.params.items():
        flat = p.reshape(-1)
        for idx in range(flat.size):
            orig = flat[idx]
            flat[idx] = orig + epsilon
            plus = objective()
            flat[idx] = orig - epsilon
            minus = objective()
            flat[idx] = orig
            numeric = (plus - minus) / (2 * epsilon)
            a = analytic[name].reshape(-1)[idx]
            err = abs(a - numeric) / max(abs(a), abs(numeric), 1e-2)
            max_err = max(max_err, err)
    return max_err


# --------------------------------------------------------------------------
# training loop

def _build_batch(model_dataset: SyntheticDataset, idxs: list[int], cfg: ToyTrainConfig,
                 epoch: int) -> Batch:
    ds = model_dataset
    attr_ids = np.stack([ds.attr_ids(i) for i in idxs])
    caption_ids = np.stack([ds.token_ids(ds.corpus.captions[i].text) for i in idxs])
    fine_candidates = []
    level = "phrase" if cfg.strategy == "phrase" else "word"
    epoch_seed = item_rng(cfg.seed, "epoch", epoch).getrandbits(63)
    for i in idxs:
        cap = ds.corpus.captions[i]
        rows = [ds.token_ids(cap.text)]
        if cfg.strategy != "coarse":
            texts = gen_training_negatives(cap, cfg.n_negatives, level,
                                           ds.lexicon, ds.vocab, epoch_seed,
                                           cfg.vocab_sampling)
            rows.extend(ds.token_ids(t) for t in texts)
        fine_candidates.append(np.stack(rows))
    return Batch(attr_ids, caption_ids, fine_candidates)


def _eval_model(model: ToyModel, ds: SyntheticDataset, cfg: ToyTrainConfig,
                suite, caption_of_video) -> dict:
    head_fine = "Wf" if cfg.strategy == "prompt" else "Wc"
    test_caps = [ds.corpus.captions[i] for i in ds.test_idx]
    attr_block = np.stack([ds.attr_ids(i) for i in ds.test_idx])
    txt_block = np.stack([ds.token_ids(c.text) for c in test_caps])
    S = model.encode_video(attr_block, "Wc") @ model.encode_text(txt_block).T
    matrix = ScoreMatrix([c.video_id for c in test_caps],
                         [c.caption_id for c in test_caps], S)
    gt_pairs = [(c.video_id, c.caption_id) for c in test_caps]
    v2t = coarse_report(matrix, gt_pairs, "v2t")
    t2v = coarse_report(matrix, gt_pairs, "t2v")

    video_vec = {test_caps[r].caption_id: model.encode_video(attr_block[r], head_fine)[0]
                 for r in range(len(test_caps))}
    sets = []
    for (cid, pos), ns in suite.sets.items():
        v = video_vec[cid]
        texts = [caption_of_video[cid]] + ns.texts()
        t = model.encode_text(np.stack([ds.token_ids(x) for x in texts]))
        sets.append(CandidateScores(cid, pos, list(t @ v)))
    fine = posrank_report(sets)
    return {"coarse_v2t": v2t.mean_recall, "coarse_t2v": t2v.mean_recall,
            "posrank": fine.to_dict()}


def train_toy(dataset: SyntheticDataset, cfg: ToyTrainConfig):
    """Full-batch gradient descent; returns (model, per-epoch metric trace).

    One parameter update per epoch, with gradients accumulated over a fixed
    partition of the training set into batches of the dataset's batch size.
    """
    if cfg.strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {cfg.strategy!r}")
    rng = np.random.default_rng(cfg.seed)
    model = ToyModel(dataset.n_words, cfg.d, rng)

    suite = gen_eval_suite(
        Corpus(captions=[dataset.corpus.captions[i] for i in dataset.test_idx]),
        dataset.lexicon, dataset.vocab, k=cfg.k_eval,
        seed=item_rng(cfg.seed, "eval-suite").getrandbits(63),
        vocab_sampling=cfg.vocab_sampling)
    caption_text = {c.caption_id: c.text for c in dataset.corpus.captions}

    batches = [dataset.train_idx[i:i + dataset.batch_size]
               for i in range(0, len(dataset.train_idx), dataset.batch_size)]
    batches = [b for b in batches if len(b) > 1]

    trace = []
    for epoch in range(cfg.epochs):
        grads = model.zero_grads()
        loss_sum = 0.0
        for idxs in batches:
            batch = _build_batch(dataset, idxs, cfg, epoch)
            total, _, _, g = loss_and_grads(model, batch, cfg)
            loss_sum += total
            for name in grads:
                grads[name] += g[name]
        loss = loss_sum / len(batches)
        if not np.isfinite(loss):
            raise DivergenceDetected(f"loss became non-finite at epoch {epoch}")
        for name, p in model.params.items():
            p -= cfg.lr * grads[name] / len(batches)
            if not np.all(np.isfinite(p)):
                raise DivergenceDetected(
                    f"parameter {name!r} became non-finite at epoch {epoch}")
        record = {"epoch": epoch, "loss": loss}
        try:
            record.update(_eval_model(model, dataset, cfg, suite, caption_text))
        except NonFiniteScore as exc:
            raise DivergenceDetected(
                f"similarity scores became non-finite at epoch {epoch}") from exc
        trace.append(record)
    return model, trace
