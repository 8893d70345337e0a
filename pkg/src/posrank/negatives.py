"""Word-level and phrase-level hard-negative caption generation.

Replacement preference: direct antonym, then antonym reachable one
hypernym/hyponym (or similar-to) hop away, then a same-POS word from the
dataset vocabulary. Every negative differs from its source caption in exactly
one token (word level) or two adjacent perturbable tokens (phrase level).

All randomness is derived from a per-item 64-bit hash of (seed, caption_id,
pos, draw index), so generation is deterministic and order-independent across
captions.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from .corpus import (PERTURBABLE, Corpus, PosVocabulary, TaggedCaption, Token,
                     detokenize, lemmatize, tag_one)
from .errors import NoAdjacentPair, NoSuchPos
from .lexicon import Lexicon, antonyms, related_antonyms

RETRY_FACTOR = 10  # retry cap is RETRY_FACTOR * requested count


def item_rng(seed: int, *parts) -> random.Random:
    """Seeded generator keyed by a stable hash of (seed, *parts)."""
    digest = hashlib.blake2b(repr((seed,) + parts).encode(), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


@dataclass(frozen=True)
class Replacement:
    token_index: int
    original: str
    substitute: str
    source: str  # antonym | related_antonym | vocab


@dataclass
class NegativeSet:
    caption_id: str
    pos: str
    negatives: list[tuple[str, Replacement]] = field(default_factory=list)

    def texts(self) -> list[str]:
        return [t for t, _ in self.negatives]


@dataclass
class PhraseNegative:
    caption_id: str
    negatives: list[tuple[str, tuple[Replacement, Replacement]]] = field(default_factory=list)

    def texts(self) -> list[str]:
        return [t for t, _ in self.negatives]


@dataclass
class EvalSuite:
    seed: int
    k: int
    sets: dict[tuple[str, str], NegativeSet] = field(default_factory=dict)
    gaps: list[tuple[str, str]] = field(default_factory=list)  # (caption_id, pos) without that POS

    def total_negatives(self, pos: str | None = None) -> int:
        return sum(len(ns.negatives) for (cid, p), ns in self.sets.items()
                   if pos is None or p == pos)


def _keeps_pos(word: str, pos: str, lex: Lexicon) -> bool:
    return tag_one(word, lex).pos == pos


def select_replacement(token: Token, token_index: int, lex: Lexicon,
                       vocab: PosVocabulary, rng: random.Random,
                       exclude: set[str], vocab_sampling: str = "frequency",
                       ) -> Replacement | None:
    """Pick a substitute for one token, or None when every pool is exhausted."""
    banned = exclude | {token.surface, token.lemma}
    if token.pos != "prep":  # prepositions are closed-class, lexicon has no entries
        for source, pool_fn in (("antonym", antonyms), ("related_antonym", related_antonyms)):
            pool = [w for w in pool_fn(lex, token.lemma, token.pos)
                    if w not in banned and _keeps_pos(w, token.pos, lex)]
            if pool:
                return Replacement(token_index, token.surface, rng.choice(pool), source)
    entries = [(w, f) for w, f in vocab.of(token.pos) if w not in banned]
    if not entries:
        return None
    if vocab_sampling == "uniform":
        word = rng.choice([w for w, _ in entries])
    else:
        word = rng.choices([w for w, _ in entries], weights=[f for _, f in entries])[0]
    return Replacement(token_index, token.surface, word, "vocab")


def _substitute(caption: TaggedCaption, *reps: Replacement) -> str:
    surfaces = caption.token_surfaces()
    for rep in reps:
        surfaces[rep.token_index] = rep.substitute
    return detokenize(surfaces)


def gen_word_level(caption: TaggedCaption, pos: str, k: int, lex: Lexicon,
                   vocab: PosVocabulary, seed: int,
                   vocab_sampling: str = "frequency") -> NegativeSet:
    """Up to k distinct single-word negatives for one (caption, POS) pair."""
    idxs = [i for i, t in enumerate(caption.tokens) if t.pos == pos]
    if not idxs:
        raise NoSuchPos(f"{caption.caption_id}: no {pos} token")
    original = detokenize(caption.token_surfaces())
    out = NegativeSet(caption.caption_id, pos)
    seen = {original}
    used: dict[int, set[str]] = {i: set() for i in idxs}
    exhausted: set[int] = set()
    for draw in range(RETRY_FACTOR * k):
        if len(out.negatives) >= k or len(exhausted) == len(idxs):
            break
        rng = item_rng(seed, caption.caption_id, pos, draw)
        i = rng.choice(idxs)
        if i in exhausted:
            continue
        rep = select_replacement(caption.tokens[i], i, lex, vocab, rng,
                                 used[i], vocab_sampling)
        if rep is None:
            exhausted.add(i)
            continue
        used[i].add(rep.substitute)
        text = _substitute(caption, rep)
        if text in seen:
            continue
        seen.add(text)
        out.negatives.append((text, rep))
    return out


def gen_phrase_level(caption: TaggedCaption, count: int, lex: Lexicon,
                     vocab: PosVocabulary, seed: int,
                     vocab_sampling: str = "frequency") -> PhraseNegative:
    """Negatives replacing two consecutive perturbable words.

    The second word is the coin-chosen neighbor of the first; when only one
    side qualifies that side is taken, and when neither does the first word is
    resampled.
    """
    pos_of = [t.pos for t in caption.tokens]
    p_idxs = [i for i, p in enumerate(pos_of) if p in PERTURBABLE]
    if not any(i + 1 < len(pos_of) and pos_of[i] in PERTURBABLE and pos_of[i + 1] in PERTURBABLE
               for i in range(len(pos_of))):
        raise NoAdjacentPair(f"{caption.caption_id}: no adjacent perturbable pair")
    original = detokenize(caption.token_surfaces())
    out = PhraseNegative(caption.caption_id)
    seen = {original}
    for draw in range(RETRY_FACTOR * count):
        if len(out.negatives) >= count:
            break
        rng = item_rng(seed, caption.caption_id, "phrase", draw)
        i = rng.choice(p_idxs)
        side = -1 if rng.random() < 0.5 else 1
        j = None
        for cand in (i + side, i - side):
            if 0 <= cand < len(pos_of) and pos_of[cand] in PERTURBABLE:
                j = cand
                break
        if j is None:
            continue
        i1, i2 = min(i, j), max(i, j)
        rep1 = select_replacement(caption.tokens[i1], i1, lex, vocab, rng,
                                  set(), vocab_sampling)
        rep2 = select_replacement(caption.tokens[i2], i2, lex, vocab, rng,
                                  set(), vocab_sampling)
        if rep1 is None or rep2 is None:
            continue
        text = _substitute(caption, rep1, rep2)
        if text in seen:
            continue
        seen.add(text)
        out.negatives.append((text, (rep1, rep2)))
    return out


def gen_eval_suite(corpus: Corpus, lex: Lexicon, vocab: PosVocabulary,
                   k: int = 20, seed: int = 0,
                   vocab_sampling: str = "frequency") -> EvalSuite:
    """One NegativeSet per (caption, POS present); records seed and K."""
    suite = EvalSuite(seed=seed, k=k)
    for cap in sorted(corpus.captions, key=lambda c: c.caption_id):
        for pos in PERTURBABLE:
            try:
                ns = gen_word_level(cap, pos, k, lex, vocab, seed, vocab_sampling)
            except NoSuchPos:
                suite.gaps.append((cap.caption_id, pos))
                continue
            if not ns.negatives:  # every candidate substitute was exhausted
                suite.gaps.append((cap.caption_id, pos))
                continue
            suite.sets[(cap.caption_id, pos)] = ns
    return suite


def gen_training_negatives(caption: TaggedCaption, n: int, level: str,
                           lex: Lexicon, vocab: PosVocabulary, seed: int,
                           vocab_sampling: str = "frequency") -> list[str]:
    """Training-time negatives; seed should already mix in the epoch."""
    if level == "phrase":
        try:
            return gen_phrase_level(caption, n, lex, vocab, seed, vocab_sampling).texts()
        except NoAdjacentPair:
            return []
    texts = []
    for pos in PERTURBABLE:
        try:
            texts.extend(gen_word_level(caption, pos, n, lex, vocab, seed,
                                        vocab_sampling).texts())
        except NoSuchPos:
            continue
    return texts


_POS_ORDER = {p: i for i, p in enumerate(PERTURBABLE)}


def save_suite(suite: EvalSuite, stream) -> None:
    meta = {"seed": suite.seed, "k": suite.k,
            "gaps": [list(g) for g in suite.gaps]}
    stream.write(json.dumps(meta) + "\n")
    for (cid, pos) in sorted(suite.sets, key=lambda kp: (kp[0], _POS_ORDER[kp[1]])):
        ns = suite.sets[(cid, pos)]
        rec = {"caption_id": cid, "pos": pos,
               "negatives": [{"text": t, "index": r.token_index, "orig": r.original,
                              "sub": r.substitute, "source": r.source}
                             for t, r in ns.negatives]}
        stream.write(json.dumps(rec) + "\n")


def load_suite(stream) -> EvalSuite:
    lines = [ln for ln in (l.rstrip("\n") for l in stream) if ln.strip()]
    if not lines:
        raise ValueError("empty suite stream")
    meta = json.loads(lines[0])
    suite = EvalSuite(seed=meta["seed"], k=meta["k"],
                      gaps=[tuple(g) for g in meta.get("gaps", [])])
    for line in lines[1:]:
        rec = json.loads(line)
        ns = NegativeSet(rec["caption_id"], rec["pos"])
        for item in rec["negatives"]:
            ns.negatives.append((item["text"],
                                 Replacement(item["index"], item["orig"],
                                             item["sub"], item["source"])))
        suite.sets[(ns.caption_id, ns.pos)] = ns
    return suite
