"""Caption corpus loading, tokenization, POS tagging and vocabulary building.

The tagger is deliberately simple and deterministic: closed-class word lists
first, then the dominant lexicon class of the lemma, then suffix heuristics.
Pre-tagged input (e.g. from a full parser) passes through untouched.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import CorpusLoadError, RecordError
from .lexicon import Lexicon

PERTURBABLE = ("noun", "verb", "adj", "adv", "prep")
TAGSET = PERTURBABLE + ("other",)

PREPOSITIONS = frozenset("""
    aboard about above across after against along alongside amid amidst among
    amongst around at atop before behind below beneath beside besides between
    beyond by concerning despite down during except for from in inside into
    like near of off on onto out outside over past per regarding since through
    throughout till to toward towards under underneath until unto up upon via
    with within without
""".split())

_DETERMINERS = """
    a an the this that these those each every some any no all both either
    neither few several many much most more less least enough such what which
    whose
""".split()
_PRONOUNS = """
    i you he she it we they me him her us them my your his its our their mine
    yours hers ours theirs myself yourself himself herself itself ourselves
    yourselves themselves who whom someone somebody something anyone anybody
    anything everyone everybody everything nobody nothing one
""".split()
_CONJUNCTIONS = """
    and or but nor so yet because although though while if unless whereas when
    whenever where wherever as than whether
""".split()
_AUXILIARIES = """
    am is are was were be been being do does did done have has had having will
    would shall should can could may might must ought not
""".split()

CLOSED_OTHER = frozenset(_DETERMINERS + _PRONOUNS + _CONJUNCTIONS + _AUXILIARIES)

# coarse tag mapping for pre-tagged input
_COARSE_TAG_MAP = {
    "NOUN": "noun", "PROPN": "noun", "VERB": "verb", "AUX": "verb",
    "ADJ": "adj", "ADV": "adv", "ADP": "prep",
}

_TERMINAL_PUNCT = ".,!?;:"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str


@dataclass
class TaggedCaption:
    video_id: str
    caption_id: str
    text: str
    tokens: list[Token] = field(default_factory=list)

    def token_surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass
class Corpus:
    captions: list[TaggedCaption] = field(default_factory=list)
    by_video: dict[str, list[str]] = field(default_factory=dict)

    def __len__(self):
        return len(self.captions)

    def __iter__(self):
        return iter(self.captions)

    def get(self, caption_id: str) -> TaggedCaption | None:
        for cap in self.captions:
            if cap.caption_id == caption_id:
                return cap
        return None


@dataclass
class PosVocabulary:
    # per perturbable class: list of (word, frequency), most frequent first
    words: dict[str, list[tuple[str, int]]] = field(default_factory=dict)

    def of(self, pos: str) -> list[tuple[str, int]]:
        return self.words.get(pos, [])

    def size(self) -> int:
        return sum(len(v) for v in self.words.values())


def tokenize(text: str) -> list[str]:
    """Lowercase whitespace tokenizer; terminal .,!?;: become their own tokens.

    Intra-word hyphens and apostrophes are preserved ("t-shirt", "man's").
    """
    out = []
    for chunk in text.lower().split():
        tail = []
        while len(chunk) > 1 and chunk[-1] in _TERMINAL_PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        out.append(chunk)
        out.extend(reversed(tail))
    return out


def detokenize(surfaces: list[str]) -> str:
    return " ".join(surfaces)


_LEMMA_RULES = {
    "noun": [("ies", "y"), ("ches", "ch"), ("shes", "sh"), ("ses", "s"),
             ("xes", "x"), ("zes", "z"), ("es", ""), ("s", "")],
    "verb": [("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"), ("ed", ""),
             ("ing", "e"), ("ing", "")],
    "adj": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    "adv": [],
}
_LEMMA_RULES["verb"].append(("s", ""))


def lemmatize(surface: str, pos: str, lex: Lexicon) -> str:
    """Suffix-stripping lemmatizer with the lexicon as validity oracle."""
    if (surface, pos) in lex:
        return surface
    for suffix, repl in _LEMMA_RULES.get(pos, ()):
        if surface.endswith(suffix) and len(surface) > len(suffix) + 1:
            candidate = surface[:-len(suffix)] + repl
            if (candidate, pos) in lex:
                return candidate
    return surface


def tag_one(surface: str, lex: Lexicon) -> Token:
    """Tag a single surface form independent of context."""
    if not any(c.isalnum() for c in surface):
        return Token(surface, surface, "other")
    if surface in PREPOSITIONS:
        return Token(surface, surface, "prep")
    if surface in CLOSED_OTHER:
        return Token(surface, surface, "other")
    best_pos, best_lemma, best_count = None, surface, 0
    for pos in ("noun", "verb", "adj", "adv"):  # tie-break priority order
        lemma = lemmatize(surface, pos, lex)
        count = lex.num_senses(lemma, pos)
        if count > best_count:
            best_pos, best_lemma, best_count = pos, lemma, count
    if best_pos is not None:
        return Token(surface, best_lemma, best_pos)
    if surface.endswith("ly") and len(surface) > 3:
        return Token(surface, surface, "adv")
    return Token(surface, surface, "other")


def tag_tokens(surfaces: list[str], lex: Lexicon) -> list[Token]:
    return [tag_one(s, lex) for s in surfaces]


def tag_caption(cap: TaggedCaption, lex: Lexicon) -> TaggedCaption:
    if cap.tokens:
        return cap
    return TaggedCaption(cap.video_id, cap.caption_id, cap.text,
                         tag_tokens(tokenize(cap.text), lex))


def tag_corpus(corpus: Corpus, lex: Lexicon) -> Corpus:
    tagged = Corpus(by_video=dict(corpus.by_video))
    tagged.captions = [tag_caption(c, lex) for c in corpus.captions]
    return tagged


def _normalize_pretag(tag: str) -> str:
    if tag in TAGSET:
        return tag
    return _COARSE_TAG_MAP.get(tag.upper(), "other")


def _record_to_caption(rec: dict, ordinal: int) -> TaggedCaption:
    tokens = []
    for item in rec.get("tokens") or ():
        surface, lemma, pos = item
        tokens.append(Token(surface, lemma, _normalize_pretag(pos)))
    caption_id = rec.get("caption_id") or f"{rec['video_id']}#{ordinal}"
    return TaggedCaption(rec["video_id"], caption_id, rec["text"], tokens)


def load_corpus(stream, format: str = "jsonl") -> Corpus:
    """Load a corpus from line-delimited JSONL or TSV records.

    All bad lines are collected before failing, so one pass reports every
    problem in the input.
    """
    corpus = Corpus()
    errors = []
    per_video = Counter()
    for lineno, line in enumerate(stream, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        try:
            if format == "jsonl":
                rec = json.loads(line)
                if "video_id" not in rec or "text" not in rec:
                    raise RecordError(lineno, "missing video_id or text")
            elif format == "tsv":
                parts = line.split("\t")
                if len(parts) < 2:
                    raise RecordError(lineno, "expected video_id<TAB>text")
                rec = {"video_id": parts[0], "text": parts[1]}
            else:
                raise ValueError(f"unknown format {format!r}")
            cap = _record_to_caption(rec, per_video[rec["video_id"]])
            per_video[rec["video_id"]] += 1
            corpus.captions.append(cap)
            corpus.by_video.setdefault(cap.video_id, []).append(cap.caption_id)
        except RecordError as exc:
            errors.append(exc)
        except (json.JSONDecodeError, TypeError) as exc:
            errors.append(RecordError(lineno, str(exc)))
    if errors:
        raise CorpusLoadError(errors)
    return corpus


def save_corpus(corpus: Corpus, stream) -> None:
    for cap in corpus.captions:
        rec = {
            "video_id": cap.video_id,
            "caption_id": cap.caption_id,
            "text": cap.text,
            "tokens": [[t.surface, t.lemma, t.pos] for t in cap.tokens],
        }
        stream.write(json.dumps(rec) + "\n")


def build_vocabulary(corpus: Corpus) -> PosVocabulary:
    """Per-POS word frequency lists over all (tagged) captions."""
    counts: dict[str, Counter] = {pos: Counter() for pos in PERTURBABLE}
    for cap in corpus.captions:
        for tok in cap.tokens:
            if tok.pos in counts:
                counts[tok.pos][tok.surface] += 1
    vocab = PosVocabulary()
    for pos, counter in counts.items():
        vocab.words[pos] = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return vocab
