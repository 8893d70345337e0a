"""WordNet 3.x plain-text database parsing and antonym/hypernym/hyponym lookup.

Works directly on the `index.{noun,verb,adj,adv}` / `data.{noun,verb,adj,adv}`
files, no external lexical services. Only the relations needed for replacement
selection are kept: antonym, hypernym, hyponym and similar-to; everything else
in the source files is parsed and discarded.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import MalformedLine

POS_CLASSES = ("noun", "verb", "adj", "adv")

# file pos-character -> pos class; adjective satellites live in data.adj
_POSCHAR_TO_CLASS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}

# pointer symbols we keep (prefix-matched so '@i' and '~i' fold in)
_RELATION_OF_SYMBOL = {"!": "antonym", "@": "hypernym", "~": "hyponym", "&": "similar"}


@dataclass(frozen=True)
class Pointer:
    relation: str          # antonym | hypernym | hyponym | similar
    target: str            # synset id
    source_index: int      # 1-based lemma number in the source synset, 0 = whole synset
    target_index: int      # 1-based lemma number in the target synset, 0 = whole synset


@dataclass(frozen=True)
class Synset:
    id: str
    pos_class: str
    lemmas: tuple[str, ...]
    pointers: tuple[Pointer, ...]


@dataclass
class Lexicon:
    synsets: dict[str, Synset] = field(default_factory=dict)
    lemma_index: dict[tuple[str, str], list[str]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def synsets_of(self, lemma: str, pos: str) -> list[Synset]:
        return [self.synsets[sid] for sid in self.lemma_index.get((lemma.lower(), pos), ())]

    def num_senses(self, lemma: str, pos: str) -> int:
        return len(self.lemma_index.get((lemma.lower(), pos), ()))

    def __contains__(self, key: tuple[str, str]) -> bool:
        lemma, pos = key
        return (lemma.lower(), pos) in self.lemma_index


_CLASS_TO_IDCHAR = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}


def synset_id(pos_char: str, offset: int) -> str:
    return f"{_CLASS_TO_IDCHAR[_POSCHAR_TO_CLASS[pos_char]]}{offset:08d}"


def _id_for_class(pos_class: str, offset: int) -> str:
    return f"{_CLASS_TO_IDCHAR[pos_class]}{offset:08d}"


def _is_header(line: str) -> bool:
    return line.startswith("  ")


def _parse_data_line(line: str, filename: str, lineno: int) -> Synset:
    head = line.split("|", 1)[0]
    fields = head.split()
    try:
        offset = int(fields[0])
        ss_type = fields[2]
        pos_class = _POSCHAR_TO_CLASS[ss_type]
        w_cnt = int(fields[3], 16)
        lemmas = tuple(fields[4 + 2 * i].lower() for i in range(w_cnt))
        at = 4 + 2 * w_cnt
        p_cnt = int(fields[at])
        pointers = []
        at += 1
        for _ in range(p_cnt):
            symbol, t_offset, t_pos, st = fields[at:at + 4]
            at += 4
            relation = _RELATION_OF_SYMBOL.get(symbol[0])
            if relation is None or (symbol[0] == "~" and symbol not in ("~", "~i")):
                continue  # member/instance/other relations are discarded
            if len(st) != 4:
                raise ValueError(f"bad source/target field {st!r}")
            pointers.append(Pointer(
                relation=relation,
                target=synset_id(t_pos, int(t_offset)),
                source_index=int(st[:2], 16),
                target_index=int(st[2:], 16),
            ))
    except (IndexError, ValueError, KeyError) as exc:
        raise MalformedLine(filename, lineno, f"cannot parse data line: {exc}") from None
    if not lemmas:
        raise MalformedLine(filename, lineno, "synset with zero lemmas")
    return Synset(id=synset_id(ss_type, offset), pos_class=pos_class,
                  lemmas=lemmas, pointers=tuple(pointers))


def _parse_index_line(line: str, filename: str, lineno: int):
    fields = line.split()
    try:
        lemma = fields[0].lower()
        pos_class = _POSCHAR_TO_CLASS[fields[1]]
        synset_cnt = int(fields[2])
        offsets = [int(x) for x in fields[-synset_cnt:]]
    except (IndexError, ValueError, KeyError) as exc:
        raise MalformedLine(filename, lineno, f"cannot parse index line: {exc}") from None
    return lemma, pos_class, offsets


def parse_lexicon(index_streams: dict, data_streams: dict) -> Lexicon:
    """Parse per-POS index/data text streams into a Lexicon.

    Both arguments map a pos class ('noun', 'verb', 'adj', 'adv') to an
    iterable of lines. Index streams may be empty/absent, in which case the
    lemma index is derived from the data files alone. Dangling pointers are
    collected as warnings and dropped; malformed lines are fatal.
    """
    lex = Lexicon()
    for pos_class, stream in data_streams.items():
        name = f"data.{pos_class}"
        for lineno, line in enumerate(stream, 1):
            if _is_header(line) or not line.strip():
                continue
            syn = _parse_data_line(line.rstrip("\n"), name, lineno)
            lex.synsets[syn.id] = syn

    seen = set()
    for pos_class, stream in (index_streams or {}).items():
        name = f"index.{pos_class}"
        for lineno, line in enumerate(stream, 1):
            if _is_header(line) or not line.strip():
                continue
            lemma, cls, offsets = _parse_index_line(line.rstrip("\n"), name, lineno)
            ids = []
            for off in offsets:
                sid = _id_for_class(cls, off)
                if sid in lex.synsets:
                    ids.append(sid)
                else:
                    lex.warnings.append(f"{name}:{lineno}: dangling synset offset {off} for {lemma!r}")
            if ids:
                lex.lemma_index[(lemma, cls)] = ids
                seen.update((lemma, cls) for lemma in (lemma,))

    # cover lemmas missing from (or absent) index files
    for sid in sorted(lex.synsets):
        syn = lex.synsets[sid]
        for lemma in syn.lemmas:
            key = (lemma, syn.pos_class)
            ids = lex.lemma_index.setdefault(key, [])
            if sid not in ids:
                ids.append(sid)

    # drop pointers whose target does not resolve, keep a warning
    for sid in list(lex.synsets):
        syn = lex.synsets[sid]
        kept = []
        for ptr in syn.pointers:
            if ptr.target in lex.synsets:
                kept.append(ptr)
            else:
                lex.warnings.append(f"{sid}: dangling {ptr.relation} pointer to {ptr.target}")
        if len(kept) != len(syn.pointers):
            lex.synsets[sid] = Synset(syn.id, syn.pos_class, syn.lemmas, tuple(kept))
    return lex


def load_wordnet_dir(path: str) -> Lexicon:
    """Load `index.*` / `data.*` files from a WordNet database directory."""
    suffix = {"noun": "noun", "verb": "verb", "adj": "adj", "adv": "adv"}
    index_streams, data_streams = {}, {}
    for cls, suf in suffix.items():
        data_file = os.path.join(path, f"data.{suf}")
        if os.path.exists(data_file):
            with open(data_file, encoding="utf-8") as f:
                data_streams[cls] = f.readlines()
        index_file = os.path.join(path, f"index.{suf}")
        if os.path.exists(index_file):
            with open(index_file, encoding="utf-8") as f:
                index_streams[cls] = f.readlines()
    return parse_lexicon(index_streams, data_streams)


def _antonym_targets(lex: Lexicon, syn: Synset, lemma_number: int | None):
    """(target synset id, target lemma index, lemma) reachable via antonym pointers.

    When lemma_number is given, lemma-level pointers from other lemmas of the
    synset are skipped; semantic (whole-synset) pointers always apply.
    """
    out = []
    for ptr in syn.pointers:
        if ptr.relation != "antonym":
            continue
        if lemma_number is not None and ptr.source_index not in (0, lemma_number):
            continue
        target = lex.synsets[ptr.target]
        if ptr.target_index == 0:
            for i, lem in enumerate(target.lemmas, 1):
                out.append((target.id, i, lem))
        elif ptr.target_index <= len(target.lemmas):
            out.append((target.id, ptr.target_index, target.lemmas[ptr.target_index - 1]))
    return out


def _ordered_unique(hits, excluded):
    out = []
    for _, _, lem in sorted(hits):
        if "_" in lem or lem in excluded or lem in out:
            continue
        out.append(lem)
    return out


def antonyms(lex: Lexicon, lemma: str, pos: str) -> list[str]:
    """Direct antonyms of a lemma, single-word, query excluded, deterministic order."""
    lemma = lemma.lower()
    hits = []
    for syn in lex.synsets_of(lemma, pos):
        number = syn.lemmas.index(lemma) + 1 if lemma in syn.lemmas else None
        hits.extend(_antonym_targets(lex, syn, number))
    return _ordered_unique(hits, {lemma})


def related_antonyms(lex: Lexicon, lemma: str, pos: str) -> list[str]:
    """Antonyms one hypernym/hyponym hop away (similar-to hop for adj/adv).

    Excludes the query lemma and its direct antonyms, so the result is always
    disjoint from antonyms().
    """
    lemma = lemma.lower()
    hop = ("similar",) if pos in ("adj", "adv") else ("hypernym", "hyponym")
    hits = []
    for syn in lex.synsets_of(lemma, pos):
        for ptr in syn.pointers:
            if ptr.relation not in hop:
                continue
            neighbor = lex.synsets[ptr.target]
            hits.extend(_antonym_targets(lex, neighbor, None))
    excluded = {lemma} | set(antonyms(lex, lemma, pos))
    return _ordered_unique(hits, excluded)
