import pytest

from posrank.errors import MalformedLine
from posrank.lexicon import antonyms, load_wordnet_dir, parse_lexicon, related_antonyms

from conftest import MINI_WORDNET

HEADER = "  1 license header line\n  2 another header line\n"


def test_empty_streams():
    lex = parse_lexicon({}, {})
    assert lex.synsets == {}
    assert antonyms(lex, "fast", "adj") == []
    assert related_antonyms(lex, "fast", "adj") == []


def test_header_only_stream():
    lex = parse_lexicon({"adj": HEADER.splitlines()}, {"adj": HEADER.splitlines()})
    assert lex.synsets == {}


def test_malformed_data_line():
    with pytest.raises(MalformedLine):
        parse_lexicon({}, {"adj": ["00000100 00 a zz broken\n"]})


def test_dangling_pointer_is_warning_not_fatal():
    line = "00000100 00 a 01 fast 0 001 ! 99999999 a 0101 | gloss\n"
    lex = parse_lexicon({}, {"adj": [line]})
    assert len(lex.synsets) == 1
    assert any("dangling" in w for w in lex.warnings)
    assert antonyms(lex, "fast", "adj") == []


def test_fast_slow_antonym_pair(mini_lex):
    assert "fast" in antonyms(mini_lex, "slow", "adj")
    assert "slow" in antonyms(mini_lex, "fast", "adj")


def test_forward_backward_adverb(mini_lex):
    assert "backward" in antonyms(mini_lex, "forward", "adv")


def test_unknown_lemma(mini_lex):
    assert antonyms(mini_lex, "qwzx", "noun") == []


def test_lemma_level_pointer_does_not_leak_to_other_lemma(mini_lex):
    # "large" shares a synset with "big" but the antonym pointer is lemma-level
    assert antonyms(mini_lex, "large", "adj") == []


def test_multiword_lemmas_excluded_from_results(mini_lex):
    # wear's synset also contains "have_on"; remove's contains "take_off"
    assert antonyms(mini_lex, "wear", "verb") == ["remove"]
    assert ("hot_dog", "noun") in mini_lex  # retained in the index


def test_related_antonyms_via_hypernym(mini_lex):
    assert related_antonyms(mini_lex, "boy", "noun") == ["female"]
    assert related_antonyms(mini_lex, "walk", "verb") == ["stay"]


def test_related_antonyms_via_similar_for_adjectives(mini_lex):
    assert related_antonyms(mini_lex, "huge", "adj") == ["little"]
    assert related_antonyms(mini_lex, "red", "adj") == []


def test_no_relation_yields_empty(mini_lex):
    assert related_antonyms(mini_lex, "day", "noun") == []


def test_antonymy_symmetry(mini_lex):
    for (lemma, pos) in list(mini_lex.lemma_index):
        for other in antonyms(mini_lex, lemma, pos):
            assert lemma in antonyms(mini_lex, other, pos), (lemma, other, pos)


def test_direct_and_related_disjoint(mini_lex):
    for (lemma, pos) in list(mini_lex.lemma_index):
        direct = set(antonyms(mini_lex, lemma, pos))
        related = set(related_antonyms(mini_lex, lemma, pos))
        assert not (direct & related), (lemma, pos)


def test_parsing_idempotent():
    a = load_wordnet_dir(MINI_WORDNET)
    b = load_wordnet_dir(MINI_WORDNET)
    assert a.synsets == b.synsets
    assert a.lemma_index == b.lemma_index


def test_lemma_index_resolves(mini_lex):
    for ids in mini_lex.lemma_index.values():
        for sid in ids:
            assert sid in mini_lex.synsets


def test_pointer_targets_resolve(mini_lex):
    for syn in mini_lex.synsets.values():
        for ptr in syn.pointers:
            assert ptr.target in mini_lex.synsets
