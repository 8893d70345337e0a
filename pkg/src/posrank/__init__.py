"""Fine-grained hard-negative caption generation and PoSRank evaluation toolkit."""

from .corpus import (Corpus, PosVocabulary, TaggedCaption, Token,
                     build_vocabulary, load_corpus, tag_corpus, tokenize)
from .lexicon import Lexicon, antonyms, load_wordnet_dir, parse_lexicon, related_antonyms
from .metrics import coarse_report, posrank, posrank_report, reciprocal_rank
from .negatives import (EvalSuite, NegativeSet, PhraseNegative, Replacement,
                        gen_eval_suite, gen_phrase_level, gen_training_negatives,
                        gen_word_level, select_replacement)
from .similarity import (CandidateScores, ExactMatchScorer, ScoreMatrix,
                         TfidfScorer, load_external_scores, score_suite)

__version__ = "0.1.0"

__all__ = [
    "Corpus", "PosVocabulary", "TaggedCaption", "Token", "build_vocabulary",
    "load_corpus", "tag_corpus", "tokenize",
    "Lexicon", "antonyms", "load_wordnet_dir", "parse_lexicon", "related_antonyms",
    "coarse_report", "posrank", "posrank_report", "reciprocal_rank",
    "EvalSuite", "NegativeSet", "PhraseNegative", "Replacement",
    "gen_eval_suite", "gen_phrase_level", "gen_training_negatives",
    "gen_word_level", "select_replacement",
    "CandidateScores", "ExactMatchScorer", "ScoreMatrix", "TfidfScorer",
    "load_external_scores", "score_suite",
]
