"""Command-line entry point wiring the modules into reproducible pipelines.

Every output file embeds the fully resolved config (including seeds), is
written atomically (temp file + rename), and is byte-identical across reruns
with the same config. Exit code 1 = validation error, 2 = I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import analysis, metrics, negatives, similarity, toytrain
from .corpus import PERTURBABLE, build_vocabulary, load_corpus, tag_corpus
from .errors import PosrankError
from .lexicon import Lexicon, antonyms, load_wordnet_dir, related_antonyms


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".posrank-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(path: str | None, text: str) -> None:
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_lexicon(args) -> Lexicon:
    wordnet_dir = getattr(args, "wordnet_dir", None) or os.environ.get("POSRANK_WORDNET_DIR")
    if not wordnet_dir:
        return Lexicon()
    return load_wordnet_dir(wordnet_dir)


def _load_tagged_corpus(path: str, fmt: str, lex: Lexicon):
    with open(path, encoding="utf-8") as f:
        corpus = load_corpus(f, fmt)
    return tag_corpus(corpus, lex)


def _config_block(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys}


def cmd_generate_negatives(args) -> int:
    lex = _load_lexicon(args)
    corpus = _load_tagged_corpus(args.corpus, args.corpus_format, lex)
    vocab = build_vocabulary(corpus)
    config = _config_block(args, ["corpus", "k", "seed", "level", "vocab_sampling"])
    lines = [json.dumps({"config": config, "seed": args.seed, "k": args.k})]
    if args.level == "word":
        suite = negatives.gen_eval_suite(corpus, lex, vocab, k=args.k,
                                         seed=args.seed,
                                         vocab_sampling=args.vocab_sampling)
        import io
        buf = io.StringIO()
        negatives.save_suite(suite, buf)
        body = buf.getvalue().split("\n", 1)[1]  # replace meta line with config-bearing one
        meta = {"config": config, "seed": suite.seed, "k": suite.k,
                "gaps": [list(g) for g in suite.gaps]}
        lines = [json.dumps(meta), body.rstrip("\n")] if body.strip() else [json.dumps(meta)]
    else:
        records = []
        for cap in sorted(corpus.captions, key=lambda c: c.caption_id):
            try:
                pn = negatives.gen_phrase_level(cap, args.k, lex, vocab, args.seed,
                                                args.vocab_sampling)
            except PosrankError:
                continue
            records.append(json.dumps({
                "caption_id": pn.caption_id,
                "negatives": [{"text": t,
                               "replacements": [{"index": r.token_index,
                                                 "orig": r.original,
                                                 "sub": r.substitute,
                                                 "source": r.source}
                                                for r in reps]}
                              for t, reps in pn.negatives]}))
        lines += records
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


def _format_posrank_table(report) -> str:
    rows = [f"{'pos':<8}{'posrank':>10}{'sets':>8}"]
    for pos in PERTURBABLE:
        if pos in report.values:
            rows.append(f"{pos:<8}{report.values[pos]:>10.4f}{report.counts[pos]:>8}")
    rows.append(f"{'mean':<8}{report.mean:>10.4f}")
    return "\n".join(rows) + "\n"


def cmd_evaluate(args) -> int:
    with open(args.suite, encoding="utf-8") as f:
        suite = negatives.load_suite(f)
    if args.scores:
        with open(args.scores, encoding="utf-8") as f:
            sets = similarity.load_external_scores(f, suite)
    else:
        if not args.corpus:
            raise PosrankError("--scorer requires --corpus")
        lex = _load_lexicon(args)
        corpus = _load_tagged_corpus(args.corpus, args.corpus_format, lex)
        scorer = similarity.SCORERS[args.scorer]().fit(corpus)
        sets = similarity.score_suite(suite, corpus, scorer)
    report = metrics.posrank_report(sets, ties=args.ties)

    result = {"config": _config_block(args, ["suite", "scores", "scorer", "ties"]),
              "posrank": report.to_dict(),
              "counts": report.counts}
    if args.matrix:
        if not args.corpus:
            raise PosrankError("--matrix requires --corpus for ground-truth pairs")
        with open(args.matrix, encoding="utf-8") as f:
            matrix = similarity.load_score_matrix(f)
        corpus = _load_tagged_corpus(args.corpus, args.corpus_format, Lexicon())
        gt_pairs = [(c.video_id, c.caption_id) for c in corpus.captions]
        result["coarse"] = {
            "v2t": metrics.coarse_report(matrix, gt_pairs, "v2t", args.ties).to_dict(),
            "t2v": metrics.coarse_report(matrix, gt_pairs, "t2v", args.ties).to_dict(),
        }
    if args.format == "table":
        _emit(args.out, _format_posrank_table(report))
    else:
        _emit(args.out, _json(result))
    return 0


def cmd_analyze_corpus(args) -> int:
    lex = _load_lexicon(args)
    corpus = _load_tagged_corpus(args.corpus, args.corpus_format, lex)
    stats = analysis.corpus_statistics(corpus)
    pos_list = [args.pos] if args.pos else list(PERTURBABLE)
    deletion = {}
    for pos in pos_list:
        deletion[pos] = {
            str(n): analysis.pos_deletion_duplicates(corpus, pos, n, args.seed,
                                                     strict=args.strict)
            for n in range(1, args.n_max + 1)}
    result = {"config": _config_block(args, ["corpus", "pos", "n_max", "seed", "strict"]),
              "statistics": stats.to_dict(),
              "deletion_duplicates": deletion}
    _emit(args.out, _json(result))
    return 0


def cmd_train_toy(args) -> int:
    dataset = toytrain.make_synthetic_dataset(seed=args.seed)
    cfg = toytrain.ToyTrainConfig(
        strategy=args.strategy, lam=getattr(args, "lambda"),
        n_negatives=args.negatives, epochs=args.epochs, lr=args.lr,
        seed=args.seed, exclusive_denominator=args.exclusive_denominator)
    _, trace = toytrain.train_toy(dataset, cfg)
    result = {"config": _config_block(args, ["strategy", "negatives", "epochs",
                                             "lr", "seed", "exclusive_denominator"]),
              "lambda": getattr(args, "lambda"),
              "trace": trace}
    _emit(args.out, _json(result))
    return 0


def cmd_inspect_lexicon(args) -> int:
    lex = _load_lexicon(args)
    result = {
        "lemma": args.lemma, "pos": args.pos,
        "senses": lex.num_senses(args.lemma, args.pos),
        "antonyms": antonyms(lex, args.lemma, args.pos),
        "related_antonyms": related_antonyms(lex, args.lemma, args.pos),
    }
    if args.format == "table":
        lines = [f"{k}: {v}" for k, v in result.items()]
        _emit(args.out, "\n".join(lines) + "\n")
    else:
        _emit(args.out, _json(result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posrank")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus_required=True):
        p.add_argument("--corpus", required=corpus_required)
        p.add_argument("--corpus-format", choices=["jsonl", "tsv"], default="jsonl")
        p.add_argument("--wordnet-dir", default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("generate-negatives", help="create hard-negative suites")
    common(p)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--level", choices=["word", "phrase"], default="word")
    p.add_argument("--vocab-sampling", choices=["frequency", "uniform"],
                   default="frequency")
    p.set_defaults(func=cmd_generate_negatives)

    p = sub.add_parser("evaluate", help="compute PoSRank / coarse metrics")
    p.add_argument("--suite", required=True)
    p.add_argument("--scores", default=None)
    p.add_argument("--scorer", choices=sorted(similarity.SCORERS), default=None)
    p.add_argument("--matrix", default=None)
    p.add_argument("--ties", choices=list(metrics.TIE_MODES), default="mid")
    common(p, corpus_required=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze-corpus", help="POS-deletion and statistics report")
    common(p)
    p.add_argument("--pos", choices=list(PERTURBABLE), default=None)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_analyze_corpus)

    p = sub.add_parser("train-toy", help="toy contrastive training run")
    p.add_argument("--strategy", choices=list(toytrain.STRATEGIES), required=True)
    p.add_argument("--lambda", type=float, default=0.2)
    p.add_argument("--negatives", type=int, default=16)
    p.add_argument("--epochs", type=int, default=40)
    p.add_argument("--lr", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exclusive-denominator", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("inspect-lexicon", help="antonym/related-antonym lookup")
    p.add_argument("--wordnet-dir", default=None)
    p.add_argument("--lemma", required=True)
    p.add_argument("--pos", choices=["noun", "verb", "adj", "adv"], required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_inspect_lexicon)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except PosrankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io-error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
