"""Single command-line entry point for the whole pipeline.

Subcommands: clean, convert, strip, pairs, mine, split, augment, train,
predict, eval, report. Exit codes: 0 success, 1 input or validation error
(including usage errors), 2 internal error. Every output is deterministic
for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from . import __version__
from .config import PipelineConfig, Resources, load as load_config
from .errors import PolyipaError
from .ipa import convert_to_ipa, parse_ipa, strip_diacritics_tones
from .lexicon import Lexicon, clean, extract_ipa_pairs, lang_script_tag, read_raw_tsv
from .metrics import EvalItem, report_from_json, stratify
from .mining import (
    MiningParams,
    build_embedding_matrix,
    mine_soundalikes,
    read_pairs_tsv,
    write_embeddings_tsv,
    write_pairs_tsv,
)
from .model import (
    JointModel,
    beam_decode,
    effective_beam_width,
    load_external_candidates,
    train,
    train_tagged,
    write_candidates_tsv,
)
from .splits import (
    SplitSpec,
    read_examples_tsv,
    stratified_split,
    upsample_generate,
    variant_map_from_pairs,
    write_examples_tsv,
)

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


def _write_lines(path: str, lines: list[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _first_data_columns(path: str) -> int:
    for line in _read_lines(path):
        if line and not line.startswith("#"):
            return len(line.split("\t"))
    return 0


def cmd_clean(args, cfg: PipelineConfig, res: Resources) -> int:
    rows = read_raw_tsv(args.input)
    lex, report = clean(rows, res.inventory, res.registry, res.scripts)
    lex.write_tsv(args.output)
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    removed = report.input_count - report.retained_count
    print(f"clean: {report.input_count} rows in, {report.retained_count} kept, "
          f"{removed} removed")
    return 0


def cmd_convert(args, cfg: PipelineConfig, res: Resources) -> int:
    charts = {"xsampa": res.xsampa, "arpabet": res.arpabet, "ipa": None}
    out: list[str] = []
    for line in _read_lines(args.input):
        if not line.strip():
            out.append("")
            continue
        s = convert_to_ipa(args.system, line, inventory=res.inventory,
                           chart=charts[args.system])
        out.append(s.text)
    _write_lines(args.output, out)
    return 0


def cmd_strip(args, cfg: PipelineConfig, res: Resources) -> int:
    out: list[str] = []
    for line in _read_lines(args.input):
        if not line.strip():
            out.append("")
            continue
        s = parse_ipa(line, res.inventory)
        out.append(strip_diacritics_tones(s, inventory=res.inventory).text)
    _write_lines(args.output, out)
    return 0


def cmd_pairs(args, cfg: PipelineConfig, res: Resources) -> int:
    lex = Lexicon.read_tsv(args.input, res.inventory)
    pairs = extract_ipa_pairs(lex)
    lines = ["# lang\tgrapheme\tipa_a\tipa_b"]
    lines += [f"{p.lang}\t{p.grapheme}\t{p.ipa_a.text}\t{p.ipa_b.text}" for p in pairs]
    _write_lines(args.output, lines)
    print(f"pairs: {len(pairs)} ordered pronunciation pairs")
    return 0


def cmd_mine(args, cfg: PipelineConfig, res: Resources) -> int:
    lex = Lexicon.read_tsv(args.input, res.inventory)
    params = MiningParams(
        k=args.k if args.k is not None else cfg.mining.k,
        threshold=args.threshold if args.threshold is not None else cfg.mining.threshold,
        exclude_existing=args.exclude_existing or cfg.mining.exclude_existing,
    )
    entries = list(lex)
    if args.embeddings:
        write_embeddings_tsv(args.embeddings, build_embedding_matrix(entries, res.features))
    pairs = mine_soundalikes(entries, params, table=res.features, known=lex)
    write_pairs_tsv(args.output, pairs)
    print(f"mine: {len(pairs)} pairs at threshold {params.threshold} from "
          f"{len(entries)} entries")
    return 0


def cmd_split(args, cfg: PipelineConfig, res: Resources) -> int:
    lex = Lexicon.read_tsv(args.input, res.inventory)
    spec = SplitSpec(
        test_size=args.test if args.test is not None else cfg.split.test_size,
        eval_size=args.eval if args.eval is not None else cfg.split.eval_size,
        seed=args.seed if args.seed is not None else cfg.split.seed,
        max_tokens=cfg.split.max_tokens,
        per_lang_cap=args.per_lang_cap if args.per_lang_cap is not None else cfg.split.per_lang_cap,
    )
    train_lex, eval_lex, test_lex = stratified_split(lex, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_lex.write_tsv(out_dir / "train.tsv")
    eval_lex.write_tsv(out_dir / "eval.tsv")
    test_lex.write_tsv(out_dir / "test.tsv")
    print(f"split: train {len(train_lex)}, eval {len(eval_lex)}, test {len(test_lex)}")
    return 0


def cmd_augment(args, cfg: PipelineConfig, res: Resources) -> int:
    train_lex = Lexicon.read_tsv(args.train, res.inventory)
    variants = {}
    if args.pairs:
        variants = variant_map_from_pairs(read_pairs_tsv(args.pairs, res.inventory))
    spec = SplitSpec(
        test_size=cfg.split.test_size,
        eval_size=cfg.split.eval_size,
        seed=cfg.split.seed,
        max_tokens=args.max_tokens if args.max_tokens is not None else cfg.split.max_tokens,
        per_lang_cap=cfg.split.per_lang_cap,
    )
    counters: dict[str, int] = {}
    stream = upsample_generate(train_lex, variants, spec, ratio=args.ratio,
                               scripts=res.scripts, inventory=res.inventory,
                               counters=counters)
    write_examples_tsv(args.out, stream)
    print("augment: " + ", ".join(f"{k}={counters[k]}" for k in sorted(counters)))
    return 0


def cmd_train(args, cfg: PipelineConfig, res: Resources) -> int:
    order = args.order if args.order is not None else cfg.model_order
    iterations = args.em_iterations if args.em_iterations is not None else cfg.em_iterations
    columns = _first_data_columns(args.input)
    if columns == 4:
        examples = read_examples_tsv(args.input, res.inventory)
        rows = [(ex.tag, ex.ipa, ex.target) for ex in examples]
        model = train_tagged(rows, order=order, em_iterations=iterations)
    else:
        lex = Lexicon.read_tsv(args.input, res.inventory)
        model = train(lex, order=order, em_iterations=iterations, scripts=res.scripts)
    model.save(args.output)
    stats = model.training_stats
    print(f"train: order {order}, {stats.get('trained_on', 0)} examples, "
          f"{stats.get('alignment_failures', 0)} alignment failures, "
          f"{len(model.vocab)} vocabulary tokens")
    return 0


def cmd_predict(args, cfg: PipelineConfig, res: Resources) -> int:
    model = JointModel.load(args.model)
    n_best = args.n_best if args.n_best is not None else cfg.n_best
    beam_width = args.beam_width if args.beam_width is not None else cfg.beam_width
    if args.verbose:
        print(f"predict: beam width {effective_beam_width(n_best, beam_width)}",
              file=sys.stderr)
    columns = _first_data_columns(args.input)
    queries: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    if columns == 2:
        for line in _read_lines(args.input):
            if not line or line.startswith("#"):
                continue
            tag, ipa_text = line.split("\t")
            if (tag, ipa_text) not in seen:
                seen.add((tag, ipa_text))
                queries.append((tag, ipa_text))
    else:
        lex = Lexicon.read_tsv(args.input, res.inventory)
        for entry in lex:
            tag = lang_script_tag(entry, res.scripts)
            key = (tag, entry.ipa.text)
            if key not in seen:
                seen.add(key)
                queries.append(key)
    blocks = []
    for tag, ipa_text in queries:
        ipa = parse_ipa(ipa_text, res.inventory)
        cands = beam_decode(model, tag, ipa, n_best, beam_width)
        blocks.append((tag, ipa_text, cands))
    write_candidates_tsv(args.output, blocks)
    print(f"predict: {len(queries)} inputs, n_best {n_best}")
    return 0


def cmd_eval(args, cfg: PipelineConfig, res: Resources) -> int:
    test_lex = Lexicon.read_tsv(args.test, res.inventory)
    candidates = load_external_candidates(args.candidates)
    ns = tuple(int(part) for part in args.n.split(","))
    items: list[EvalItem] = []
    skipped = 0
    for entry in test_lex:
        tag = lang_script_tag(entry, res.scripts)
        block = candidates.get((tag, entry.ipa.text))
        if not block:
            skipped += 1
            continue
        items.append(EvalItem(entry.lang, tag, entry.ipa, entry.grapheme,
                              tuple(block)))
    if skipped:
        print(f"warning: {skipped} test entries had no candidates and were skipped",
              file=sys.stderr)
    report = stratify(items, ns)
    Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    if args.csv:
        report.write_csv(args.csv)
    o = report.overall
    print(f"eval: {o.n_samples} items, cer {o.cer_mean:.4f}, bleu {o.bleu_mean:.4f}, "
          f"exact {o.exact_match_rate:.4f}")
    return 0


def cmd_report(args, cfg: PipelineConfig, res: Resources) -> int:
    rep = report_from_json(Path(args.input).read_text(encoding="utf-8"))
    if args.csv:
        rep.write_csv(args.csv)
    wer_heads = [f"top{n}_wer" for n in rep.ns]
    header = ["lang", "n", "cer", "bleu", "exact"] + wer_heads + ["beam_pos"]
    print("  ".join(f"{h:>10}" for h in header))
    for row in rep.rows + [rep.overall]:
        cells = [row.lang, str(row.n_samples), f"{row.cer_mean:.4f}",
                 f"{row.bleu_mean:.4f}", f"{row.exact_match_rate:.4f}"]
        cells += [f"{row.top_wer[n]:.4f}" for n in rep.ns]
        cells.append(f"{row.mean_best_beam_position:.2f}")
        print("  ".join(f"{c:>10}" for c in cells))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="polyipa", description=__doc__)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--version", action="version", version=f"polyipa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser,
                                metavar="SUBCOMMAND")

    p = sub.add_parser("clean", help="clean a raw lexicon TSV")
    p.add_argument("--input", required=True, help="raw lexicon TSV (lang, grapheme, ipa)")
    p.add_argument("--output", required=True, help="cleaned lexicon TSV")
    p.add_argument("--report", help="write the cleaning report JSON here")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("convert", help="convert transcriptions to IPA")
    p.add_argument("--from", dest="system", required=True,
                   choices=("ipa", "xsampa", "arpabet"), help="source notation")
    p.add_argument("--input", default="-", help="one transcription per line, - for stdin")
    p.add_argument("--output", default="-", help="output file, - for stdout")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("strip", help="remove diacritics, tones, and modifier letters")
    p.add_argument("--input", default="-", help="one IPA string per line, - for stdin")
    p.add_argument("--output", default="-", help="output file, - for stdout")
    p.set_defaults(func=cmd_strip)

    p = sub.add_parser("pairs", help="extract ordered pronunciation-variant pairs")
    p.add_argument("--input", required=True, help="cleaned lexicon TSV")
    p.add_argument("--output", required=True, help="pairs TSV")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("mine", help="mine sound-alike entry pairs")
    p.add_argument("--input", required=True, help="cleaned lexicon TSV")
    p.add_argument("--k", type=int, help="nearest neighbours per entry")
    p.add_argument("--threshold", type=float, help="max feature edit distance")
    p.add_argument("--exclude-existing", action="store_true",
                   help="drop pairs the lexicon already lists as variants")
    p.add_argument("--embeddings", help="also write the embedding matrix TSV here")
    p.add_argument("--output", required=True, help="mined pairs TSV")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("split", help="stratified train/eval/test split")
    p.add_argument("--input", required=True, help="cleaned lexicon TSV")
    p.add_argument("--test", type=int, help="test set size")
    p.add_argument("--eval", type=int, help="evaluation set size")
    p.add_argument("--seed", type=int, help="shuffle seed")
    p.add_argument("--per-lang-cap", type=int, help="cap entries per language")
    p.add_argument("--out-dir", required=True, help="directory for train/eval/test.tsv")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("augment", help="upsample a training lexicon")
    p.add_argument("--train", required=True, help="training lexicon TSV")
    p.add_argument("--pairs", help="mined pairs TSV for similar variants")
    p.add_argument("--ratio", type=float, default=1.0,
                   help="min originals-to-augmented ratio (default 1.0)")
    p.add_argument("--max-tokens", type=int, help="token budget per example")
    p.add_argument("--out", required=True, help="augmented examples TSV")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", help="train the phoneme-to-grapheme model")
    p.add_argument("--input", required=True,
                   help="lexicon TSV or augmented examples TSV")
    p.add_argument("--order", type=int, help="n-gram order")
    p.add_argument("--em-iterations", type=int, help="aligner EM iterations")
    p.add_argument("--output", required=True, help="model file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="decode n-best spellings")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--input", required=True,
                   help="lexicon TSV or tag<TAB>ipa lines")
    p.add_argument("--n-best", type=int, help="candidates per input")
    p.add_argument("--beam-width", type=int,
                   help="beam width (default 3 times n-best)")
    p.add_argument("--verbose", action="store_true", help="log decode settings")
    p.add_argument("--output", required=True, help="candidates TSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score candidates against references")
    p.add_argument("--test", required=True, help="test lexicon TSV")
    p.add_argument("--candidates", required=True, help="candidates TSV")
    p.add_argument("--n", default="1,3,5", help="comma-separated top-N list")
    p.add_argument("--report", required=True, help="output report JSON")
    p.add_argument("--csv", help="also write a per-language CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="render a report JSON as a table")
    p.add_argument("--input", required=True, help="report JSON from eval")
    p.add_argument("--csv", help="also write the per-language CSV")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, validate=False)
        res = cfg.resources()
        return args.func(args, cfg, res)
    except (PolyipaError, OSError, ValueError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
