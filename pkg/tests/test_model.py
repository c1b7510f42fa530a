"""Chunk alignment, joint n-gram estimation, beam decoding, and the
candidate file format."""

from __future__ import annotations

import math
import random

import pytest

from _synth import shallow_lexicon
from polyipa import (
    Candidate,
    ChunkAligner,
    JointModel,
    Lexicon,
    PronEntry,
    align,
    beam_decode,
    effective_beam_width,
    load_external_candidates,
    parse_ipa,
    train,
    train_tagged,
    write_candidates_tsv,
)
from polyipa.errors import (
    AlignmentFailureError,
    CandidateParseError,
    EmptyInputError,
    EmptyLexiconError,
    NonMonotoneScoresError,
    UnknownTagWarning,
)
from polyipa.model import BOS, EOS, _tag_token


def _identity_lexicon(words, lang="eo"):
    return Lexicon([PronEntry(lang, w, parse_ipa(w)) for w in words])


def _identity_words(n, seed):
    rng = random.Random(seed)
    phones = "ptkmnsal"
    out = set()
    while len(out) < n:
        out.add("".join(rng.choice(phones) for _ in range(rng.randint(2, 5))))
    return sorted(out)


# alignment

def test_viterbi_prefers_likelier_chunking():
    aligner = ChunkAligner({
        (("k",), "k"): 0.5,
        (("a",), "a"): 0.25,
        (("t",), "t"): 0.25,
    })
    chunks = aligner.viterbi(("k", "a", "t"), "kat")
    assert chunks == ((("k",), "k"), (("a",), "a"), (("t",), "t"))


def test_em_learns_digraph_chunk():
    lex = shallow_lexicon(300, seed=21)
    aligner = ChunkAligner()
    stats = aligner.fit([(tuple(s.text for s in e.ipa.segments), e.grapheme)
                         for e in lex])
    assert stats["ratio_skipped"] == 0
    assert stats["unalignable"] == 0
    entry = next(e for e in lex if "t͡ʃ" in e.ipa.text)
    aligned = align(entry, aligner)
    assert ((("t͡ʃ",), "ch")) in aligned.chunks
    assert aligned.phonemes == tuple(s.text for s in entry.ipa.segments)
    assert aligned.grapheme == entry.grapheme


def test_alignment_rejects_extreme_ratios():
    aligner = ChunkAligner({(("a",), "a"): 1.0})
    with pytest.raises(AlignmentFailureError):
        aligner.viterbi(("a",), "aaaaa")  # 1:5
    with pytest.raises(AlignmentFailureError):
        aligner.viterbi((), "a")
    with pytest.raises(AlignmentFailureError):
        aligner.viterbi(("a",), "")


def test_alignment_fails_without_covering_chunks():
    aligner = ChunkAligner({(("a",), "a"): 1.0})
    with pytest.raises(AlignmentFailureError):
        aligner.viterbi(("b",), "b")


def test_fit_counts_ratio_skips():
    aligner = ChunkAligner()
    stats = aligner.fit([(("a",), "a"), (("a",), "aaaaa")])
    assert stats == {"pairs": 2, "ratio_skipped": 1, "unalignable": 0}


# training and probabilities

def test_train_rejects_empty_input():
    with pytest.raises(EmptyLexiconError):
        train(Lexicon([]))
    with pytest.raises(EmptyLexiconError):
        train_tagged([])


def test_conditionals_sum_to_one():
    model = train(shallow_lexicon(150, seed=22), order=3)
    contexts = sorted(model.counts, key=repr)[:25]
    for ctx in contexts:
        total = sum(model.prob(tok, ctx) for tok in model.vocab)
        assert total == pytest.approx(1.0, abs=1e-9)


def test_unseen_context_backs_off_and_sums_to_one():
    model = train(shallow_lexicon(150, seed=22), order=3)
    unseen = (_tag_token("<zz>"), _tag_token("<zz>"))
    assert unseen not in model.counts
    total = sum(model.prob(tok, unseen) for tok in model.vocab)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_tags_condition_the_output():
    rows = []
    for word in ("vata", "vilo", "navi", "kavu", "veni", "sivo"):
        ipa = parse_ipa(word)
        rows.append(("<aa>", ipa, word))
        rows.append(("<bb>", ipa, word.replace("v", "w")))
    model = train_tagged(rows, order=3)
    # novel combination of chunks seen in training
    probe = parse_ipa("vasi")
    top_a = beam_decode(model, "<aa>", probe, n_best=1)[0].grapheme
    top_b = beam_decode(model, "<bb>", probe, n_best=1)[0].grapheme
    assert top_a == "vasi"
    assert top_b == "wasi"


def test_decode_recovers_identity_spelling():
    words = _identity_words(120, seed=23)
    model = train(_identity_lexicon(words), order=4)
    for probe in words[:20]:
        top = beam_decode(model, "<eo>", parse_ipa(probe), n_best=1)
        assert top[0].grapheme == probe


# beam behaviour

def test_beam_results_ranked_and_distinct():
    model = train(shallow_lexicon(200, seed=24), order=3)
    cands = beam_decode(model, "<eo>", parse_ipa("pato"), n_best=5)
    assert 1 <= len(cands) <= 5
    assert [c.beam_rank for c in cands] == list(range(1, len(cands) + 1))
    scores = [c.log_score for c in cands]
    assert scores == sorted(scores, reverse=True)
    graphemes = [c.grapheme for c in cands]
    assert len(set(graphemes)) == len(graphemes)


def test_width_one_is_greedy():
    words = _identity_words(80, seed=25)
    model = train(_identity_lexicon(words), order=3)
    cands = beam_decode(model, "<eo>", parse_ipa(words[0]), n_best=1,
                        beam_width=1)
    assert len(cands) == 1
    assert cands[0].grapheme == words[0]


def test_effective_beam_width_default_is_triple():
    assert effective_beam_width(1) == 3
    assert effective_beam_width(30) == 90
    assert effective_beam_width(30, beam_width=7) == 7


def test_unknown_tag_warns_but_decodes():
    model = train(shallow_lexicon(100, seed=26), order=3)
    with pytest.warns(UnknownTagWarning):
        cands = beam_decode(model, "<zz>", parse_ipa("pato"), n_best=1)
    assert cands


def test_decode_rejects_empty_input():
    model = train(shallow_lexicon(50, seed=27), order=2)
    with pytest.raises(EmptyInputError):
        beam_decode(model, "<eo>", parse_ipa(""), n_best=1)
    with pytest.raises(ValueError):
        beam_decode(model, "<eo>", parse_ipa("pa"), n_best=0)


def _exhaustive_best(model, tag, ipa):
    """Depth-first search over every chunk sequence the model can emit."""
    segs = tuple(seg.text for seg in ipa.segments)
    index = model.chunk_index()
    ctx_len = model.order - 1
    start: tuple = (BOS,) * ctx_len
    if ctx_len and tag in model.tags:
        start = (start + (_tag_token(tag),))[-ctx_len:]
    max_out = 3 * len(segs) + 5
    best: dict[str, float] = {}

    def walk(pos, ctx, out, lp):
        if pos == len(segs):
            flp = lp + model.log_prob(EOS, ctx)
            if flp > best.get(out, -math.inf):
                best[out] = flp
        for plen in (0, 1, 2):
            if pos + plen > len(segs):
                break
            for tok in index.get(segs[pos:pos + plen], ()):
                out2 = out + tok[2]
                if len(out2) > max_out:
                    continue
                ctx2 = (ctx + (tok,))[-ctx_len:] if ctx_len else ()
                walk(pos + plen, ctx2, out2, lp + model.log_prob(tok, ctx))

    walk(0, start, "", 0.0)
    surface, score = max(best.items(), key=lambda kv: (kv[1], kv[0]))
    return surface, score


def test_wide_beam_matches_exhaustive_search():
    lex = _identity_lexicon(["pa", "ta", "pat", "tap", "apa", "ata"])
    model = train(lex, order=2)
    for probe in ("pa", "ta", "pat", "apa"):
        ipa = parse_ipa(probe)
        surface, score = _exhaustive_best(model, "<eo>", ipa)
        top = beam_decode(model, "<eo>", ipa, n_best=1, beam_width=5000)[0]
        assert top.grapheme == surface
        assert top.log_score == pytest.approx(score, abs=1e-12)


# persistence

def test_retraining_is_byte_identical(tmp_path):
    lex = shallow_lexicon(120, seed=28)
    path_a, path_b = tmp_path / "a.model", tmp_path / "b.model"
    train(lex, order=3).save(path_a)
    train(lex, order=3).save(path_b)
    assert path_a.read_bytes() == path_b.read_bytes()


def test_save_load_preserves_decoding(tmp_path):
    lex = shallow_lexicon(120, seed=29)
    model = train(lex, order=3)
    path = tmp_path / "m.model"
    model.save(path)
    loaded = JointModel.load(path)
    assert loaded.order == model.order
    assert loaded.tags == model.tags
    for probe in ("pato", "shilo", "chama"):
        ipa = parse_ipa(probe)
        a = beam_decode(model, "<eo>", ipa, n_best=3)
        b = beam_decode(loaded, "<eo>", ipa, n_best=3)
        assert [(c.grapheme, c.log_score, c.beam_rank) for c in a] == \
            [(c.grapheme, c.log_score, c.beam_rank) for c in b]


def test_load_rejects_other_files(tmp_path):
    path = tmp_path / "bogus.model"
    path.write_text("not a model\n", encoding="utf-8")
    with pytest.raises(ValueError):
        JointModel.load(path)


# candidate files

def test_candidates_tsv_roundtrip(tmp_path):
    blocks = [
        ("<de>", "kat", [Candidate("kat", -0.5, 1), Candidate("katt", -2.0, 2)]),
        ("<ru>", "mot", [Candidate("мот", -1.25, 1)]),
    ]
    path = tmp_path / "cands.tsv"
    write_candidates_tsv(path, blocks)
    loaded = load_external_candidates(path)
    assert set(loaded) == {("<de>", "kat"), ("<ru>", "mot")}
    assert loaded[("<de>", "kat")] == [Candidate("kat", -0.5, 1),
                                       Candidate("katt", -2.0, 2)]
    assert loaded[("<ru>", "mot")][0].grapheme == "мот"


def test_candidates_loader_validates_ranks(tmp_path):
    path = tmp_path / "cands.tsv"
    path.write_text("<de>\tkat\t1\tkat\t-0.5\n<de>\tkat\t3\tkot\t-1.0\n",
                    encoding="utf-8")
    with pytest.raises(CandidateParseError):
        load_external_candidates(path)


def test_candidates_loader_requires_monotone_scores(tmp_path):
    path = tmp_path / "cands.tsv"
    path.write_text("<de>\tkat\t1\tkat\t-2.0\n<de>\tkat\t2\tkot\t-1.0\n",
                    encoding="utf-8")
    with pytest.raises(NonMonotoneScoresError):
        load_external_candidates(path)


def test_candidates_loader_validates_columns_and_floats(tmp_path):
    path = tmp_path / "cands.tsv"
    path.write_text("<de>\tkat\t1\tkat\n", encoding="utf-8")
    with pytest.raises(CandidateParseError):
        load_external_candidates(path)
    path.write_text("<de>\tkat\tone\tkat\t-0.5\n", encoding="utf-8")
    with pytest.raises(CandidateParseError):
        load_external_candidates(path)


def test_candidates_loader_allows_interleaved_blocks(tmp_path):
    path = tmp_path / "cands.tsv"
    path.write_text(
        "<de>\tkat\t1\tkat\t-0.5\n"
        "<ru>\tmot\t1\tmot\t-0.7\n"
        "<de>\tkat\t2\tkot\t-1.5\n",
        encoding="utf-8")
    loaded = load_external_candidates(path)
    assert [c.grapheme for c in loaded[("<de>", "kat")]] == ["kat", "kot"]
