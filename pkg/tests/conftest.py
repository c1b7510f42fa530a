"""Shared fixtures: a 100-row raw lexicon with known-bad rows.

The corpus has exactly 90 retainable entries plus 5 invalid transcriptions,
3 script mismatches, and 2 duplicates, spread over four languages and three
scripts. Tests that need the exact removal counts rely on this composition.
"""

from __future__ import annotations

import unicodedata

import pytest

CONSONANTS = "ptkbdmnszl"
VOWELS = "aeiou"
TO_CYRILLIC = str.maketrans("ptkbdmnszlaeiou", "пткбдмнсзлаеиоу")
TO_GREEK = str.maketrans("ptkbdmnszlaeiou", "πτκβδμνσζλαειοω")

INVALID_IPA_ROWS = [
    ("de", "qqq", "k@t"),        # symbol outside the inventory
    ("fr", "rrr", ""),           # empty transcription
    ("ru", "ывы", "ˈˈ"),         # stress marks only, no phonetic content
    ("el", "φφφ", "α"),          # greek alpha is not an IPA base letter
    ("de", "zzz", "t͡"),          # dangling tie bar
]
SCRIPT_MISMATCH_ROWS = [
    ("ru", "abc", "kat"),
    ("el", "babo", "babo"),
    ("de", "привет", "mit"),
]


def _clean_row(i: int) -> tuple[str, str, str]:
    lang = ("de", "fr", "ru", "el")[i % 4]
    word = (CONSONANTS[i % 10] + VOWELS[i % 5]
            + CONSONANTS[(i // 10) % 10] + VOWELS[(i // 5) % 5])
    ipa = word
    if i % 5 == 0:
        ipa = "ˈ" + ipa
    if i % 7 == 0:
        ipa = ipa[:2] + "ː" + ipa[2:]
    if i % 9 == 0:
        ipa = ipa + "˥"
    if i % 13 == 0:
        ipa = ipa[:2] + "̃" + ipa[2:]
    if lang == "ru":
        word = word.translate(TO_CYRILLIC)
    elif lang == "el":
        word = word.translate(TO_GREEK)
    return (lang, word, ipa)


def build_fixture_rows() -> list[tuple[str, str, str]]:
    rows = [_clean_row(i) for i in range(90)]
    # exact copy of one clean row, and a casefold/NFD variant of another
    rows.append(rows[3])
    lang, word, ipa = rows[17]
    rows.append((lang, word.upper(), unicodedata.normalize("NFD", ipa)))
    rows.extend(INVALID_IPA_ROWS)
    rows.extend(SCRIPT_MISMATCH_ROWS)
    assert len(rows) == 100
    return rows


def write_rows(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lang, grapheme, ipa in rows:
            fh.write(f"{lang}\t{grapheme}\t{ipa}\n")


@pytest.fixture(scope="session")
def fixture_rows() -> list[tuple[str, str, str]]:
    return build_fixture_rows()


@pytest.fixture
def fixture_corpus(tmp_path, fixture_rows):
    path = tmp_path / "raw.tsv"
    write_rows(path, fixture_rows)
    return path
