"""Generate the IPA inventory and articulatory feature table shipped in polyipa/data/.

Rows are derived from compact place/manner/height descriptors so the table stays
internally consistent: symbols sharing a descriptor share its features, and a
voicing pair differs in exactly one column.  Run from the repository root:

    python tools/build_tables.py

Rewrites src/polyipa/data/ipa_inventory.tsv and src/polyipa/data/ipa_features.tsv.
"""

from __future__ import annotations

from pathlib import Path

FEATURES = (
    "syl", "son", "cons", "cont", "delrel", "lat", "nas", "strid",
    "voi", "sg", "cg", "ant", "cor", "distr", "lab", "hi", "lo",
    "back", "round", "velaric", "tense", "long",
)

# Place of articulation: only the features the place determines.
PLACES = {
    "bilabial": {"lab": 1},
    "labiodental": {"lab": 1},
    "dental": {"cor": 1, "ant": 1, "distr": 1},
    "alveolar": {"cor": 1, "ant": 1, "distr": -1},
    "postalveolar": {"cor": 1, "ant": -1, "distr": 1},
    "retroflex": {"cor": 1, "ant": -1, "distr": -1},
    "alveolopalatal": {"cor": 1, "ant": -1, "distr": 1, "hi": 1, "back": -1},
    "palatal": {"hi": 1, "lo": -1, "back": -1},
    "velar": {"hi": 1, "lo": -1, "back": 1},
    "uvular": {"hi": -1, "lo": -1, "back": 1},
    "pharyngeal": {"hi": -1, "lo": 1, "back": 1},
    "epiglottal": {"hi": -1, "lo": 1, "back": 1},
    "glottal": {},
    "labiovelar": {"lab": 1, "round": 1, "hi": 1, "lo": -1, "back": 1},
    "labiopalatal": {"lab": 1, "round": 1, "hi": 1, "lo": -1, "back": -1},
}

MANNERS = {
    "stop": {},
    "fricative": {"cont": 1},
    "affricate": {"delrel": 1},
    "nasal": {"son": 1, "nas": 1},
    "trill": {"son": 1, "cont": 1},
    "tap": {"son": 1},
    "approximant": {"son": 1, "cont": 1},
    "lateral-approximant": {"son": 1, "cont": 1, "lat": 1},
    "lateral-fricative": {"cont": 1, "lat": 1},
    "glide": {"son": 1, "cons": -1, "cont": 1},
    "click": {"velaric": 1},
    "implosive": {"voi": 1, "cg": 1},
}

# Sibilance: fricatives/affricates at these places are strident.
STRIDENT_PLACES = {"labiodental", "alveolar", "postalveolar", "retroflex", "alveolopalatal"}

# symbol, place, manner, voiced, overrides
CONSONANTS = [
    ("p", "bilabial", "stop", 0, {}),
    ("b", "bilabial", "stop", 1, {}),
    ("t", "alveolar", "stop", 0, {}),
    ("d", "alveolar", "stop", 1, {}),
    ("ʈ", "retroflex", "stop", 0, {}),          # ʈ
    ("ɖ", "retroflex", "stop", 1, {}),          # ɖ
    ("c", "palatal", "stop", 0, {}),
    ("ɟ", "palatal", "stop", 1, {}),            # ɟ
    ("k", "velar", "stop", 0, {}),
    ("ɡ", "velar", "stop", 1, {}),              # ɡ
    ("g", "velar", "stop", 1, {}),                   # ASCII lookalike, same row as ɡ
    ("q", "uvular", "stop", 0, {}),
    ("ɢ", "uvular", "stop", 1, {}),             # ɢ
    ("ʔ", "glottal", "stop", 0, {"cons": -1, "cg": 1}),   # ʔ
    ("ʡ", "epiglottal", "stop", 0, {}),         # ʡ
    ("m", "bilabial", "nasal", 1, {}),
    ("ɱ", "labiodental", "nasal", 1, {}),       # ɱ
    ("n", "alveolar", "nasal", 1, {}),
    ("ɳ", "retroflex", "nasal", 1, {}),         # ɳ
    ("ɲ", "palatal", "nasal", 1, {}),           # ɲ
    ("ŋ", "velar", "nasal", 1, {}),             # ŋ
    ("ɴ", "uvular", "nasal", 1, {}),            # ɴ
    ("ʙ", "bilabial", "trill", 1, {}),          # ʙ
    ("r", "alveolar", "trill", 1, {}),
    ("ʀ", "uvular", "trill", 1, {}),            # ʀ
    ("ⱱ", "labiodental", "tap", 1, {}),         # ⱱ
    ("ɾ", "alveolar", "tap", 1, {}),            # ɾ
    ("ɽ", "retroflex", "tap", 1, {}),           # ɽ
    ("ɺ", "alveolar", "tap", 1, {"lat": 1}),    # ɺ
    ("ɸ", "bilabial", "fricative", 0, {}),      # ɸ
    ("β", "bilabial", "fricative", 1, {}),      # β
    ("f", "labiodental", "fricative", 0, {}),
    ("v", "labiodental", "fricative", 1, {}),
    ("θ", "dental", "fricative", 0, {}),        # θ
    ("ð", "dental", "fricative", 1, {}),        # ð
    ("s", "alveolar", "fricative", 0, {}),
    ("z", "alveolar", "fricative", 1, {}),
    ("ʃ", "postalveolar", "fricative", 0, {}),  # ʃ
    ("ʒ", "postalveolar", "fricative", 1, {}),  # ʒ
    ("ʂ", "retroflex", "fricative", 0, {}),     # ʂ
    ("ʐ", "retroflex", "fricative", 1, {}),     # ʐ
    ("ɕ", "alveolopalatal", "fricative", 0, {}),  # ɕ
    ("ʑ", "alveolopalatal", "fricative", 1, {}),  # ʑ
    ("ç", "palatal", "fricative", 0, {}),       # ç
    ("ʝ", "palatal", "fricative", 1, {}),       # ʝ
    ("x", "velar", "fricative", 0, {}),
    ("ɣ", "velar", "fricative", 1, {}),         # ɣ
    ("χ", "uvular", "fricative", 0, {}),        # χ
    ("ʁ", "uvular", "fricative", 1, {}),        # ʁ
    ("ħ", "pharyngeal", "fricative", 0, {}),    # ħ
    ("ʕ", "pharyngeal", "fricative", 1, {}),    # ʕ
    ("h", "glottal", "fricative", 0, {"cons": -1, "sg": 1}),
    ("ɦ", "glottal", "fricative", 1, {"cons": -1, "sg": 1}),  # ɦ
    ("ɧ", "postalveolar", "fricative", 0, {"hi": 1, "back": 1}),  # ɧ
    ("ʜ", "epiglottal", "fricative", 0, {}),    # ʜ
    ("ʢ", "epiglottal", "fricative", 1, {}),    # ʢ
    ("ɬ", "alveolar", "lateral-fricative", 0, {}),  # ɬ
    ("ɮ", "alveolar", "lateral-fricative", 1, {}),  # ɮ
    ("ʋ", "labiodental", "approximant", 1, {}),     # ʋ
    ("ɹ", "alveolar", "approximant", 1, {}),        # ɹ
    ("ɻ", "retroflex", "approximant", 1, {}),       # ɻ
    ("j", "palatal", "glide", 1, {}),
    ("ɰ", "velar", "glide", 1, {}),             # ɰ
    ("l", "alveolar", "lateral-approximant", 1, {}),
    ("ɭ", "retroflex", "lateral-approximant", 1, {}),  # ɭ
    ("ʎ", "palatal", "lateral-approximant", 1, {}),    # ʎ
    ("ʟ", "velar", "lateral-approximant", 1, {}),      # ʟ
    ("ɫ", "alveolar", "lateral-approximant", 1, {"back": 1}),  # ɫ velarized
    ("ʘ", "bilabial", "click", 0, {}),          # ʘ
    ("ǀ", "dental", "click", 0, {}),            # ǀ
    ("ǃ", "alveolar", "click", 0, {}),          # ǃ
    ("ǂ", "palatal", "click", 0, {}),           # ǂ
    ("ǁ", "alveolar", "click", 0, {"lat": 1}),  # ǁ
    ("ɓ", "bilabial", "implosive", 1, {}),      # ɓ
    ("ɗ", "alveolar", "implosive", 1, {}),      # ɗ
    ("ʄ", "palatal", "implosive", 1, {}),       # ʄ
    ("ɠ", "velar", "implosive", 1, {}),         # ɠ
    ("ʛ", "uvular", "implosive", 1, {}),        # ʛ
    ("ʍ", "labiovelar", "glide", 0, {}),        # ʍ
    ("w", "labiovelar", "glide", 1, {}),
    ("ɥ", "labiopalatal", "glide", 1, {}),      # ɥ
]

# Tied two-symbol affricates get their own feature rows keyed by the full
# tie-bar sequence; the matching ligature codepoints reuse the same row.
TIE = "͡"
AFFRICATES = [
    ("t" + TIE + "s", "alveolar", 0, {}),
    ("d" + TIE + "z", "alveolar", 1, {}),
    ("t" + TIE + "ʃ", "postalveolar", 0, {}),
    ("d" + TIE + "ʒ", "postalveolar", 1, {}),
    ("t" + TIE + "ɕ", "alveolopalatal", 0, {}),
    ("d" + TIE + "ʑ", "alveolopalatal", 1, {}),
    ("ʈ" + TIE + "ʂ", "retroflex", 0, {}),
    ("ɖ" + TIE + "ʐ", "retroflex", 1, {}),
    ("t" + TIE + "ɬ", "alveolar", 0, {"lat": 1}),
    ("d" + TIE + "ɮ", "alveolar", 1, {"lat": 1}),
    ("t" + TIE + "θ", "dental", 0, {}),
    ("d" + TIE + "ð", "dental", 1, {}),
    ("p" + TIE + "f", "labiodental", 0, {}),
    ("b" + TIE + "v", "labiodental", 1, {}),
    ("k" + TIE + "x", "velar", 0, {}),
    ("ɡ" + TIE + "ɣ", "velar", 1, {}),
    ("q" + TIE + "χ", "uvular", 0, {}),
]
LIGATURES = {
    "ʦ": "t" + TIE + "s",       # ʦ
    "ʣ": "d" + TIE + "z",       # ʣ
    "ʧ": "t" + TIE + "ʃ",  # ʧ
    "ʤ": "d" + TIE + "ʒ",  # ʤ
    "ʨ": "t" + TIE + "ɕ",  # ʨ
    "ʥ": "d" + TIE + "ʑ",  # ʥ
}
# Doubly articulated stops, also written with a tie bar.
DOUBLE_STOPS = [
    ("k" + TIE + "p", "labiovelar", 0, {"round": 0}),
    ("ɡ" + TIE + "b", "labiovelar", 1, {"round": 0}),
]

# symbol, height, backness, rounded, tense
VOWELS = [
    ("i", "close", "front", 0, 1),
    ("y", "close", "front", 1, 1),
    ("ɨ", "close", "central", 0, 1),    # ɨ
    ("ʉ", "close", "central", 1, 1),    # ʉ
    ("ɯ", "close", "back", 0, 1),       # ɯ
    ("u", "close", "back", 1, 1),
    ("ɪ", "nearclose", "front", 0, 0),  # ɪ
    ("ʏ", "nearclose", "front", 1, 0),  # ʏ
    ("ʊ", "nearclose", "back", 1, 0),   # ʊ
    ("e", "closemid", "front", 0, 1),
    ("ø", "closemid", "front", 1, 1),   # ø
    ("ɘ", "closemid", "central", 0, 1), # ɘ
    ("ɵ", "closemid", "central", 1, 1), # ɵ
    ("ɤ", "closemid", "back", 0, 1),    # ɤ
    ("o", "closemid", "back", 1, 1),
    ("ə", "mid", "central", 0, 0),      # ə
    ("ɚ", "mid", "central", 0, 0),      # ɚ
    ("ɛ", "openmid", "front", 0, 0),    # ɛ
    ("œ", "openmid", "front", 1, 0),    # œ
    ("ɜ", "openmid", "central", 0, 0),  # ɜ
    ("ɝ", "openmid", "central", 0, 0),  # ɝ
    ("ɞ", "openmid", "central", 1, 0),  # ɞ
    ("ʌ", "openmid", "back", 0, 0),     # ʌ
    ("ɔ", "openmid", "back", 1, 0),     # ɔ
    ("æ", "nearopen", "front", 0, 0),   # æ
    ("ɐ", "nearopen", "central", 0, 0), # ɐ
    ("a", "open", "front", 0, 0),
    ("ɶ", "open", "front", 1, 0),       # ɶ
    ("ɑ", "open", "back", 0, 0),        # ɑ
    ("ɒ", "open", "back", 1, 0),        # ɒ
]

HEIGHTS = {
    "close": {"hi": 1, "lo": -1},
    "nearclose": {"hi": 1, "lo": -1},
    "closemid": {"hi": -1, "lo": -1},
    "mid": {"hi": -1, "lo": -1},
    "openmid": {"hi": -1, "lo": -1},
    "nearopen": {"hi": -1, "lo": 1},
    "open": {"hi": -1, "lo": 1},
}
BACKNESS = {"front": -1, "central": 0, "back": 1}

# Standalone marks that segment on their own but carry no features.
PROSODIC = [".", " ", "ˈ", "ˌ", "‿"]  # . space ˈ ˌ ‿

COMBINING = [
    "̀", "́", "̂", "̃", "̄", "̆", "̈",
    "̊", "̋", "̌", "̍", "̏", "̘", "̙",
    "̚", "̜", "̝", "̞", "̟", "̠", "̤",
    "̥", "̩", "̪", "̬", "̯", "̰", "̴",
    "̹", "̺", "̻", "̼", "̽",
    "᷄", "᷅", "᷆", "᷇", "᷈", "᷉",
    "͡", "͜",
]

MODIFIERS = [
    "ʰ",  # ʰ
    "ʱ",  # ʱ
    "ʲ",  # ʲ
    "ʷ",  # ʷ
    "ˠ",  # ˠ
    "ˤ",  # ˤ
    "ⁿ",  # ⁿ
    "ˡ",  # ˡ
    "ʼ",  # ʼ
    "˞",  # ˞
    "ˀ",  # ˀ
    "ː",  # ː
    "ˑ",  # ˑ
]

TONES = ["˥", "˦", "˧", "˨", "˩"]  # ˥ ˦ ˧ ˨ ˩


def consonant_row(place: str, manner: str, voiced: int, over: dict) -> dict:
    row = {
        "syl": -1, "son": -1, "cons": 1, "cont": -1, "delrel": -1, "lat": -1,
        "nas": -1, "strid": -1, "voi": 1 if voiced else -1, "sg": -1, "cg": -1,
        "ant": 0, "cor": -1, "distr": 0, "lab": -1, "hi": 0, "lo": 0,
        "back": 0, "round": 0, "velaric": -1, "tense": 0, "long": -1,
    }
    row.update(PLACES[place])
    row.update(MANNERS[manner])
    if manner in ("fricative", "affricate") and place in STRIDENT_PLACES:
        row["strid"] = 1
    row.update(over)
    return row


def vowel_row(height: str, backness: str, rounded: int, tense: int) -> dict:
    row = {
        "syl": 1, "son": 1, "cons": -1, "cont": 1, "delrel": -1, "lat": -1,
        "nas": -1, "strid": -1, "voi": 1, "sg": -1, "cg": -1,
        "ant": 0, "cor": -1, "distr": 0,
        "lab": 1 if rounded else -1,
        "back": BACKNESS[backness],
        "round": 1 if rounded else -1,
        "velaric": -1,
        "tense": 1 if tense else -1,
        "long": -1,
    }
    row.update(HEIGHTS[height])
    return row


def zero_row() -> dict:
    return {f: 0 for f in FEATURES}


def build() -> tuple[list[tuple[str, str]], dict[str, dict]]:
    inventory: list[tuple[str, str]] = []
    table: dict[str, dict] = {}

    for sym, place, manner, voiced, over in CONSONANTS:
        inventory.append((sym, "base"))
        table[sym] = consonant_row(place, manner, voiced, over)
    for sym, place, voiced, over in AFFRICATES:
        table[sym] = consonant_row(place, "affricate", voiced, over)
    for sym, tied in LIGATURES.items():
        inventory.append((sym, "base"))
        table[sym] = dict(table[tied])
    for sym, place, voiced, over in DOUBLE_STOPS:
        table[sym] = consonant_row(place, "stop", voiced, over)
    for sym, height, backness, rounded, tense in VOWELS:
        inventory.append((sym, "base"))
        table[sym] = vowel_row(height, backness, rounded, tense)
    for sym in PROSODIC:
        inventory.append((sym, "prosodic"))
        table[sym] = zero_row()
    for sym in COMBINING:
        inventory.append((sym, "diacritic"))
    for sym in MODIFIERS:
        inventory.append((sym, "modifier"))
    for sym in TONES:
        inventory.append((sym, "tone"))
    return inventory, table


VALUE = {1: "+", 0: "0", -1: "-"}


def main() -> None:
    data_dir = Path(__file__).resolve().parent.parent / "src" / "polyipa" / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    inventory, table = build()

    inv_lines = [
        "# IPA symbol inventory: symbol<TAB>category",
        "# categories: base (featural segment), prosodic (standalone, no features),",
        "#             diacritic (combining mark), modifier (spacing modifier letter),",
        "#             tone (tone letter)",
        "# Generated by tools/build_tables.py; edit that script, not this file.",
    ]
    inv_lines += [f"{sym}\t{cat}" for sym, cat in inventory]
    (data_dir / "ipa_inventory.tsv").write_text("\n".join(inv_lines) + "\n", encoding="utf-8")

    feat_lines = [
        "# Ternary articulatory features, one segment per row; values in {+, 0, -}.",
        "# Generated by tools/build_tables.py; edit that script, not this file.",
        "segment\t" + "\t".join(FEATURES),
    ]
    for sym, row in table.items():
        feat_lines.append(sym + "\t" + "\t".join(VALUE[row[f]] for f in FEATURES))
    (data_dir / "ipa_features.tsv").write_text("\n".join(feat_lines) + "\n", encoding="utf-8")

    n_base = sum(1 for _, cat in inventory if cat == "base")
    print(f"inventory: {len(inventory)} symbols ({n_base} bases); features: {len(table)} rows x {len(FEATURES)}")


if __name__ == "__main__":
    main()
