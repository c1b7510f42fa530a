"""Tour of the IPA layer: normalization, segmentation, notation
conversion, and diacritic stripping."""

from polyipa import (
    convert_to_ipa,
    normalize_text,
    parse_ipa,
    strip_diacritics_tones,
    validate_ipa,
)

# normalization folds case, applies NFC, and maps common lookalike
# characters (ASCII apostrophe, 'g') onto their IPA codepoints
raw = "  'KAtsgə  "
print(f"normalize_text({raw!r}) = {normalize_text(raw)!r}")

# segmentation groups each base symbol with its diacritics and tones
word = parse_ipa("ˈkʰæ̃t˥")
print(f"\nsegments of {word.text!r}:")
for seg in word.segments:
    print(f"  base={seg.base!r} diacritics={seg.diacritics} tones={seg.tones}")

# tie bars bind affricates into one segment
affricate = parse_ipa("t͡ʃa")
print(f"\n{affricate.text!r} has {len(affricate.segments)} segments:",
      [seg.text for seg in affricate.segments])

# validation reports every unknown symbol with its position
result = validate_ipa("k@t#")
print(f"\nvalidate_ipa('k@t#').ok = {result.ok}")
for v in result.violations:
    print(f"  position {v.position}: {v.symbol!r} {v.reason}")

# other notations convert to canonical IPA
print("\nconversions:")
print("  xsampa  'tS'        ->", convert_to_ipa("xsampa", "tS").text)
print("  xsampa  '\"pleIs'    ->", convert_to_ipa("xsampa", '"pleIs').text)
print("  arpabet 'K AE T'    ->", convert_to_ipa("arpabet", "K AE T").text)
print("  arpabet 'HH AH0 L OW1' ->", convert_to_ipa("arpabet", "HH AH0 L OW1").text)

# stripping removes stress, length, tones, and diacritics but keeps ties
decorated = parse_ipa("ˈt͡ʃæ̃ːt˥")
print(f"\nstrip_diacritics_tones({decorated.text!r}) =",
      strip_diacritics_tones(decorated).text)
