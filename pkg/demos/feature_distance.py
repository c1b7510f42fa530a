"""Articulatory feature vectors and the weighted edit distance built on
them."""

import numpy as np

from polyipa import (
    DistanceParams,
    default_feature_table,
    feature_edit_distance,
    normalized_feature_distance,
    parse_ipa,
    segment_features,
    string_embedding,
)

table = default_feature_table()
print(f"feature table: {table.dims} dimensions")

# each segment resolves to a ternary vector; diacritics shift features
for text in ("t", "d", "n", "t͡ʃ"):
    vec = segment_features(parse_ipa(text).segments[0], table)
    nonzero = int(np.count_nonzero(vec))
    print(f"  {text!r}: {nonzero} nonzero features")

# substitution cost is the fraction of disagreeing features, so /t/ vs /d/
# (voicing only) is much cheaper than /t/ vs /a/
pairs = [("t", "d"), ("t", "s"), ("t", "a"), ("kat", "kad"), ("kat", "mol")]
print("\nfeature edit distances:")
for a, b in pairs:
    d = feature_edit_distance(parse_ipa(a), parse_ipa(b))
    print(f"  d({a!r}, {b!r}) = {d:.4f}")

# indel costs are tunable; cheap gaps make length differences matter less
cheap_gaps = DistanceParams(sub_scale=0.5, insert_cost=0.25, delete_cost=0.25)
print("\nwith cheap gaps:")
for a, b in (("kat", "kaat"), ("kat", "ka")):
    base = feature_edit_distance(parse_ipa(a), parse_ipa(b))
    tuned = feature_edit_distance(parse_ipa(a), parse_ipa(b), cheap_gaps)
    print(f"  d({a!r}, {b!r}) = {base:.3f} default, {tuned:.3f} tuned")

# normalization by the longer length gives a scale-free score in [0, ~1]
print("\nnormalized:")
for a, b in (("kat", "kad"), ("katana", "kadana")):
    nd = normalized_feature_distance(parse_ipa(a), parse_ipa(b))
    print(f"  nd({a!r}, {b!r}) = {nd:.4f}")

# the mean segment vector doubles as a cheap retrieval embedding
emb = string_embedding(parse_ipa("kat"), table)
close = string_embedding(parse_ipa("kad"), table)
far = string_embedding(parse_ipa("uzu"), table)
print(f"\nembedding dims {emb.shape}, "
      f"|kat-kad| = {np.linalg.norm(emb - close):.3f}, "
      f"|kat-uzu| = {np.linalg.norm(emb - far):.3f}")
