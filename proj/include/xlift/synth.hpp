#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xlift/alignment.hpp"
#include "xlift/corpus.hpp"
#include "xlift/embedding.hpp"

namespace xlift {

/// Token classes left unciphered (shared strings across the language pair).
struct AnchorPolicy {
  bool digits = true;
  bool punct = true;
  std::vector<std::string> extra;
};

/// Cipher-language construction: a seeded bijection over the non-anchor
/// vocabulary. An explicit mapping may be supplied; otherwise one is
/// generated from the seed.
struct CipherSpec {
  std::uint64_t seed = 1;
  AnchorPolicy anchors;
  std::vector<std::pair<std::string, std::string>> mapping;  // optional
};

struct CipherResult {
  Corpus corpus;
  Dictionary gold;  // mapping plus anchor identities, frequency-ordered
};

bool is_digit_token(const std::string& t);
bool is_punct_token(const std::string& t);

/// Token-wise ciphered copy of c plus its exact gold dictionary. Anchors
/// keep their string; everything else maps through a bijection into a
/// vocabulary disjoint from c's. Throws on anchor/cipher collisions in an
/// explicit mapping.
CipherResult make_cipher_language(const Corpus& c, const CipherSpec& spec);

/// Assign lines to the domain whose keyword set they overlap most; a
/// (1 - purity) fraction of lines is assigned at random instead. Lexicons
/// must be disjoint and purity in (0.5, 1].
std::pair<Corpus, Corpus> make_domain_split(
    const Corpus& c, const std::vector<std::string>& lexicon_a,
    const std::vector<std::string>& lexicon_b, double purity,
    std::uint64_t seed);

/// Known-ground-truth alignment instance: n random unit vectors, a random
/// orthogonal map, targets normalize(W x + noise). Tokens are shared
/// strings so the gold dictionary is the identity pairing.
struct RotationInstance {
  EmbeddingMatrix x;
  EmbeddingMatrix y;
  Dictionary gold;
  Mat w_true;
};

RotationInstance make_rotation_instance(Eigen::Index n, Eigen::Index d,
                                        double noise, std::uint64_t seed);

/// Copy of c with a seeded fraction of tokens replaced by draws from
/// replacement_vocab (the off-topic noise ladder used in corpus-similarity
/// experiments).
Corpus replace_tokens(const Corpus& c, double fraction,
                      const std::vector<std::string>& replacement_vocab,
                      std::uint64_t seed);

/// Synthetic topical text: Zipf unigrams per topic, per-word collocate
/// chains, punctuation and digit tokens mixed in. Deterministic per seed.
/// The per-topic exclusive lexicons are returned for domain splitting.
struct TextGenParams {
  std::size_t lines = 50000;
  std::size_t vocab_words = 3000;  // word types, excluding digits/punct
  int topics = 2;
  double topic_fraction = 0.35;  // share of vocab exclusive to each topic
  std::uint64_t seed = 1;
  std::string lang = "en";
  std::string domain = "synth";
};

struct GeneratedText {
  Corpus corpus;
  std::vector<std::vector<std::string>> topic_lexicons;
};

GeneratedText make_text_corpus(const TextGenParams& p);

}  // namespace xlift
