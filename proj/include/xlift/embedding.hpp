#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xlift/corpus.hpp"
#include "xlift/linalg.hpp"

namespace xlift {

/// Token inventory ordered by descending corpus frequency, ties broken
/// lexicographically, so vocabulary construction is deterministic.
struct Vocabulary {
  std::vector<std::string> tokens;
  std::vector<std::int64_t> counts;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return tokens.size(); }
  bool contains(const std::string& t) const { return index.count(t) != 0; }
  /// Position of t, or npos when absent.
  std::size_t lookup(const std::string& t) const {
    auto it = index.find(t);
    return it == index.end() ? npos : it->second;
  }
  std::int64_t total_count() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Tokens with frequency >= min_count. Throws if nothing survives.
Vocabulary build_vocab(const Corpus& c, std::int64_t min_count);

/// Dense |V| x d embedding table over a vocabulary.
struct EmbeddingMatrix {
  Vocabulary vocab;
  Eigen::Index dim = 0;
  Mat rows;
  bool normalized = false;

  /// Row for a token; token must be in vocabulary.
  Eigen::Ref<const Eigen::RowVectorXd> vector(const std::string& t) const {
    return rows.row(static_cast<Eigen::Index>(vocab.index.at(t)));
  }
};

struct SubwordParams {
  int minn = 3;
  int maxn = 6;
  std::size_t bucket_count = 200000;
};

/// Skip-gram-with-negative-sampling hyperparameters. The defaults are the
/// full-scale settings; desk-scale runs typically use dim=50, min_count=1.
struct SgnsParams {
  Eigen::Index dim = 300;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
  std::int64_t min_count = 5;
  double subsample_t = 1e-4;  // 0 disables frequent-word subsampling
  std::optional<SubwordParams> subword;
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const;
};

/// Train input-side SGNS embeddings on c over vocabulary v.
/// Bit-deterministic per seed when workers == 1; with more workers the
/// parameter updates are unsynchronized, the conventional SGNS compromise.
EmbeddingMatrix train_sgns(const Corpus& c, const Vocabulary& v,
                           const SgnsParams& p);

/// Interchange text format: header "<rows> <dim>", then one
/// "<token> <v1> ... <vd>" line per row, 6 significant digits.
void save_embeddings(const EmbeddingMatrix& e, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

/// Copy with every row scaled to unit norm. Throws naming the token of any
/// zero row.
EmbeddingMatrix normalize_rows(const EmbeddingMatrix& e);

/// Restrict e to the tokens of sub (in sub's order), e.g. to pull one
/// language's rows out of a jointly trained space. Tokens missing from e
/// are dropped from the result.
EmbeddingMatrix subset_embeddings(const EmbeddingMatrix& e,
                                  const Vocabulary& sub);

/// FNV-1a of a byte string, the pinned subword hash.
std::uint64_t fnv1a(const std::string& s);

/// Character n-grams of "<" + token + ">" with length in [minn, maxn].
std::vector<std::string> char_ngrams(const std::string& token, int minn,
                                     int maxn);

}  // namespace xlift
