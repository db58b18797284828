#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xlift/alignment.hpp"
#include "xlift/embedding.hpp"

namespace xlift {

/// Cross-lingual word-similarity gold data, scored on the 0..4 scale with
/// step 0.5.
struct SimilarityDataset {
  struct Pair {
    std::string word_a, lang_a;
    std::string word_b, lang_b;
    double gold = 0;
  };
  std::vector<Pair> pairs;
};

/// TSV "word_a<TAB>word_b<TAB>score"; languages are supplied by the caller.
/// Off-scale scores are rejected.
SimilarityDataset load_similarity_dataset(const std::string& path,
                                          const std::string& lang_a,
                                          const std::string& lang_b);

struct SimPrediction {
  double cosine = 0;
  bool oov = false;
};

struct SimReport {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> harmonic;
  std::size_t evaluated = 0;
  std::size_t oov_count = 0;

  std::string to_json() const;
};

/// Cosine of (mapped) word_a vector and word_b vector per pair; pairs with
/// either side out of vocabulary are flagged. Without a mapping, emb_a and
/// emb_b must be the same joint space (they may be the same object or two
/// subsets of one space). Throws if every pair is OOV.
std::vector<SimPrediction> predict_pairs(const EmbeddingMatrix& emb_a,
                                         const EmbeddingMatrix& emb_b,
                                         const MappingModel* mapping,
                                         const SimilarityDataset& ds);

/// Pearson on raw values, Spearman as Pearson on average ranks, harmonic
/// mean of the two when their sum is positive. Zero variance on either side
/// leaves the correlations unset rather than failing.
SimReport score_similarity(const std::vector<SimPrediction>& predictions,
                           const SimilarityDataset& ds);

/// Average ranks (1-based, ties averaged). Exposed for the rank-correlation
/// oracle tests.
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace xlift
