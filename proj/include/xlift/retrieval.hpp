#pragma once

#include <map>
#include <string>
#include <vector>

#include "xlift/alignment.hpp"
#include "xlift/embedding.hpp"
#include "xlift/linalg.hpp"

namespace xlift {

/// Retrieval method: plain nearest neighbor on cosine, or CSLS(k).
struct RetrievalMethod {
  enum class Kind { nn, csls };
  Kind kind = Kind::csls;
  int k = 10;

  static RetrievalMethod nn() { return {Kind::nn, 0}; }
  static RetrievalMethod csls(int k = 10) { return {Kind::csls, k}; }
  std::string str() const {
    return kind == Kind::nn ? "nn" : "csls" + std::to_string(k);
  }
};

struct RetrievalResult {
  std::string source;
  /// (target token, score), scores non-increasing, ties by target index.
  std::vector<std::pair<std::string, double>> candidates;
  bool oov = false;
};

struct BliReport {
  std::map<int, double> accuracy_at;
  std::size_t evaluated = 0;
  std::size_t oov_count = 0;
};

/// CSLS scores of one mapped source vector x against every row of targets:
///   score(x, y_j) = 2 cos(x, y_j) - r_tgt(x) - r_src(y_j)
/// where r_tgt(x) is the mean cosine of x to its k nearest target rows and
/// r_src(y_j) the mean cosine of y_j to its k nearest rows of mapped_ref
/// (the mapped source set). All rows must be unit-normalized.
Vec csls_scores(const Eigen::RowVectorXd& x, const Mat& mapped_ref,
                const Mat& targets, int k);

/// Full query-by-target CSLS score matrix; row i = csls_scores of queries
/// row i. queries and mapped_ref may be the same matrix.
Mat csls_score_matrix(const Mat& queries, const Mat& mapped_ref,
                      const Mat& targets, int k);

/// Cosine score matrix (plain nearest-neighbor scores).
Mat nn_score_matrix(const Mat& queries, const Mat& targets);

/// Top-n targets per query token under the mapping. Mapped vectors are
/// re-normalized so the CSLS precondition holds for near-orthogonal maps.
/// OOV queries are flagged, not fatal.
std::vector<RetrievalResult> retrieve(const MappingModel& w,
                                      const EmbeddingMatrix& x,
                                      const EmbeddingMatrix& y,
                                      const std::vector<std::string>& queries,
                                      const RetrievalMethod& method,
                                      std::size_t top_n);

/// accuracy@c over unique gold source words: a word counts as correct when
/// its top-c candidates intersect its gold translation set. OOV source
/// words are excluded from the denominator and counted separately.
BliReport evaluate_bli(const std::vector<RetrievalResult>& results,
                       const Dictionary& gold,
                       const std::vector<int>& cutoffs = {1, 5});

/// Every source word predicts its own string; retrieval-free.
BliReport copying_baseline(const Dictionary& gold,
                           const std::vector<int>& cutoffs = {1, 5});

/// Unsupervised model-selection objective: mean CSLS score of the top-1
/// translation over the n_eval most frequent source words, with both sides
/// restricted to their n_eval most frequent tokens. By construction this
/// never sees a gold dictionary.
double csls_criterion(const MappingModel& w, const EmbeddingMatrix& x,
                      const EmbeddingMatrix& y, std::size_t n_eval, int k);

}  // namespace xlift
