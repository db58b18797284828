#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xlift/embedding.hpp"
#include "xlift/linalg.hpp"

namespace xlift {

/// Ordered (source, target) word pairs; many-to-many allowed, exact
/// duplicates rejected.
struct Dictionary {
  std::vector<std::pair<std::string, std::string>> pairs;

  std::size_t size() const { return pairs.size(); }
  /// Append unless the exact pair is already present.
  void add(const std::string& src, const std::string& tgt);
};

/// MUSE dictionary file convention: "source_word<ws>target_word" per line,
/// UTF-8; duplicates tolerated and collapsed.
Dictionary load_dictionary(const std::string& path);
void save_dictionary(const Dictionary& d, const std::string& path);

/// d x d linear map from source to target space (x -> W x on column
/// vectors, X * W^T on row-stacked matrices).
struct MappingModel {
  enum class Method { identity, procrustes, adversarial };
  struct Meta {
    std::uint64_t seed = 0;
    int epochs = 0;
    int refinement_iters = 0;
  };

  Mat W;
  Method method = Method::identity;
  Meta meta;

  static MappingModel identity(Eigen::Index d) {
    MappingModel m;
    m.W = Mat::Identity(d, d);
    return m;
  }
  Eigen::Index dim() const { return W.rows(); }
  /// Map row-stacked source vectors into the target space.
  Mat apply(const Mat& x_rows) const { return x_rows * W.transpose(); }
};

void save_mapping(const MappingModel& m, const std::string& path);
MappingModel load_mapping(const std::string& path);

/// One (t, t) pair per token present in both vocabularies, ordered by
/// descending summed frequency, ties lexicographic. Empty intersection
/// yields an empty dictionary.
Dictionary extract_identical_seed(const Vocabulary& vs, const Vocabulary& vt);

/// Orthogonal least-squares alignment over the dictionary pairs:
/// W = U V^T from the SVD of Yt^T Xs, with Xs/Yt the row-stacked vectors of
/// the in-vocabulary pairs. Throws if no pair is in-vocabulary on both
/// sides. ||W^T W - I||_max <= 1e-6 on output.
MappingModel procrustes(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                        const Dictionary& d);

struct RefineOptions {
  int csls_k = 10;
  /// Dictionary induction considers only this many most-frequent tokens per
  /// side (10000 at full scale, 2000 at desk scale).
  std::size_t induce_top = 10000;
};

/// Mutual-CSLS-nearest-neighbor pairs between the most frequent tokens of
/// both sides under the current mapping.
Dictionary induce_dictionary(const MappingModel& w, const EmbeddingMatrix& x,
                             const EmbeddingMatrix& y,
                             const RefineOptions& opt = {});

/// iters rounds of induce_dictionary + procrustes. x and y must be
/// row-normalized.
MappingModel refine(const MappingModel& w, const EmbeddingMatrix& x,
                    const EmbeddingMatrix& y, int iters,
                    const RefineOptions& opt = {});

}  // namespace xlift
