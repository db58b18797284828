#pragma once

#include <string>
#include <vector>

#include "xlift/corpus.hpp"
#include "xlift/linalg.hpp"

namespace xlift {

/// TF-IDF of two document sets over their shared vocabulary, rows stacked
/// A-then-B and L2-normalized. Entry = tf * (ln((1+N)/(1+df)) + 1) with raw
/// term counts and N = n + m.
struct TfidfMatrix {
  Mat rows;  // (n+m) x |V|; dense is fine at the document counts this tool handles
  Eigen::Index n = 0;  // documents of corpus A
  Eigen::Index m = 0;  // documents of corpus B
  std::vector<std::string> vocab;
};

/// Document topic representations U_bar = U_r sqrt(S_r) from the rank-r
/// truncated SVD; first n rows belong to corpus A, last m to corpus B.
struct TopicMatrix {
  Mat u_bar;  // (n+m) x r
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index rank = 0;

  Mat rows_a() const { return u_bar.topRows(n); }
  Mat rows_b() const { return u_bar.bottomRows(m); }
};

/// Full truncated factorization, for reconstruction checks and the topic
/// matrix. Signs are fixed by forcing the largest-magnitude entry of each
/// right singular vector positive.
struct TruncatedSvd {
  Mat u_bar;  // U_r sqrt(S_r)
  Mat v_bar;  // sqrt(S_r) V_r^T  (r x |V|)
  Vec singular_values;
};

struct StdmReport {
  double s11 = 0, s12 = 0, s21 = 0, s22 = 0;
  double stdm = 0;
  Eigen::Index rank = 0;
  std::string segmentation;

  std::string to_json() const;
};

TfidfMatrix build_tfidf(const DocumentSet& a, const DocumentSet& b);

TruncatedSvd truncated_svd_full(const TfidfMatrix& m, Eigen::Index r);
TopicMatrix truncated_svd(const TfidfMatrix& m, Eigen::Index r);

/// Mean pairwise dot product between the rows of ua and ub (the paper's
/// corpus-similarity mean; dot products, not cosines). Computed as
/// mean-row(ua) . mean-row(ub), which is algebraically the double sum.
double cross_similarity(const Mat& ua, const Mat& ub);

/// Compose tf-idf, truncated SVD and the four similarity means into the
/// final ratio (s12 + s21) / (s11 + s22). r is clamped to its valid range
/// by the CLI, not here. segmentation_label is carried into the report.
StdmReport stdm_score(const DocumentSet& a, const DocumentSet& b,
                      Eigen::Index r,
                      const std::string& segmentation_label = "");

}  // namespace xlift
