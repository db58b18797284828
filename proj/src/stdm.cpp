#include "xlift/stdm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace xlift {

TfidfMatrix build_tfidf(const DocumentSet& a, const DocumentSet& b) {
  if (a.docs.empty() || b.docs.empty())
    throw std::invalid_argument("build_tfidf: empty document set");

  const std::size_t n = a.docs.size();
  const std::size_t total = n + b.docs.size();
  auto doc_at = [&](std::size_t i) -> const std::map<std::string, std::int64_t>& {
    return i < n ? a.docs[i] : b.docs[i - n];
  };

  std::map<std::string, Eigen::Index> term_index;  // sorted -> deterministic
  std::map<std::string, std::int64_t> df;
  for (std::size_t i = 0; i < total; ++i) {
    if (doc_at(i).empty())
      throw std::runtime_error("build_tfidf: empty document at index " +
                               std::to_string(i));
    for (const auto& [term, cnt] : doc_at(i)) {
      (void)cnt;
      ++df[term];
    }
  }
  TfidfMatrix out;
  out.n = static_cast<Eigen::Index>(n);
  out.m = static_cast<Eigen::Index>(b.docs.size());
  out.vocab.reserve(df.size());
  for (const auto& [term, _] : df) {
    term_index.emplace(term, static_cast<Eigen::Index>(out.vocab.size()));
    out.vocab.push_back(term);
  }

  out.rows = Mat::Zero(static_cast<Eigen::Index>(total),
                       static_cast<Eigen::Index>(out.vocab.size()));
  const double big_n = static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) {
    for (const auto& [term, cnt] : doc_at(i)) {
      const double idf =
          std::log((1.0 + big_n) / (1.0 + static_cast<double>(df[term]))) + 1.0;
      out.rows(static_cast<Eigen::Index>(i), term_index[term]) =
          static_cast<double>(cnt) * idf;
    }
  }
  normalize_rows_inplace(out.rows);
  return out;
}

TruncatedSvd truncated_svd_full(const TfidfMatrix& m, Eigen::Index r) {
  const Eigen::Index docs = m.rows.rows();
  const Eigen::Index terms = m.rows.cols();
  if (r < 1 || r > std::min(docs, terms))
    throw std::invalid_argument("truncated_svd: rank out of range");

  // Eigendecompose the smaller Gram matrix; documents are usually far fewer
  // than terms for this tool's inputs.
  TruncatedSvd out;
  out.singular_values.resize(r);
  Mat u(docs, r);
  Mat vt(r, terms);

  if (docs <= terms) {
    const Mat gram = m.rows * m.rows.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("truncated_svd: eigensolver failed");
    // eigenvalues ascending; take the top r from the back
    for (Eigen::Index i = 0; i < r; ++i) {
      const Eigen::Index at = docs - 1 - i;
      const double s = std::sqrt(std::max(eig.eigenvalues()(at), 0.0));
      out.singular_values(i) = s;
      u.col(i) = eig.eigenvectors().col(at);
      if (s > 0)
        vt.row(i) = (m.rows.transpose() * u.col(i)).transpose() / s;
      else
        vt.row(i).setZero();
    }
  } else {
    const Mat gram = m.rows.transpose() * m.rows;
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("truncated_svd: eigensolver failed");
    for (Eigen::Index i = 0; i < r; ++i) {
      const Eigen::Index at = terms - 1 - i;
      const double s = std::sqrt(std::max(eig.eigenvalues()(at), 0.0));
      out.singular_values(i) = s;
      vt.row(i) = eig.eigenvectors().col(at).transpose();
      if (s > 0)
        u.col(i) = m.rows * eig.eigenvectors().col(at) / s;
      else
        u.col(i).setZero();
    }
  }

  // sign convention: largest-magnitude entry of each right singular vector
  // positive (first such index on ties), so reports are deterministic
  for (Eigen::Index i = 0; i < r; ++i) {
    Eigen::Index arg = 0;
    vt.row(i).cwiseAbs().maxCoeff(&arg);
    if (vt(i, arg) < 0) {
      vt.row(i) = -vt.row(i);
      u.col(i) = -u.col(i);
    }
  }

  out.u_bar = u;
  out.v_bar = vt;
  for (Eigen::Index i = 0; i < r; ++i) {
    const double root = std::sqrt(out.singular_values(i));
    out.u_bar.col(i) *= root;
    out.v_bar.row(i) *= root;
  }
  return out;
}

TopicMatrix truncated_svd(const TfidfMatrix& m, Eigen::Index r) {
  TopicMatrix t;
  t.u_bar = truncated_svd_full(m, r).u_bar;
  t.n = m.n;
  t.m = m.m;
  t.rank = r;
  return t;
}

double cross_similarity(const Mat& ua, const Mat& ub) {
  if (ua.cols() != ub.cols())
    throw std::invalid_argument("cross_similarity: rank mismatch");
  if (ua.rows() == 0 || ub.rows() == 0)
    throw std::invalid_argument("cross_similarity: empty topic matrix");
  const Eigen::RowVectorXd mean_a = ua.colwise().mean();
  const Eigen::RowVectorXd mean_b = ub.colwise().mean();
  return mean_a.dot(mean_b);
}

std::string StdmReport::to_json() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\"s11\":%.17g,\"s12\":%.17g,\"s21\":%.17g,\"s22\":%.17g,"
                "\"stdm\":%.17g,\"rank\":%lld,\"segmentation\":\"%s\"}",
                s11, s12, s21, s22, stdm, static_cast<long long>(rank),
                segmentation.c_str());
  return buf;
}

StdmReport stdm_score(const DocumentSet& a, const DocumentSet& b,
                      Eigen::Index r, const std::string& segmentation_label) {
  const TfidfMatrix tfidf = build_tfidf(a, b);
  const TopicMatrix topics = truncated_svd(tfidf, r);
  const Mat ua = topics.rows_a();
  const Mat ub = topics.rows_b();

  StdmReport rep;
  rep.rank = r;
  rep.segmentation = segmentation_label;
  rep.s11 = cross_similarity(ua, ua);
  rep.s12 = cross_similarity(ua, ub);
  rep.s21 = cross_similarity(ub, ua);
  rep.s22 = cross_similarity(ub, ub);
  const double denom = rep.s11 + rep.s22;
  if (denom == 0.0)
    throw std::runtime_error("stdm_score: degenerate corpora (s11 + s22 = 0)");
  rep.stdm = (rep.s12 + rep.s21) / denom;
  return rep;
}

}  // namespace xlift
