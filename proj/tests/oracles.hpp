// Independent reference implementations used only by the test suites.
// Each oracle recomputes its quantity from the definition with plain loops,
// separately from the library's code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "xlift/corpus.hpp"
#include "xlift/linalg.hpp"

namespace oracle {

using xlift::Mat;
using xlift::Vec;

// Mean of the k largest entries, found by repeated scans (no sorting):
// largest value first, ties at the lower index, summed in selection order.
inline double topk_mean_scan(const std::vector<double>& v, int k) {
  std::vector<bool> taken(v.size(), false);
  double sum = 0.0;
  for (int pick = 0; pick < k; ++pick) {
    int arg = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (taken[i]) continue;
      if (arg < 0 || v[i] > v[static_cast<std::size_t>(arg)])
        arg = static_cast<int>(i);
    }
    taken[static_cast<std::size_t>(arg)] = true;
    sum += v[static_cast<std::size_t>(arg)];
  }
  return sum / k;
}

// CSLS by the definition: full double loop over queries and targets, with
// both neighborhood means recomputed per entry from scratch.
inline Mat csls_brute_force(const Mat& queries, const Mat& mapped_ref,
                            const Mat& targets, int k) {
  const Eigen::Index nq = queries.rows();
  const Eigen::Index nt = targets.rows();
  Mat scores(nq, nt);
  for (Eigen::Index i = 0; i < nq; ++i) {
    std::vector<double> cos_to_targets(static_cast<std::size_t>(nt));
    for (Eigen::Index j = 0; j < nt; ++j)
      cos_to_targets[static_cast<std::size_t>(j)] =
          queries.row(i).dot(targets.row(j));
    const double r_tgt = topk_mean_scan(cos_to_targets, k);
    const int k_src = std::min<int>(k, static_cast<int>(mapped_ref.rows()));
    for (Eigen::Index j = 0; j < nt; ++j) {
      std::vector<double> cos_to_sources(
          static_cast<std::size_t>(mapped_ref.rows()));
      for (Eigen::Index s = 0; s < mapped_ref.rows(); ++s)
        cos_to_sources[static_cast<std::size_t>(s)] =
            targets.row(j).dot(mapped_ref.row(s));
      const double r_src = topk_mean_scan(cos_to_sources, k_src);
      scores(i, j) =
          2.0 * cos_to_targets[static_cast<std::size_t>(j)] - r_tgt - r_src;
    }
  }
  return scores;
}

// Dense LSA-based corpus similarity, recomputed naively: tf-idf with the
// stated weighting, full Jacobi SVD, U*sqrt(S) topics, double-sum means.
struct NaiveStdm {
  double s11, s12, s21, s22, stdm;
};

inline NaiveStdm stdm_naive(const xlift::DocumentSet& a,
                            const xlift::DocumentSet& b, int rank) {
  const std::size_t n = a.docs.size();
  const std::size_t m = b.docs.size();
  const std::size_t total = n + m;

  std::set<std::string> vocab_set;
  auto doc = [&](std::size_t i) -> const std::map<std::string, std::int64_t>& {
    return i < n ? a.docs[i] : b.docs[i - n];
  };
  for (std::size_t i = 0; i < total; ++i)
    for (const auto& [t, c] : doc(i)) {
      (void)c;
      vocab_set.insert(t);
    }
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());

  Mat tfidf = Mat::Zero(static_cast<Eigen::Index>(total),
                        static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t v = 0; v < vocab.size(); ++v) {
    int df = 0;
    for (std::size_t i = 0; i < total; ++i)
      if (doc(i).count(vocab[v])) ++df;
    const double idf =
        std::log((1.0 + static_cast<double>(total)) / (1.0 + df)) + 1.0;
    for (std::size_t i = 0; i < total; ++i) {
      auto it = doc(i).find(vocab[v]);
      if (it != doc(i).end())
        tfidf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) =
            static_cast<double>(it->second) * idf;
    }
  }
  for (Eigen::Index i = 0; i < tfidf.rows(); ++i)
    tfidf.row(i) /= tfidf.row(i).norm();

  Eigen::JacobiSVD<Mat> svd(tfidf, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r =
      std::min<Eigen::Index>(rank, svd.singularValues().size());
  Mat ubar(tfidf.rows(), r);
  for (Eigen::Index c = 0; c < r; ++c)
    ubar.col(c) = svd.matrixU().col(c) * std::sqrt(svd.singularValues()(c));

  auto block_mean = [&](std::size_t row_a, std::size_t na, std::size_t row_b,
                        std::size_t nb) {
    double s = 0.0;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        s += ubar.row(static_cast<Eigen::Index>(row_a + i))
                 .dot(ubar.row(static_cast<Eigen::Index>(row_b + j)));
    return s / (static_cast<double>(na) * static_cast<double>(nb));
  };

  NaiveStdm out{};
  out.s11 = block_mean(0, n, 0, n);
  out.s12 = block_mean(0, n, n, m);
  out.s21 = block_mean(n, m, 0, n);
  out.s22 = block_mean(n, m, n, m);
  out.stdm = (out.s12 + out.s21) / (out.s11 + out.s22);
  return out;
}

// Singular values via the eigenvalues of M^T M (the route the library does
// not take for wide matrices of this shape).
inline std::vector<double> singular_values_by_gram(const Mat& m) {
  const Mat gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  std::vector<double> sv;
  for (Eigen::Index i = eig.eigenvalues().size() - 1; i >= 0; --i)
    sv.push_back(std::sqrt(std::max(eig.eigenvalues()(i), 0.0)));
  return sv;
}

// Rank correlation from first principles: ranks by counting, ties averaged
// by summing the rank positions each value would occupy.
inline double spearman_brute(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double below = 0, equal = 0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] < v[i]) ++below;
        if (v[j] == v[i]) ++equal;
      }
      r[i] = below + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
