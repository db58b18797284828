#include "xlift/retrieval.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace xlift {

namespace {

void require_unit_rows(const Mat& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::abs(m.row(i).norm() - 1.0) > 1e-6)
      throw std::invalid_argument(std::string("csls: ") + what +
                                  " rows must be unit-normalized");
}

// The CSLS arithmetic is pinned so an independent double-loop oracle can
// reproduce it bit-for-bit: cosines are row dot products, neighborhood
// means sum the k largest cosines in descending order (ties by index), and
// the score is assembled as 2*cos - r_tgt - r_src.
Mat cosine_rows(const Mat& a, const Mat& b) {
  Mat out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      out(i, j) = a.row(i).dot(b.row(j));
  return out;
}

Vec topk_row_means(const Mat& cos, int k) {
  Vec r(cos.rows());
  std::vector<double> row(static_cast<std::size_t>(cos.cols()));
  for (Eigen::Index i = 0; i < cos.rows(); ++i) {
    for (Eigen::Index j = 0; j < cos.cols(); ++j)
      row[static_cast<std::size_t>(j)] = cos(i, j);
    r(i) = topk_mean(row, static_cast<std::size_t>(k));
  }
  return r;
}

}  // namespace

Mat csls_score_matrix(const Mat& queries, const Mat& mapped_ref,
                      const Mat& targets, int k) {
  if (k < 1 || k > targets.rows())
    throw std::invalid_argument("csls: k out of range");
  require_unit_rows(queries, "query");
  require_unit_rows(targets, "target");

  const Mat cos_qt = cosine_rows(queries, targets);
  const Vec r_tgt = topk_row_means(cos_qt, k);

  // the source-side neighborhood cannot exceed the mapped-source count
  const int k_src = std::min<int>(k, static_cast<int>(mapped_ref.rows()));
  Vec r_src;
  if (&queries == &mapped_ref) {
    r_src = topk_row_means(cos_qt.transpose(), k_src);
  } else {
    require_unit_rows(mapped_ref, "mapped source");
    r_src = topk_row_means(cosine_rows(targets, mapped_ref), k_src);
  }

  Mat scores(queries.rows(), targets.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (Eigen::Index j = 0; j < scores.cols(); ++j)
      scores(i, j) = 2.0 * cos_qt(i, j) - r_tgt(i) - r_src(j);
  return scores;
}

Vec csls_scores(const Eigen::RowVectorXd& x, const Mat& mapped_ref,
                const Mat& targets, int k) {
  Mat q(1, x.size());
  q.row(0) = x;
  return csls_score_matrix(q, mapped_ref, targets, k).row(0).transpose();
}

Mat nn_score_matrix(const Mat& queries, const Mat& targets) {
  return cosine_rows(queries, targets);
}

std::vector<RetrievalResult> retrieve(const MappingModel& w,
                                      const EmbeddingMatrix& x,
                                      const EmbeddingMatrix& y,
                                      const std::vector<std::string>& queries,
                                      const RetrievalMethod& method,
                                      std::size_t top_n) {
  if (!x.normalized || !y.normalized)
    throw std::invalid_argument("retrieve: embeddings must be row-normalized");
  if (w.dim() != x.dim)
    throw std::invalid_argument("retrieve: mapping/embedding dim mismatch");

  Mat mapped = x.rows * w.W.transpose();
  normalize_rows_inplace(mapped);

  std::vector<Eigen::Index> qidx;
  std::vector<std::size_t> qslot;
  std::vector<RetrievalResult> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out[i].source = queries[i];
    const std::size_t at = x.vocab.lookup(queries[i]);
    if (at == Vocabulary::npos) {
      out[i].oov = true;
      continue;
    }
    qidx.push_back(static_cast<Eigen::Index>(at));
    qslot.push_back(i);
  }
  if (qidx.empty()) return out;

  Mat q(static_cast<Eigen::Index>(qidx.size()), x.dim);
  for (std::size_t i = 0; i < qidx.size(); ++i)
    q.row(static_cast<Eigen::Index>(i)) = mapped.row(qidx[i]);

  const Mat scores =
      method.kind == RetrievalMethod::Kind::nn
          ? nn_score_matrix(q, y.rows)
          : csls_score_matrix(q, mapped, y.rows,
                              std::min<int>(method.k,
                                            static_cast<int>(y.rows.rows())));

  const std::size_t nt = static_cast<std::size_t>(y.rows.rows());
  const std::size_t keep = std::min(top_n, nt);
  std::vector<Eigen::Index> order(nt);
  for (std::size_t r = 0; r < qidx.size(); ++r) {
    const auto row = scores.row(static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < nt; ++j)
      order[j] = static_cast<Eigen::Index>(j);
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep),
                      order.end(), [&](Eigen::Index a, Eigen::Index b) {
                        if (row(a) != row(b)) return row(a) > row(b);
                        return a < b;
                      });
    auto& res = out[qslot[r]];
    res.candidates.reserve(keep);
    for (std::size_t j = 0; j < keep; ++j)
      res.candidates.emplace_back(
          y.vocab.tokens[static_cast<std::size_t>(order[j])], row(order[j]));
  }
  return out;
}

BliReport evaluate_bli(const std::vector<RetrievalResult>& results,
                       const Dictionary& gold,
                       const std::vector<int>& cutoffs) {
  if (gold.pairs.empty())
    throw std::invalid_argument("evaluate_bli: empty gold dictionary");

  std::unordered_map<std::string, std::set<std::string>> translations;
  std::vector<std::string> order;
  for (const auto& [s, t] : gold.pairs) {
    if (!translations.count(s)) order.push_back(s);
    translations[s].insert(t);
  }
  std::unordered_map<std::string, const RetrievalResult*> by_source;
  for (const auto& r : results) by_source.emplace(r.source, &r);

  BliReport rep;
  std::map<int, std::size_t> hits;
  for (int c : cutoffs) hits[c] = 0;
  for (const auto& s : order) {
    auto it = by_source.find(s);
    if (it == by_source.end())
      throw std::invalid_argument("evaluate_bli: no retrieval result for '" +
                                  s + "'");
    const RetrievalResult& r = *it->second;
    if (r.oov) {
      ++rep.oov_count;
      continue;
    }
    ++rep.evaluated;
    const auto& gold_set = translations[s];
    std::size_t best_rank = 0;  // 1-based rank of first gold hit, 0 = miss
    for (std::size_t j = 0; j < r.candidates.size(); ++j)
      if (gold_set.count(r.candidates[j].first)) {
        best_rank = j + 1;
        break;
      }
    for (int c : cutoffs)
      if (best_rank != 0 && best_rank <= static_cast<std::size_t>(c))
        ++hits[c];
  }
  if (rep.evaluated == 0)
    throw std::runtime_error("evaluate_bli: no evaluable source words");
  for (int c : cutoffs)
    rep.accuracy_at[c] =
        static_cast<double>(hits[c]) / static_cast<double>(rep.evaluated);
  return rep;
}

BliReport copying_baseline(const Dictionary& gold,
                           const std::vector<int>& cutoffs) {
  if (gold.pairs.empty())
    throw std::invalid_argument("copying_baseline: empty gold dictionary");
  std::unordered_map<std::string, std::set<std::string>> translations;
  std::vector<std::string> order;
  for (const auto& [s, t] : gold.pairs) {
    if (!translations.count(s)) order.push_back(s);
    translations[s].insert(t);
  }
  std::size_t hits = 0;
  for (const auto& s : order)
    if (translations[s].count(s)) ++hits;

  BliReport rep;
  rep.evaluated = order.size();
  rep.oov_count = 0;
  const double acc =
      static_cast<double>(hits) / static_cast<double>(rep.evaluated);
  for (int c : cutoffs) rep.accuracy_at[c] = acc;
  return rep;
}

double csls_criterion(const MappingModel& w, const EmbeddingMatrix& x,
                      const EmbeddingMatrix& y, std::size_t n_eval, int k) {
  if (n_eval < 1 || n_eval > static_cast<std::size_t>(x.rows.rows()))
    throw std::invalid_argument("csls_criterion: n_eval out of range");
  const Eigen::Index ns = static_cast<Eigen::Index>(n_eval);
  const Eigen::Index nt = std::min<Eigen::Index>(
      y.rows.rows(), static_cast<Eigen::Index>(n_eval));

  Mat mapped = x.rows.topRows(ns) * w.W.transpose();
  normalize_rows_inplace(mapped);
  const Mat targets = y.rows.topRows(nt);
  const int kk = std::min<int>(k, static_cast<int>(std::min(ns, nt)));
  const Mat scores = csls_score_matrix(mapped, mapped, targets, kk);

  double sum = 0.0;
  for (Eigen::Index i = 0; i < ns; ++i) sum += scores.row(i).maxCoeff();
  return sum / static_cast<double>(ns);
}

}  // namespace xlift
