#include "xlift/wordsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace xlift {

SimilarityDataset load_similarity_dataset(const std::string& path,
                                          const std::string& lang_a,
                                          const std::string& lang_b) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_similarity_dataset: cannot open " + path);
  SimilarityDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    SimilarityDataset::Pair p;
    std::string score;
    if (!std::getline(ls, p.word_a, '\t') ||
        !std::getline(ls, p.word_b, '\t') || !std::getline(ls, score))
      throw std::runtime_error("load_similarity_dataset: malformed line " +
                               std::to_string(lineno) + " in " + path);
    p.lang_a = lang_a;
    p.lang_b = lang_b;
    p.gold = std::stod(score);
    const double doubled = p.gold * 2.0;
    if (p.gold < 0 || p.gold > 4 || doubled != std::floor(doubled))
      throw std::runtime_error(
          "load_similarity_dataset: score off the 0..4/0.5 scale at line " +
          std::to_string(lineno) + " in " + path);
    ds.pairs.push_back(std::move(p));
  }
  if (ds.pairs.empty())
    throw std::runtime_error("load_similarity_dataset: no pairs in " + path);
  return ds;
}

std::vector<SimPrediction> predict_pairs(const EmbeddingMatrix& emb_a,
                                         const EmbeddingMatrix& emb_b,
                                         const MappingModel* mapping,
                                         const SimilarityDataset& ds) {
  if (!emb_a.normalized || !emb_b.normalized)
    throw std::invalid_argument("predict_pairs: embeddings must be normalized");
  std::vector<SimPrediction> out(ds.pairs.size());
  std::size_t evaluable = 0;
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    const auto& p = ds.pairs[i];
    const std::size_t ia = emb_a.vocab.lookup(p.word_a);
    const std::size_t ib = emb_b.vocab.lookup(p.word_b);
    if (ia == Vocabulary::npos || ib == Vocabulary::npos) {
      out[i].oov = true;
      continue;
    }
    Eigen::RowVectorXd va = emb_a.rows.row(static_cast<Eigen::Index>(ia));
    if (mapping) va = va * mapping->W.transpose();
    const Eigen::RowVectorXd vb =
        emb_b.rows.row(static_cast<Eigen::Index>(ib));
    const double denom = va.norm() * vb.norm();
    out[i].cosine = denom > 0 ? va.dot(vb) / denom : 0.0;
    ++evaluable;
  }
  if (evaluable == 0)
    throw std::runtime_error("predict_pairs: every pair is out of vocabulary");
  return out;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

std::optional<double> pearson(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

SimReport score_similarity(const std::vector<SimPrediction>& predictions,
                           const SimilarityDataset& ds) {
  if (predictions.size() != ds.pairs.size())
    throw std::invalid_argument("score_similarity: prediction/pair mismatch");
  std::vector<double> gold, pred;
  SimReport rep;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].oov) {
      ++rep.oov_count;
      continue;
    }
    gold.push_back(ds.pairs[i].gold);
    pred.push_back(predictions[i].cosine);
  }
  rep.evaluated = gold.size();
  if (rep.evaluated < 2) return rep;  // correlations undefined

  rep.pearson = pearson(gold, pred);
  rep.spearman = pearson(average_ranks(gold), average_ranks(pred));
  if (rep.pearson && rep.spearman && *rep.pearson + *rep.spearman > 0)
    rep.harmonic =
        2.0 * *rep.pearson * *rep.spearman / (*rep.pearson + *rep.spearman);
  return rep;
}

std::string SimReport::to_json() const {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string("null");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", *v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "{\"pearson\":" << num(pearson) << ",\"spearman\":" << num(spearman)
     << ",\"harmonic\":" << num(harmonic) << ",\"n\":" << evaluated
     << ",\"oov\":" << oov_count << "}";
  return os.str();
}

}  // namespace xlift
