#include "xlift/embedding.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace xlift {

std::int64_t Vocabulary::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

Vocabulary build_vocab(const Corpus& c, std::int64_t min_count) {
  if (min_count < 1)
    throw std::invalid_argument("build_vocab: min_count must be >= 1");
  std::unordered_map<std::string, std::int64_t> freq;
  for (const auto& line : c.lines)
    for (const auto& tok : line) ++freq[tok];

  std::vector<std::pair<std::string, std::int64_t>> kept;
  kept.reserve(freq.size());
  for (auto& [tok, n] : freq)
    if (n >= min_count) kept.emplace_back(tok, n);
  if (kept.empty())
    throw std::runtime_error("build_vocab: no token reaches min_count=" +
                             std::to_string(min_count));
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.tokens.reserve(kept.size());
  v.counts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    v.tokens.push_back(kept[i].first);
    v.counts.push_back(kept[i].second);
    v.index.emplace(kept[i].first, i);
  }
  return v;
}

void SgnsParams::validate() const {
  if (dim < 2 || window < 1 || negatives < 1 || epochs < 1 || lr <= 0 ||
      min_count < 1 || workers < 1)
    throw std::invalid_argument("SgnsParams: invalid hyperparameter");
  if (subword && (subword->minn < 1 || subword->maxn < subword->minn ||
                  subword->bucket_count < 1))
    throw std::invalid_argument("SgnsParams: invalid subword settings");
}

void save_embeddings(const EmbeddingMatrix& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_embeddings: cannot open " + path);
  out << e.rows.rows() << ' ' << e.dim << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < e.rows.rows(); ++i) {
    out << e.vocab.tokens[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < e.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.6g", e.rows(i, j));
      out << ' ' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_embeddings: write error on " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_embeddings: cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("load_embeddings: empty file " + path);
  std::istringstream hs(header);
  long long nrows = -1, dim = -1;
  if (!(hs >> nrows >> dim) || nrows < 1 || dim < 1)
    throw std::runtime_error("load_embeddings: malformed header in " + path);

  EmbeddingMatrix e;
  e.dim = static_cast<Eigen::Index>(dim);
  e.rows.resize(nrows, dim);
  e.vocab.tokens.reserve(static_cast<std::size_t>(nrows));
  std::string line;
  for (long long i = 0; i < nrows; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("load_embeddings: expected " +
                               std::to_string(nrows) + " rows, got " +
                               std::to_string(i) + " in " + path);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      throw std::runtime_error("load_embeddings: blank row " +
                               std::to_string(i) + " in " + path);
    if (!e.vocab.index.emplace(tok, static_cast<std::size_t>(i)).second)
      throw std::runtime_error("load_embeddings: duplicate token '" + tok +
                               "' in " + path);
    e.vocab.tokens.push_back(tok);
    for (long long j = 0; j < dim; ++j) {
      double v = 0;
      if (!(ls >> v))
        throw std::runtime_error("load_embeddings: row " + std::to_string(i) +
                                 " has fewer than " + std::to_string(dim) +
                                 " values in " + path);
      e.rows(i, j) = v;
    }
    double extra;
    if (ls >> extra)
      throw std::runtime_error("load_embeddings: row " + std::to_string(i) +
                               " has more than " + std::to_string(dim) +
                               " values in " + path);
  }
  std::string trailing;
  while (std::getline(in, trailing))
    if (!trailing.empty())
      throw std::runtime_error("load_embeddings: more rows than header in " +
                               path);
  // Counts are not stored in the interchange format; synthesize descending
  // ranks so frequency-ordered selections remain meaningful after reload.
  e.vocab.counts.resize(e.vocab.tokens.size());
  for (std::size_t i = 0; i < e.vocab.counts.size(); ++i)
    e.vocab.counts[i] = static_cast<std::int64_t>(e.vocab.counts.size() - i);
  return e;
}

EmbeddingMatrix normalize_rows(const EmbeddingMatrix& e) {
  EmbeddingMatrix out = e;
  for (Eigen::Index i = 0; i < out.rows.rows(); ++i) {
    const double n = out.rows.row(i).norm();
    if (n == 0.0)
      throw std::runtime_error(
          "normalize_rows: zero vector for token '" +
          out.vocab.tokens[static_cast<std::size_t>(i)] + "'");
    out.rows.row(i) /= n;
  }
  out.normalized = true;
  return out;
}

EmbeddingMatrix subset_embeddings(const EmbeddingMatrix& e,
                                  const Vocabulary& sub) {
  EmbeddingMatrix out;
  out.dim = e.dim;
  out.normalized = e.normalized;
  std::vector<std::size_t> src_rows;
  for (std::size_t i = 0; i < sub.tokens.size(); ++i) {
    const std::size_t at = e.vocab.lookup(sub.tokens[i]);
    if (at == Vocabulary::npos) continue;
    const std::size_t pos = out.vocab.tokens.size();
    out.vocab.tokens.push_back(sub.tokens[i]);
    out.vocab.counts.push_back(sub.counts[i]);
    out.vocab.index.emplace(sub.tokens[i], pos);
    src_rows.push_back(at);
  }
  if (out.vocab.tokens.empty())
    throw std::runtime_error("subset_embeddings: no overlapping tokens");
  out.rows.resize(static_cast<Eigen::Index>(src_rows.size()), e.dim);
  for (std::size_t i = 0; i < src_rows.size(); ++i)
    out.rows.row(static_cast<Eigen::Index>(i)) =
        e.rows.row(static_cast<Eigen::Index>(src_rows[i]));
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> char_ngrams(const std::string& token, int minn,
                                     int maxn) {
  const std::string padded = "<" + token + ">";
  std::vector<std::string> grams;
  const int len = static_cast<int>(padded.size());
  for (int start = 0; start < len; ++start)
    for (int n = minn; n <= maxn && start + n <= len; ++n)
      grams.push_back(padded.substr(static_cast<std::size_t>(start),
                                    static_cast<std::size_t>(n)));
  return grams;
}

}  // namespace xlift
