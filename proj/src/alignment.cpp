#include "xlift/alignment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "xlift/retrieval.hpp"

namespace xlift {

void Dictionary::add(const std::string& src, const std::string& tgt) {
  for (const auto& [s, t] : pairs)
    if (s == src && t == tgt) return;
  pairs.emplace_back(src, tgt);
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dictionary: cannot open " + path);
  Dictionary d;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string src, tgt;
    if (!(ls >> src >> tgt)) {
      if (!src.empty())
        throw std::runtime_error("load_dictionary: malformed line '" + line +
                                 "' in " + path);
      continue;  // blank line
    }
    if (seen.emplace(src, tgt).second) d.pairs.emplace_back(src, tgt);
  }
  return d;
}

void save_dictionary(const Dictionary& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dictionary: cannot open " + path);
  for (const auto& [s, t] : d.pairs) out << s << '\t' << t << '\n';
  if (!out) throw std::runtime_error("save_dictionary: write error on " + path);
}

void save_mapping(const MappingModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mapping: cannot open " + path);
  const char* method = m.method == MappingModel::Method::identity ? "identity"
                       : m.method == MappingModel::Method::procrustes
                           ? "procrustes"
                           : "adversarial";
  out << "xlift-map " << m.dim() << ' ' << method << ' ' << m.meta.seed << ' '
      << m.meta.epochs << ' ' << m.meta.refinement_iters << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.W.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.W.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.W(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_mapping: write error on " + path);
}

MappingModel load_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mapping: cannot open " + path);
  std::string magic, method;
  long long d = 0;
  MappingModel m;
  if (!(in >> magic >> d >> method >> m.meta.seed >> m.meta.epochs >>
        m.meta.refinement_iters) ||
      magic != "xlift-map" || d < 1)
    throw std::runtime_error("load_mapping: malformed header in " + path);
  if (method == "identity")
    m.method = MappingModel::Method::identity;
  else if (method == "procrustes")
    m.method = MappingModel::Method::procrustes;
  else if (method == "adversarial")
    m.method = MappingModel::Method::adversarial;
  else
    throw std::runtime_error("load_mapping: unknown method '" + method + "'");
  m.W.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (!(in >> m.W(i, j)))
        throw std::runtime_error("load_mapping: truncated matrix in " + path);
  return m;
}

Dictionary extract_identical_seed(const Vocabulary& vs, const Vocabulary& vt) {
  struct Entry {
    std::string token;
    std::int64_t joint;
  };
  std::vector<Entry> shared;
  for (std::size_t i = 0; i < vs.tokens.size(); ++i) {
    const std::size_t at = vt.lookup(vs.tokens[i]);
    if (at == Vocabulary::npos) continue;
    shared.push_back({vs.tokens[i], vs.counts[i] + vt.counts[at]});
  }
  std::sort(shared.begin(), shared.end(), [](const Entry& a, const Entry& b) {
    if (a.joint != b.joint) return a.joint > b.joint;
    return a.token < b.token;
  });
  Dictionary d;
  for (const auto& e : shared) d.pairs.emplace_back(e.token, e.token);
  return d;
}

MappingModel procrustes(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                        const Dictionary& d) {
  if (x.dim != y.dim)
    throw std::invalid_argument("procrustes: dimension mismatch");
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& [s, t] : d.pairs) {
    const std::size_t si = x.vocab.lookup(s);
    const std::size_t ti = y.vocab.lookup(t);
    if (si != Vocabulary::npos && ti != Vocabulary::npos)
      idx.emplace_back(si, ti);
  }
  if (idx.empty())
    throw std::runtime_error("procrustes: no in-vocabulary dictionary pairs");

  Mat xs(static_cast<Eigen::Index>(idx.size()), x.dim);
  Mat yt(static_cast<Eigen::Index>(idx.size()), y.dim);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    xs.row(static_cast<Eigen::Index>(i)) =
        x.rows.row(static_cast<Eigen::Index>(idx[i].first));
    yt.row(static_cast<Eigen::Index>(i)) =
        y.rows.row(static_cast<Eigen::Index>(idx[i].second));
  }

  MappingModel m;
  m.W = procrustes_rotation(xs, yt);
  m.method = MappingModel::Method::procrustes;
  return m;
}

Dictionary induce_dictionary(const MappingModel& w, const EmbeddingMatrix& x,
                             const EmbeddingMatrix& y,
                             const RefineOptions& opt) {
  const Eigen::Index ns = std::min<Eigen::Index>(
      x.rows.rows(), static_cast<Eigen::Index>(opt.induce_top));
  const Eigen::Index nt = std::min<Eigen::Index>(
      y.rows.rows(), static_cast<Eigen::Index>(opt.induce_top));

  Mat mapped = x.rows.topRows(ns) * w.W.transpose();
  normalize_rows_inplace(mapped);
  const Mat targets = y.rows.topRows(nt);
  const int k = std::min<int>(opt.csls_k, static_cast<int>(std::min(ns, nt)));
  const Mat scores = csls_score_matrix(mapped, mapped, targets, k);

  // mutual nearest neighbors under CSLS; ties resolved toward the lower
  // (more frequent) index
  std::vector<Eigen::Index> best_t(static_cast<std::size_t>(ns));
  std::vector<Eigen::Index> best_s(static_cast<std::size_t>(nt), -1);
  std::vector<double> best_s_score(static_cast<std::size_t>(nt),
                                   -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < ns; ++i) {
    Eigen::Index arg = 0;
    double best = scores(i, 0);
    for (Eigen::Index j = 1; j < nt; ++j)
      if (scores(i, j) > best) {
        best = scores(i, j);
        arg = j;
      }
    best_t[static_cast<std::size_t>(i)] = arg;
    for (Eigen::Index j = 0; j < nt; ++j)
      if (scores(i, j) > best_s_score[static_cast<std::size_t>(j)]) {
        best_s_score[static_cast<std::size_t>(j)] = scores(i, j);
        best_s[static_cast<std::size_t>(j)] = i;
      }
  }

  Dictionary d;
  for (Eigen::Index i = 0; i < ns; ++i) {
    const Eigen::Index j = best_t[static_cast<std::size_t>(i)];
    if (best_s[static_cast<std::size_t>(j)] == i)
      d.pairs.emplace_back(x.vocab.tokens[static_cast<std::size_t>(i)],
                           y.vocab.tokens[static_cast<std::size_t>(j)]);
  }
  if (d.pairs.empty())
    throw std::runtime_error("induce_dictionary: no mutual neighbors");
  return d;
}

MappingModel refine(const MappingModel& w, const EmbeddingMatrix& x,
                    const EmbeddingMatrix& y, int iters,
                    const RefineOptions& opt) {
  if (iters < 1) throw std::invalid_argument("refine: iters must be >= 1");
  MappingModel cur = w;
  for (int it = 0; it < iters; ++it) {
    const Dictionary induced = induce_dictionary(cur, x, y, opt);
    MappingModel next = procrustes(x, y, induced);
    next.meta = cur.meta;
    next.meta.refinement_iters = cur.meta.refinement_iters + 1;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace xlift
