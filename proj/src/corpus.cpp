#include "xlift/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xlift/rng.hpp"

namespace xlift {

std::string SegmentPolicy::str() const {
  if (kind == Kind::native) return "native";
  return "block:" + std::to_string(block_lines);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (unsigned char ch : line) {
    if (ch < 0x80 && std::isspace(ch)) {
      flush();
    } else if (ch < 0x80 && std::ispunct(ch)) {
      flush();
      out.emplace_back(1, static_cast<char>(ch));
    } else {
      cur.push_back(ch < 0x80 ? static_cast<char>(std::tolower(ch))
                              : static_cast<char>(ch));
    }
  }
  flush();
  return out;
}

Corpus load_corpus(const std::string& path, const std::string& lang,
                   const std::string& domain, const std::string& bounds_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_corpus: cannot open " + path);
  Corpus c;
  c.lang = lang;
  c.domain = domain;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = tokenize(line);
    if (!toks.empty()) c.lines.push_back(std::move(toks));
  }
  if (in.bad()) throw std::runtime_error("load_corpus: read error on " + path);
  if (c.lines.empty())
    throw std::runtime_error("load_corpus: no non-empty lines in " + path);

  if (!bounds_path.empty()) {
    std::ifstream bin(bounds_path);
    if (!bin)
      throw std::runtime_error("load_corpus: cannot open " + bounds_path);
    std::vector<std::size_t> bounds;
    long long v = 0;
    while (bin >> v) bounds.push_back(static_cast<std::size_t>(v));
    if (bounds.empty() || bounds.front() != 0)
      throw std::runtime_error("doc bounds must start at 0: " + bounds_path);
    for (std::size_t i = 1; i < bounds.size(); ++i)
      if (bounds[i] <= bounds[i - 1])
        throw std::runtime_error("doc bounds not strictly increasing: " +
                                 bounds_path);
    if (bounds.back() >= c.lines.size())
      throw std::runtime_error("doc bound exceeds line count: " + bounds_path);
    c.doc_bounds = std::move(bounds);
  }
  return c;
}

void save_corpus(const Corpus& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_corpus: cannot open " + path);
  for (const auto& line : c.lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << ' ';
      out << line[i];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_corpus: write error on " + path);
}

Corpus sample_lines(const Corpus& c, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_lines: n must be >= 1");
  Corpus out;
  out.lang = c.lang;
  out.domain = c.domain;
  const std::size_t k = std::min(n, c.lines.size());
  Rng rng(seed);
  for (std::size_t i : rng.sample_indices(c.lines.size(), k))
    out.lines.push_back(c.lines[i]);
  return out;
}

Corpus concat_shuffle(const Corpus& a, const Corpus& b, std::uint64_t seed) {
  Corpus out;
  out.lang = a.lang + "+" + b.lang;
  out.domain = a.domain + "+" + b.domain;
  out.lines.reserve(a.lines.size() + b.lines.size());
  out.lines.insert(out.lines.end(), a.lines.begin(), a.lines.end());
  out.lines.insert(out.lines.end(), b.lines.begin(), b.lines.end());
  Rng rng(seed);
  rng.shuffle(out.lines);
  return out;
}

DocumentSet segment_documents(const Corpus& c, const SegmentPolicy& policy) {
  DocumentSet ds;
  ds.lang = c.lang;
  ds.domain = c.domain;

  auto bag_span = [&](std::size_t begin, std::size_t end) {
    std::map<std::string, std::int64_t> bag;
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& tok : c.lines[i]) ++bag[tok];
    return bag;
  };

  if (policy.kind == SegmentPolicy::Kind::native) {
    if (!c.doc_bounds)
      throw std::runtime_error(
          "segment_documents: native policy requires doc_bounds");
    const auto& b = *c.doc_bounds;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::size_t end = (i + 1 < b.size()) ? b[i + 1] : c.lines.size();
      ds.docs.push_back(bag_span(b[i], end));
    }
  } else {
    if (policy.block_lines < 1)
      throw std::invalid_argument("segment_documents: block size must be >= 1");
    for (std::size_t start = 0; start < c.lines.size();
         start += policy.block_lines)
      ds.docs.push_back(
          bag_span(start, std::min(start + policy.block_lines, c.lines.size())));
  }
  if (ds.docs.empty())
    throw std::runtime_error("segment_documents: empty corpus");
  return ds;
}

}  // namespace xlift
