#include "xlift/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "xlift/rng.hpp"

namespace xlift {

bool is_digit_token(const std::string& t) {
  if (t.empty()) return false;
  return std::all_of(t.begin(), t.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

bool is_punct_token(const std::string& t) {
  if (t.empty()) return false;
  return std::all_of(t.begin(), t.end(), [](unsigned char c) {
    return c < 0x80 && std::ispunct(c);
  });
}

namespace {

const char* kSyllables[] = {"ba", "ce", "di", "fo", "gu", "ka", "le", "mi",
                            "no", "pu", "ra", "se", "ti", "vo", "zu", "qa",
                            "je", "wi", "xo", "hu", "ny", "sha", "kro", "pli"};
constexpr std::size_t kNumSyllables = sizeof(kSyllables) / sizeof(char*);

std::string pseudoword(Rng& rng, int min_syllables, int max_syllables) {
  const int n = min_syllables +
                static_cast<int>(rng.next_below(
                    static_cast<std::uint64_t>(max_syllables - min_syllables + 1)));
  std::string w;
  for (int i = 0; i < n; ++i)
    w += kSyllables[rng.next_below(kNumSyllables)];
  return w;
}

}  // namespace

CipherResult make_cipher_language(const Corpus& c, const CipherSpec& spec) {
  const Vocabulary vocab = build_vocab(c, 1);
  std::unordered_set<std::string> extra(spec.anchors.extra.begin(),
                                        spec.anchors.extra.end());
  auto is_anchor = [&](const std::string& t) {
    return (spec.anchors.digits && is_digit_token(t)) ||
           (spec.anchors.punct && is_punct_token(t)) || extra.count(t) != 0;
  };

  std::unordered_map<std::string, std::string> mapping;
  std::unordered_set<std::string> source_vocab(vocab.tokens.begin(),
                                               vocab.tokens.end());
  if (!spec.mapping.empty()) {
    std::unordered_set<std::string> used;
    for (const auto& [src, dst] : spec.mapping) {
      if (is_anchor(src) && src != dst)
        throw std::runtime_error("make_cipher_language: anchor '" + src +
                                 "' must map to itself");
      if (!is_anchor(dst) && source_vocab.count(dst))
        throw std::runtime_error(
            "make_cipher_language: cipher token '" + dst +
            "' collides with the source vocabulary");
      if (!used.insert(dst).second)
        throw std::runtime_error("make_cipher_language: mapping is not a "
                                 "bijection at '" + dst + "'");
      if (!mapping.emplace(src, dst).second)
        throw std::runtime_error(
            "make_cipher_language: duplicate source '" + src + "' in mapping");
    }
    for (const auto& t : vocab.tokens)
      if (!is_anchor(t) && !mapping.count(t))
        throw std::runtime_error(
            "make_cipher_language: mapping misses token '" + t + "'");
  } else {
    Rng rng(spec.seed);
    std::unordered_set<std::string> used;
    for (const auto& t : vocab.tokens) {
      if (is_anchor(t)) continue;
      std::string dst;
      do {
        dst = "q" + pseudoword(rng, 2, 4);
      } while (source_vocab.count(dst) || used.count(dst));
      used.insert(dst);
      mapping.emplace(t, dst);
    }
  }

  CipherResult out;
  out.corpus.lang = c.lang + "x";
  out.corpus.domain = c.domain;
  out.corpus.doc_bounds = c.doc_bounds;
  out.corpus.lines.reserve(c.lines.size());
  for (const auto& line : c.lines) {
    std::vector<std::string> cl;
    cl.reserve(line.size());
    for (const auto& t : line)
      cl.push_back(is_anchor(t) ? t : mapping.at(t));
    out.corpus.lines.push_back(std::move(cl));
  }

  for (const auto& t : vocab.tokens)  // frequency order
    out.gold.pairs.emplace_back(t, is_anchor(t) ? t : mapping.at(t));
  return out;
}

std::pair<Corpus, Corpus> make_domain_split(
    const Corpus& c, const std::vector<std::string>& lexicon_a,
    const std::vector<std::string>& lexicon_b, double purity,
    std::uint64_t seed) {
  if (purity <= 0.5 || purity > 1.0)
    throw std::invalid_argument("make_domain_split: purity must be in (0.5, 1]");
  std::unordered_set<std::string> la(lexicon_a.begin(), lexicon_a.end());
  std::unordered_set<std::string> lb(lexicon_b.begin(), lexicon_b.end());
  for (const auto& t : lexicon_a)
    if (lb.count(t))
      throw std::invalid_argument(
          "make_domain_split: lexicons share token '" + t + "'");

  Corpus da, db;
  da.lang = db.lang = c.lang;
  da.domain = c.domain + "-d1";
  db.domain = c.domain + "-d2";
  Rng rng(seed);
  for (const auto& line : c.lines) {
    long long overlap_a = 0, overlap_b = 0;
    for (const auto& t : line) {
      if (la.count(t)) ++overlap_a;
      if (lb.count(t)) ++overlap_b;
    }
    bool to_a;
    if (rng.next_double() >= purity)
      to_a = rng.next_double() < 0.5;  // the random remainder
    else if (overlap_a != overlap_b)
      to_a = overlap_a > overlap_b;
    else
      to_a = rng.next_double() < 0.5;  // no lexicon signal on this line
    (to_a ? da : db).lines.push_back(line);
  }
  if (da.lines.empty() || db.lines.empty())
    throw std::runtime_error("make_domain_split: a domain received zero lines");
  return {std::move(da), std::move(db)};
}

RotationInstance make_rotation_instance(Eigen::Index n, Eigen::Index d,
                                        double noise, std::uint64_t seed) {
  if (d < 2 || n <= d || noise < 0)
    throw std::invalid_argument("make_rotation_instance: need n > d >= 2, noise >= 0");
  Rng rng(seed);
  RotationInstance inst;
  inst.x.dim = d;
  inst.x.rows = random_unit_rows<double>(n, d, rng);
  inst.x.normalized = true;
  inst.w_true = random_orthogonal<double>(d, rng);

  inst.y.dim = d;
  inst.y.rows = inst.x.rows * inst.w_true.transpose();
  if (noise > 0)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        inst.y.rows(i, j) += noise * rng.next_gaussian();
  normalize_rows_inplace(inst.y.rows);
  inst.y.normalized = true;

  char buf[32];
  for (Eigen::Index i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "w%05lld", static_cast<long long>(i));
    inst.x.vocab.tokens.emplace_back(buf);
    inst.x.vocab.counts.push_back(n - i);
    inst.x.vocab.index.emplace(buf, static_cast<std::size_t>(i));
    inst.gold.pairs.emplace_back(buf, buf);
  }
  inst.y.vocab = inst.x.vocab;
  return inst;
}

Corpus replace_tokens(const Corpus& c, double fraction,
                      const std::vector<std::string>& replacement_vocab,
                      std::uint64_t seed) {
  if (fraction < 0 || fraction > 1)
    throw std::invalid_argument("replace_tokens: fraction must be in [0, 1]");
  if (replacement_vocab.empty())
    throw std::invalid_argument("replace_tokens: empty replacement vocabulary");
  Corpus out = c;
  Rng rng(seed);
  for (auto& line : out.lines)
    for (auto& t : line)
      if (rng.next_double() < fraction)
        t = replacement_vocab[rng.next_below(replacement_vocab.size())];
  return out;
}

GeneratedText make_text_corpus(const TextGenParams& p) {
  if (p.lines < 1 || p.vocab_words < 50 || p.topics < 1 ||
      p.topic_fraction <= 0 || p.topic_fraction * p.topics >= 1.0)
    throw std::invalid_argument("make_text_corpus: invalid parameters");

  Rng rng(p.seed);

  // vocabulary: unique pseudowords; the first topic_fraction*V per topic are
  // exclusive, the remainder is shared core
  std::vector<std::string> words;
  std::set<std::string> seen;
  while (words.size() < p.vocab_words) {
    std::string w = pseudoword(rng, 2, 4);
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  const std::size_t per_topic =
      static_cast<std::size_t>(p.topic_fraction * static_cast<double>(p.vocab_words));
  const std::size_t core_begin = per_topic * static_cast<std::size_t>(p.topics);

  GeneratedText out;
  out.topic_lexicons.resize(static_cast<std::size_t>(p.topics));
  for (int t = 0; t < p.topics; ++t)
    out.topic_lexicons[static_cast<std::size_t>(t)].assign(
        words.begin() + static_cast<long>(per_topic) * t,
        words.begin() + static_cast<long>(per_topic) * (t + 1));

  // per-topic candidate pool: exclusive slice + shared core
  std::vector<std::vector<std::size_t>> pools(static_cast<std::size_t>(p.topics));
  for (int t = 0; t < p.topics; ++t) {
    auto& pool = pools[static_cast<std::size_t>(t)];
    for (std::size_t i = per_topic * static_cast<std::size_t>(t);
         i < per_topic * static_cast<std::size_t>(t + 1); ++i)
      pool.push_back(i);
    for (std::size_t i = core_begin; i < p.vocab_words; ++i) pool.push_back(i);
  }

  // Zipf cumulative weights over a pool position
  auto make_cdf = [](std::size_t n) {
    std::vector<double> cdf(n);
    double cum = 0;
    for (std::size_t r = 0; r < n; ++r) {
      cum += 1.0 / std::pow(static_cast<double>(r) + 2.7, 1.07);
      cdf[r] = cum;
    }
    for (auto& v : cdf) v /= cum;
    return cdf;
  };
  std::vector<std::vector<double>> cdfs;
  for (const auto& pool : pools) cdfs.push_back(make_cdf(pool.size()));

  auto draw_from_pool = [&](int topic) {
    const auto& cdf = cdfs[static_cast<std::size_t>(topic)];
    const double u = rng.next_double();
    const std::size_t at = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    return pools[static_cast<std::size_t>(topic)][std::min(at, cdf.size() - 1)];
  };

  // fixed collocates give each word a co-occurrence signature of its own
  constexpr std::size_t kCollocates = 6;
  std::vector<std::vector<std::size_t>> collocates(p.vocab_words);
  for (std::size_t w = 0; w < p.vocab_words; ++w) {
    const int topic = w < core_begin
                          ? static_cast<int>(w / per_topic)
                          : static_cast<int>(rng.next_below(
                                static_cast<std::uint64_t>(p.topics)));
    for (std::size_t k = 0; k < kCollocates; ++k)
      collocates[w].push_back(draw_from_pool(topic));
  }

  out.corpus.lang = p.lang;
  out.corpus.domain = p.domain;
  out.corpus.lines.reserve(p.lines);
  for (std::size_t li = 0; li < p.lines; ++li) {
    const int topic =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.topics)));
    const std::size_t len = 7 + rng.next_below(8);
    std::vector<std::string> line;
    line.reserve(len + 4);
    std::size_t cur = draw_from_pool(topic);
    for (std::size_t i = 0; i < len; ++i) {
      line.push_back(words[cur]);
      if (i + 1 < len && rng.next_double() < 0.15)
        line.push_back(",");
      if (rng.next_double() < 0.06)
        line.push_back(std::to_string(rng.next_below(100)));
      cur = rng.next_double() < 0.5
                ? collocates[cur][rng.next_below(kCollocates)]
                : draw_from_pool(topic);
    }
    line.push_back(rng.next_double() < 0.1 ? "!" : ".");
    out.corpus.lines.push_back(std::move(line));
  }
  return out;
}

}  // namespace xlift
