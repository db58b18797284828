#include "xlift/sgns.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace xlift {

NegativeSampler::NegativeSampler(const std::vector<std::int64_t>& counts,
                                 double power, std::size_t table_size) {
  if (counts.empty())
    throw std::invalid_argument("NegativeSampler: empty vocabulary");
  double total = 0.0;
  for (auto c : counts) total += std::pow(static_cast<double>(c), power);
  table_.resize(table_size);
  std::size_t i = 0;
  double cum = std::pow(static_cast<double>(counts[0]), power) / total;
  for (std::size_t slot = 0; slot < table_size; ++slot) {
    table_[slot] = static_cast<std::uint32_t>(i);
    if (static_cast<double>(slot + 1) / static_cast<double>(table_size) > cum &&
        i + 1 < counts.size()) {
      ++i;
      cum += std::pow(static_cast<double>(counts[i]), power) / total;
    }
  }
}

namespace {

constexpr int kExpTableSize = 1000;
constexpr double kMaxExp = 6.0;

struct SigmoidTable {
  double value[kExpTableSize];
  SigmoidTable() {
    for (int i = 0; i < kExpTableSize; ++i) {
      const double x = (2.0 * i / kExpTableSize - 1.0) * kMaxExp;
      const double e = std::exp(x);
      value[i] = e / (e + 1.0);
    }
  }
  // sigmoid(x), clipped to the table range like the reference trainers
  double operator()(double x) const {
    if (x >= kMaxExp) return 1.0;
    if (x <= -kMaxExp) return 0.0;
    const int i = static_cast<int>((x + kMaxExp) * (kExpTableSize / (2 * kMaxExp)));
    return value[std::min(i, kExpTableSize - 1)];
  }
};

const SigmoidTable kSigmoid;

struct TrainerState {
  const Corpus* corpus = nullptr;
  const Vocabulary* vocab = nullptr;
  SgnsParams params;
  // id sequences per line, OOV tokens dropped
  std::vector<std::vector<std::uint32_t>> line_ids;
  std::vector<std::vector<std::uint32_t>> ngram_ids;  // per vocab word
  std::int64_t total_tokens = 0;
  Mat syn0;     // input vectors: |V| (+ buckets) x d
  Mat syn1neg;  // output vectors: |V| x d
  NegativeSampler* sampler = nullptr;
  std::atomic<std::int64_t> processed{0};
};

void train_worker(TrainerState& st, int worker_id) {
  const auto& p = st.params;
  const Eigen::Index dim = p.dim;
  const std::size_t n_lines = st.line_ids.size();
  const std::size_t begin = n_lines * static_cast<std::size_t>(worker_id) /
                            static_cast<std::size_t>(p.workers);
  const std::size_t end = n_lines * static_cast<std::size_t>(worker_id + 1) /
                          static_cast<std::size_t>(p.workers);
  Rng rng(p.seed + 0x517cc1b727220a95ULL * static_cast<std::uint64_t>(worker_id + 1));

  const double total_words =
      static_cast<double>(st.total_tokens) * p.epochs + 1.0;
  const double subsample_total =
      p.subsample_t * static_cast<double>(st.vocab->total_count());

  Eigen::RowVectorXd hidden(dim), grad(dim);
  std::vector<std::uint32_t> sent;
  std::int64_t local_words = 0;
  double alpha = p.lr;

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    for (std::size_t li = begin; li < end; ++li) {
      const auto& ids = st.line_ids[li];
      local_words += static_cast<std::int64_t>(ids.size());
      if (local_words >= 10000 || p.workers == 1) {
        st.processed.fetch_add(local_words, std::memory_order_relaxed);
        local_words = 0;
        const double done =
            static_cast<double>(st.processed.load(std::memory_order_relaxed));
        alpha = p.lr * std::max(1.0 - done / total_words, 1e-4);
      }

      // frequent-word subsampling
      sent.clear();
      for (auto id : ids) {
        if (p.subsample_t > 0) {
          const double f = static_cast<double>((*st.vocab).counts[id]);
          const double keep =
              (std::sqrt(f / subsample_total) + 1.0) * subsample_total / f;
          if (keep < 1.0 && rng.next_double() > keep) continue;
        }
        sent.push_back(id);
      }
      if (sent.size() < 2) continue;

      for (std::size_t pos = 0; pos < sent.size(); ++pos) {
        const std::uint32_t center = sent[pos];
        const int shrink = static_cast<int>(rng.next_below(
            static_cast<std::uint64_t>(p.window)));
        const int radius = p.window - shrink;

        const auto& grams = st.ngram_ids[center];
        const double inv_comp = 1.0 / static_cast<double>(1 + grams.size());
        if (grams.empty()) {
          hidden = st.syn0.row(center);
        } else {
          hidden = st.syn0.row(center);
          for (auto g : grams) hidden += st.syn0.row(g);
          hidden *= inv_comp;
        }

        grad.setZero();
        bool updated = false;
        for (int off = -radius; off <= radius; ++off) {
          if (off == 0) continue;
          const long long cpos = static_cast<long long>(pos) + off;
          if (cpos < 0 || cpos >= static_cast<long long>(sent.size())) continue;
          const std::uint32_t context = sent[static_cast<std::size_t>(cpos)];
          updated = true;

          for (int k = 0; k <= p.negatives; ++k) {
            std::uint32_t target;
            double label;
            if (k == 0) {
              target = context;
              label = 1.0;
            } else {
              target = static_cast<std::uint32_t>(st.sampler->sample(rng));
              if (target == context) continue;
              label = 0.0;
            }
            const double f = hidden.dot(st.syn1neg.row(target));
            const double g = (label - kSigmoid(f)) * alpha;
            grad += g * st.syn1neg.row(target);
            st.syn1neg.row(target) += g * hidden;
          }
        }
        if (!updated) continue;
        if (grams.empty()) {
          st.syn0.row(center) += grad;
        } else {
          grad *= inv_comp;
          st.syn0.row(center) += grad;
          for (auto g : grams) st.syn0.row(g) += grad;
        }
      }
    }
  }
  st.processed.fetch_add(local_words, std::memory_order_relaxed);
}

}  // namespace

EmbeddingMatrix train_sgns(const Corpus& c, const Vocabulary& v,
                           const SgnsParams& p) {
  p.validate();

  TrainerState st;
  st.corpus = &c;
  st.vocab = &v;
  st.params = p;

  st.line_ids.reserve(c.lines.size());
  for (const auto& line : c.lines) {
    std::vector<std::uint32_t> ids;
    ids.reserve(line.size());
    for (const auto& tok : line) {
      const std::size_t at = v.lookup(tok);
      if (at != Vocabulary::npos) ids.push_back(static_cast<std::uint32_t>(at));
    }
    st.total_tokens += static_cast<std::int64_t>(ids.size());
    st.line_ids.push_back(std::move(ids));
  }
  if (st.total_tokens == 0)
    throw std::runtime_error("train_sgns: corpus contains no in-vocabulary tokens");

  const std::size_t n_words = v.size();
  std::size_t n_inputs = n_words;
  st.ngram_ids.resize(n_words);
  if (p.subword) {
    for (std::size_t w = 0; w < n_words; ++w) {
      for (const auto& g :
           char_ngrams(v.tokens[w], p.subword->minn, p.subword->maxn))
        st.ngram_ids[w].push_back(static_cast<std::uint32_t>(
            n_words + fnv1a(g) % p.subword->bucket_count));
    }
    n_inputs += p.subword->bucket_count;
  }

  // word2vec-style init: inputs uniform in [-0.5/dim, 0.5/dim), outputs zero
  Rng init_rng(p.seed);
  st.syn0.resize(static_cast<Eigen::Index>(n_inputs), p.dim);
  for (Eigen::Index i = 0; i < st.syn0.rows(); ++i)
    for (Eigen::Index j = 0; j < p.dim; ++j)
      st.syn0(i, j) = (init_rng.next_double() - 0.5) / static_cast<double>(p.dim);
  st.syn1neg = Mat::Zero(static_cast<Eigen::Index>(n_words), p.dim);

  const std::size_t table_size =
      std::min<std::size_t>(10'000'000, std::max<std::size_t>(1'000'000, n_words * 100));
  NegativeSampler sampler(v.counts, 0.75, table_size);
  st.sampler = &sampler;

  if (p.workers == 1) {
    train_worker(st, 0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(p.workers));
    for (int w = 0; w < p.workers; ++w)
      pool.emplace_back(train_worker, std::ref(st), w);
    for (auto& t : pool) t.join();
  }

  EmbeddingMatrix e;
  e.vocab = v;
  e.dim = p.dim;
  e.normalized = false;
  e.rows.resize(static_cast<Eigen::Index>(n_words), p.dim);
  for (std::size_t w = 0; w < n_words; ++w) {
    const auto& grams = st.ngram_ids[w];
    Eigen::RowVectorXd row = st.syn0.row(static_cast<Eigen::Index>(w));
    for (auto g : grams) row += st.syn0.row(g);
    e.rows.row(static_cast<Eigen::Index>(w)) =
        row / static_cast<double>(1 + grams.size());
  }
  return e;
}

}  // namespace xlift
