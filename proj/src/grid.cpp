#include "xlift/grid.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace xlift {

void ExperimentConfig::validate() const {
  if (source.path.empty() || target.path.empty())
    throw std::invalid_argument("ExperimentConfig: corpora paths required");
  if (seeds.empty() || refinement_iters.empty() || epochs.empty())
    throw std::invalid_argument("ExperimentConfig: grid lists must be non-empty");
  for (int r : refinement_iters)
    if (r < 0) throw std::invalid_argument("ExperimentConfig: negative refinement");
  for (int e : epochs)
    if (e < 0) throw std::invalid_argument("ExperimentConfig: negative epochs");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("XLIFT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

TrainedSpaces train_spaces(const ExperimentConfig& cfg, const Corpus& src,
                           const Corpus& tgt) {
  TrainedSpaces out;
  if (cfg.mode == ExperimentConfig::Mode::separate) {
    SgnsParams ps = cfg.sgns;
    out.src = normalize_rows(train_sgns(src, build_vocab(src, ps.min_count), ps));
    SgnsParams pt = cfg.sgns;
    pt.seed = cfg.sgns.seed + 1;  // distinct init when corpora coincide
    out.tgt = normalize_rows(train_sgns(tgt, build_vocab(tgt, pt.min_count), pt));
  } else {
    const Corpus joint = concat_shuffle(src, tgt, cfg.sgns.seed);
    const Vocabulary vj = build_vocab(joint, cfg.sgns.min_count);
    const EmbeddingMatrix ej = normalize_rows(train_sgns(joint, vj, cfg.sgns));
    out.src = subset_embeddings(ej, build_vocab(src, cfg.sgns.min_count));
    out.tgt = subset_embeddings(ej, build_vocab(tgt, cfg.sgns.min_count));
  }
  return out;
}

TrainedSpaces train_spaces(const ExperimentConfig& cfg) {
  const Corpus src = load_corpus(cfg.source.path, cfg.source.lang, cfg.source.domain);
  const Corpus tgt = load_corpus(cfg.target.path, cfg.target.lang, cfg.target.domain);
  return train_spaces(cfg, src, tgt);
}

std::vector<ConfigResult> run_grid_criteria(const TrainedSpaces& spaces,
                                            const ExperimentConfig& cfg,
                                            std::vector<MappingModel>* maps) {
  cfg.validate();
  struct Job {
    std::uint64_t seed;
    int refine_iters;
    int epochs;
  };
  std::vector<Job> jobs;
  for (auto s : cfg.seeds)
    for (int r : cfg.refinement_iters)
      for (int e : cfg.epochs) jobs.push_back({s, r, e});

  std::vector<ConfigResult> results(jobs.size());
  if (maps) maps->assign(jobs.size(), MappingModel{});

  const std::size_t n_eval =
      std::min(cfg.criterion_n_eval,
               static_cast<std::size_t>(spaces.src.rows.rows()));

  auto run_one = [&](std::size_t j) {
    const Job& job = jobs[j];
    ConfigResult& res = results[j];
    res.seed = job.seed;
    res.refinement_iters = job.refine_iters;
    res.epochs = job.epochs;
    try {
      AdversarialParams ap = cfg.adv;
      ap.seed = job.seed;
      ap.epochs = job.epochs;
      MappingModel m = adversarial_train(spaces.src, spaces.tgt, ap);
      if (job.refine_iters > 0)
        m = refine(m, spaces.src, spaces.tgt, job.refine_iters, cfg.refine_opts);
      res.criterion = csls_criterion(m, spaces.src, spaces.tgt, n_eval,
                                     cfg.refine_opts.csls_k);
      if (maps) (*maps)[j] = std::move(m);
    } catch (const std::exception& ex) {
      res.failed = true;
      res.error = ex.what();
    }
  };

  const int workers =
      std::min<int>(resolve_workers(cfg.workers), static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_one(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size();
             j = next.fetch_add(1))
          run_one(j);
      });
    for (auto& t : pool) t.join();
  }
  return results;
}

std::size_t select_best(const std::vector<ConfigResult>& results) {
  std::size_t best = results.size();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].failed) continue;
    if (results[i].criterion > best_score) {  // strict: grid order tie-break
      best_score = results[i].criterion;
      best = i;
    }
  }
  if (best == results.size())
    throw std::runtime_error("select_best: every grid configuration failed");
  return best;
}

namespace {

std::vector<std::string> unique_sources(const Dictionary& gold) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [s, t] : gold.pairs) {
    (void)t;
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

GridReport run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.gold_path.empty())
    throw std::invalid_argument("run_grid: gold dictionary path required");

  const TrainedSpaces spaces = train_spaces(cfg);

  // Selection is complete before any evaluation input is opened.
  std::vector<MappingModel> maps;
  GridReport rep;
  rep.configs = run_grid_criteria(spaces, cfg, &maps);
  rep.selected = select_best(rep.configs);
  rep.selected_model = maps[rep.selected];

  const Dictionary gold = load_dictionary(cfg.gold_path);
  const auto queries = unique_sources(gold);
  const auto results = retrieve(rep.selected_model, spaces.src, spaces.tgt,
                                queries, cfg.method, 5);
  rep.bli = evaluate_bli(results, gold, {1, 5});

  if (!cfg.wordsim_path.empty()) {
    const SimilarityDataset ds = load_similarity_dataset(
        cfg.wordsim_path, cfg.wordsim_lang_a, cfg.wordsim_lang_b);
    const auto preds =
        predict_pairs(spaces.src, spaces.tgt, &rep.selected_model, ds);
    rep.wordsim = score_similarity(preds, ds);
  }

  rep.pair = cfg.source.lang + "-" + cfg.target.lang;
  rep.src_domain = cfg.source.domain;
  rep.tgt_domain = cfg.target.domain;
  rep.method = cfg.method.str();
  rep.mode = cfg.mode == ExperimentConfig::Mode::joint ? "joint" : "separate";
  return rep;
}

std::string GridReport::to_jsonl() const {
  std::ostringstream os;
  for (const auto& c : configs) {
    os << "{\"seed\":" << c.seed << ",\"refine\":" << c.refinement_iters
       << ",\"epochs\":" << c.epochs << ",\"status\":\""
       << (c.failed ? "failed" : "ok") << "\"";
    if (c.failed)
      os << ",\"error\":\"" << c.error << "\"";
    else
      os << ",\"criterion\":" << fmt(c.criterion);
    os << "}\n";
  }
  const auto& sel = configs[selected];
  os << "{\"pair\":\"" << pair << "\",\"src_domain\":\"" << src_domain
     << "\",\"tgt_domain\":\"" << tgt_domain << "\",\"method\":\"" << method
     << "\",\"acc@1\":" << fmt(bli.accuracy_at.at(1))
     << ",\"acc@5\":" << fmt(bli.accuracy_at.at(5)) << ",\"oov\":" << bli.oov_count
     << ",\"config\":{\"mode\":\"" << mode << "\",\"seed\":" << sel.seed
     << ",\"refine\":" << sel.refinement_iters << ",\"epochs\":" << sel.epochs
     << ",\"criterion\":" << fmt(sel.criterion) << "}";
  if (wordsim)
    os << ",\"wordsim\":" << wordsim->to_json();
  os << "}\n";
  return os.str();
}

std::string GridReport::to_tsv() const {
  std::ostringstream os;
  os << "pair\tsrc_domain\ttgt_domain\tmode\tmethod\tseed\trefine\tepochs\t"
        "criterion\tacc@1\tacc@5\toov\n";
  const auto& sel = configs[selected];
  os << pair << '\t' << src_domain << '\t' << tgt_domain << '\t' << mode
     << '\t' << method << '\t' << sel.seed << '\t' << sel.refinement_iters
     << '\t' << sel.epochs << '\t' << fmt4(sel.criterion) << '\t'
     << fmt4(bli.accuracy_at.at(1)) << '\t' << fmt4(bli.accuracy_at.at(5))
     << '\t' << bli.oov_count << '\n';
  return os.str();
}

ComparisonTable run_comparison(const ExperimentConfig& matched,
                               const ExperimentConfig& mismatched,
                               const ExperimentConfig& joint) {
  ComparisonTable t;
  t.matched = run_grid(matched);
  t.mismatched = run_grid(mismatched);
  t.joint = run_grid(joint);
  t.delta_acc1 =
      t.joint.bli.accuracy_at.at(1) - t.mismatched.bli.accuracy_at.at(1);
  t.delta_acc5 =
      t.joint.bli.accuracy_at.at(5) - t.mismatched.bli.accuracy_at.at(5);
  return t;
}

std::string ComparisonTable::to_tsv() const {
  std::ostringstream os;
  os << "condition\tpair\tsrc_domain\ttgt_domain\tmode\tacc@1\tacc@5\toov\n";
  auto row = [&](const char* name, const GridReport& r) {
    os << name << '\t' << r.pair << '\t' << r.src_domain << '\t'
       << r.tgt_domain << '\t' << r.mode << '\t'
       << fmt4(r.bli.accuracy_at.at(1)) << '\t'
       << fmt4(r.bli.accuracy_at.at(5)) << '\t' << r.bli.oov_count << '\n';
  };
  row("matched", matched);
  row("mismatched", mismatched);
  row("mismatched+joint", joint);
  os << "delta\t" << joint.pair << "\t\t\t\t" << fmt4(delta_acc1) << '\t'
     << fmt4(delta_acc5) << "\t\n";
  return os.str();
}

}  // namespace xlift
