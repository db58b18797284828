#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xlift/adversarial.hpp"
#include "xlift/alignment.hpp"
#include "xlift/corpus.hpp"
#include "xlift/retrieval.hpp"
#include "xlift/sgns.hpp"
#include "xlift/wordsim.hpp"

namespace xlift {

struct CorpusSpec {
  std::string path;
  std::string lang;
  std::string domain;
};

/// One end-to-end experiment: train (separately or jointly), align over the
/// hyperparameter grid, select by the unsupervised CSLS criterion, then
/// evaluate the selected configuration. The gold dictionary path is only
/// opened after selection.
struct ExperimentConfig {
  CorpusSpec source;
  CorpusSpec target;
  enum class Mode { separate, joint } mode = Mode::separate;

  SgnsParams sgns;
  AdversarialParams adv;  // template; seed/epochs come from the grid

  std::vector<std::uint64_t> seeds = {123, 456, 789, 321};
  std::vector<int> refinement_iters = {1, 3, 5};
  std::vector<int> epochs = {1, 3, 5};

  RetrievalMethod method = RetrievalMethod::csls(10);
  RefineOptions refine_opts;
  std::size_t criterion_n_eval = 10000;

  std::string gold_path;
  std::string wordsim_path;  // optional
  std::string wordsim_lang_a, wordsim_lang_b;

  int workers = 0;  // 0 = XLIFT_WORKERS env or hardware concurrency

  void validate() const;
};

/// Normalized per-language spaces for one condition.
struct TrainedSpaces {
  EmbeddingMatrix src;
  EmbeddingMatrix tgt;
};

/// Load the corpora and train the spaces (one SGNS run per side, or one
/// joint run split by per-side vocabulary).
TrainedSpaces train_spaces(const ExperimentConfig& cfg);
TrainedSpaces train_spaces(const ExperimentConfig& cfg, const Corpus& src,
                           const Corpus& tgt);

struct ConfigResult {
  std::uint64_t seed = 0;
  int refinement_iters = 0;
  int epochs = 0;
  bool failed = false;
  std::string error;
  double criterion = 0;
};

/// Align and score every grid configuration with the unsupervised
/// criterion. This stage receives no dictionary of any kind: model
/// selection is structurally blind to the test data. Mappings are returned
/// in grid order (seeds outer, refinement middle, epochs inner).
std::vector<ConfigResult> run_grid_criteria(const TrainedSpaces& spaces,
                                            const ExperimentConfig& cfg,
                                            std::vector<MappingModel>* maps);

/// Argmax criterion over non-failed configs; grid order itself encodes the
/// tie-break (seed order, then fewer refinement iterations, then fewer
/// epochs). Throws if every configuration failed.
std::size_t select_best(const std::vector<ConfigResult>& results);

struct GridReport {
  std::vector<ConfigResult> configs;
  std::size_t selected = 0;
  MappingModel selected_model;
  BliReport bli;
  std::optional<SimReport> wordsim;

  std::string pair, src_domain, tgt_domain, method, mode;

  /// One JSON record per config, then one selection record with the
  /// evaluation results.
  std::string to_jsonl() const;
  std::string to_tsv() const;
};

GridReport run_grid(const ExperimentConfig& cfg);

struct ComparisonTable {
  GridReport matched;
  GridReport mismatched;
  GridReport joint;
  double delta_acc1 = 0;  // joint minus mismatched
  double delta_acc5 = 0;

  std::string to_tsv() const;
};

/// The matched / mismatched / mismatched+joint comparison over a shared
/// gold dictionary, with the joint-minus-mismatched delta row.
ComparisonTable run_comparison(const ExperimentConfig& matched,
                               const ExperimentConfig& mismatched,
                               const ExperimentConfig& joint);

/// Worker-pool size: explicit > XLIFT_WORKERS env > hardware concurrency.
int resolve_workers(int requested);

}  // namespace xlift
