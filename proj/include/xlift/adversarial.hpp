#pragma once

#include <cstdint>
#include <stdexcept>

#include "xlift/alignment.hpp"
#include "xlift/embedding.hpp"

namespace xlift {

/// Adversarial mapping hyperparameters. Defaults are the full-scale
/// settings; desk-scale runs shrink disc_hidden / epoch_size / most_frequent.
struct AdversarialParams {
  int epochs = 5;
  std::uint64_t seed = 123;
  Eigen::Index disc_hidden = 2048;
  double disc_input_dropout = 0.1;
  double smoothing = 0.2;
  double map_beta = 0.001;  // orthogonalization strength
  int batch_size = 32;
  int dis_steps = 5;  // discriminator updates per mapper update
  double lr = 0.1;
  double lr_epoch_decay = 0.98;
  std::size_t most_frequent = 75000;  // vocab cap for discriminator sampling
  std::int64_t epoch_size = 1'000'000;  // samples per epoch

  void validate() const;
};

/// Thrown when the adversarial loss becomes non-finite; carries the last
/// finite mapping so callers can inspect or resume.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, MappingModel last)
      : std::runtime_error(msg), last_finite(std::move(last)) {}
  MappingModel last_finite;
};

/// One orthogonality-preserving pullback: (1+beta) W - beta (W W^T) W.
/// Exactly orthogonal W is a fixed point.
Mat orthogonalize_step(const Mat& w, double beta);

/// MUSE-style adversarial alignment: a two-hidden-layer leaky-ReLU
/// discriminator with input dropout and label smoothing distinguishes
/// {W x} from {y}; the mapper W (initialized to identity) is trained to
/// fool it, with W pulled back toward the orthogonal manifold after every
/// update via W <- (1+beta) W - beta (W W^T) W. x and y must be
/// row-normalized and share a dimension. Deterministic per seed.
MappingModel adversarial_train(const EmbeddingMatrix& x,
                               const EmbeddingMatrix& y,
                               const AdversarialParams& p);

}  // namespace xlift
