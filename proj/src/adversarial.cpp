#include "xlift/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "xlift/rng.hpp"

namespace xlift {

void AdversarialParams::validate() const {
  if (epochs < 0 || disc_hidden < 1 || batch_size < 1 || dis_steps < 1 ||
      lr <= 0 || epoch_size < 0 || most_frequent < 1)
    throw std::invalid_argument("AdversarialParams: invalid hyperparameter");
  if (smoothing < 0 || smoothing >= 0.5)
    throw std::invalid_argument("AdversarialParams: smoothing must be in [0, 0.5)");
  if (map_beta <= 0)
    throw std::invalid_argument("AdversarialParams: map_beta must be > 0");
  if (disc_input_dropout < 0 || disc_input_dropout >= 1)
    throw std::invalid_argument("AdversarialParams: dropout must be in [0, 1)");
}

namespace {

constexpr double kLeakySlope = 0.2;

double leaky(double x) { return x > 0 ? x : kLeakySlope * x; }
double leaky_grad(double z) { return z > 0 ? 1.0 : kLeakySlope; }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Two-hidden-layer MLP with a sigmoid output, trained with SGD on
// batch-mean binary cross-entropy.
struct Discriminator {
  Mat w1, w2;          // h x d, h x h
  Eigen::RowVectorXd w3;  // 1 x h
  Vec b1, b2;
  double b3 = 0.0;

  // forward scratch, kept to report input gradients to the mapper step
  Mat in, z1, h1, z2, h2;
  Vec z3, prob;

  Discriminator(Eigen::Index d, Eigen::Index h, Rng& rng) {
    auto init = [&](Mat& m, Eigen::Index rows, Eigen::Index cols) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
      m.resize(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          m(i, j) = (2.0 * rng.next_double() - 1.0) * bound;
    };
    init(w1, h, d);
    init(w2, h, h);
    Mat w3m;
    init(w3m, 1, h);
    w3 = w3m.row(0);
    b1 = Vec::Zero(h);
    b2 = Vec::Zero(h);
  }

  void forward(const Mat& input) {
    in = input;
    z1 = in * w1.transpose();
    z1.rowwise() += b1.transpose();
    h1 = z1.unaryExpr([](double v) { return leaky(v); });
    z2 = h1 * w2.transpose();
    z2.rowwise() += b2.transpose();
    h2 = z2.unaryExpr([](double v) { return leaky(v); });
    z3 = h2 * w3.transpose();
    z3.array() += b3;
    prob = z3.unaryExpr([](double v) { return sigmoid(v); });
  }

  double bce(const Vec& labels) const {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < prob.size(); ++i) {
      const double p = std::clamp(prob(i), 1e-12, 1.0 - 1e-12);
      loss -= labels(i) * std::log(p) + (1.0 - labels(i)) * std::log(1.0 - p);
    }
    return loss / static_cast<double>(prob.size());
  }

  // Backpropagate batch-mean BCE. Updates parameters when lr > 0; returns
  // the gradient with respect to the input rows.
  Mat backward(const Vec& labels, double lr) {
    const double inv_b = 1.0 / static_cast<double>(prob.size());
    Vec dz3 = (prob - labels) * inv_b;
    Mat dh2 = dz3 * w3;
    Mat dz2 = dh2.array() * z2.unaryExpr([](double v) { return leaky_grad(v); }).array();
    Mat dh1 = dz2 * w2;
    Mat dz1 = dh1.array() * z1.unaryExpr([](double v) { return leaky_grad(v); }).array();
    Mat din = dz1 * w1;
    if (lr > 0) {
      w3 -= lr * (dz3.transpose() * h2);
      b3 -= lr * dz3.sum();
      w2 -= lr * (dz2.transpose() * h1);
      b2 -= lr * dz2.colwise().sum().transpose();
      w1 -= lr * (dz1.transpose() * in);
      b1 -= lr * dz1.colwise().sum().transpose();
    }
    return din;
  }
};

Mat sample_rows(const Mat& src, Eigen::Index cap, int batch, Rng& rng) {
  Mat out(batch, src.cols());
  for (int i = 0; i < batch; ++i)
    out.row(i) = src.row(static_cast<Eigen::Index>(
        rng.next_below(static_cast<std::uint64_t>(cap))));
  return out;
}

}  // namespace

Mat orthogonalize_step(const Mat& w, double beta) {
  return (1.0 + beta) * w - beta * (w * w.transpose()) * w;
}

MappingModel adversarial_train(const EmbeddingMatrix& x,
                               const EmbeddingMatrix& y,
                               const AdversarialParams& p) {
  p.validate();
  if (x.dim != y.dim)
    throw std::invalid_argument("adversarial_train: dimension mismatch");
  if (!x.normalized || !y.normalized)
    throw std::invalid_argument(
        "adversarial_train: embeddings must be row-normalized");

  const Eigen::Index d = x.dim;
  Rng rng(p.seed);
  Discriminator disc(d, p.disc_hidden, rng);

  MappingModel model = MappingModel::identity(d);
  model.method = MappingModel::Method::adversarial;
  model.meta.seed = p.seed;
  model.meta.epochs = p.epochs;
  Mat& w = model.W;
  Mat last_finite = w;

  const Eigen::Index src_cap = std::min<Eigen::Index>(
      x.rows.rows(), static_cast<Eigen::Index>(p.most_frequent));
  const Eigen::Index tgt_cap = std::min<Eigen::Index>(
      y.rows.rows(), static_cast<Eigen::Index>(p.most_frequent));
  const int b = p.batch_size;
  const double keep = 1.0 - p.disc_input_dropout;

  double lr = p.lr;
  const std::int64_t iters_per_epoch =
      std::max<std::int64_t>(p.epoch_size / p.batch_size, 0);

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    for (std::int64_t it = 0; it < iters_per_epoch; ++it) {
      // --- discriminator: mapped sources labeled 1 - smoothing,
      //     real targets labeled smoothing
      for (int step = 0; step < p.dis_steps; ++step) {
        Mat input(2 * b, d);
        input.topRows(b) = sample_rows(x.rows, src_cap, b, rng) * w.transpose();
        input.bottomRows(b) = sample_rows(y.rows, tgt_cap, b, rng);
        if (p.disc_input_dropout > 0) {
          for (Eigen::Index i = 0; i < input.rows(); ++i)
            for (Eigen::Index j = 0; j < d; ++j)
              input(i, j) =
                  rng.next_double() < keep ? input(i, j) / keep : 0.0;
        }
        Vec labels(2 * b);
        labels.head(b).setConstant(1.0 - p.smoothing);
        labels.tail(b).setConstant(p.smoothing);
        disc.forward(input);
        const double loss = disc.bce(labels);
        if (!std::isfinite(loss)) {
          MappingModel snap = model;
          snap.W = last_finite;
          throw DivergenceError("adversarial_train: discriminator loss diverged",
                                std::move(snap));
        }
        disc.backward(labels, lr);
      }

      // --- mapper: fool the discriminator on mapped sources
      //     (flipped labels, dropout off, discriminator frozen)
      const Mat batch = sample_rows(x.rows, src_cap, b, rng);
      disc.forward(batch * w.transpose());
      Vec fool = Vec::Constant(b, p.smoothing);
      const double loss = disc.bce(fool);
      if (!std::isfinite(loss)) {
        MappingModel snap = model;
        snap.W = last_finite;
        throw DivergenceError("adversarial_train: mapper loss diverged",
                              std::move(snap));
      }
      last_finite = w;
      const Mat dmapped = disc.backward(fool, 0.0);
      w -= lr * (dmapped.transpose() * batch);
      w = orthogonalize_step(w, p.map_beta);
    }
    lr *= p.lr_epoch_decay;
  }
  return model;
}

}  // namespace xlift
