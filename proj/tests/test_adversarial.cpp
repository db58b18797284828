#include "doctest.h"

#include "xlift/adversarial.hpp"
#include "xlift/rng.hpp"
#include "xlift/synth.hpp"

using namespace xlift;

TEST_CASE("orthogonalize_step fixes exactly orthogonal matrices") {
  Rng rng(61);
  const Mat r = random_orthogonal<double>(7, rng);
  const Mat stepped = orthogonalize_step(r, 0.001);
  CHECK((stepped - r).cwiseAbs().maxCoeff() <= 1e-12);

  // and contracts a mildly perturbed matrix toward orthogonality
  Mat off = r;
  off(0, 1) += 0.05;
  double defect = orthogonality_error(off);
  Mat cur = off;
  for (int i = 0; i < 50; ++i) cur = orthogonalize_step(cur, 0.01);
  CHECK(orthogonality_error(cur) < defect);
}

TEST_CASE("zero epochs returns the identity mapping") {
  const RotationInstance inst = make_rotation_instance(50, 5, 0.0, 71);
  AdversarialParams p;
  p.epochs = 0;
  p.disc_hidden = 8;
  const MappingModel m = adversarial_train(inst.x, inst.y, p);
  CHECK(m.method == MappingModel::Method::adversarial);
  CHECK((m.W - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adversarial training is deterministic per seed") {
  const RotationInstance inst = make_rotation_instance(100, 6, 0.0, 73);
  AdversarialParams p;
  p.epochs = 1;
  p.epoch_size = 2000;
  p.disc_hidden = 32;
  p.seed = 123;
  const MappingModel a = adversarial_train(inst.x, inst.y, p);
  const MappingModel b = adversarial_train(inst.x, inst.y, p);
  CHECK(a.W == b.W);

  p.seed = 456;
  const MappingModel c = adversarial_train(inst.x, inst.y, p);
  CHECK(a.W != c.W);
}

TEST_CASE("adversarial training stays near the orthogonal manifold") {
  const RotationInstance inst = make_rotation_instance(100, 5, 0.0, 79);
  AdversarialParams p;
  p.epochs = 1;
  p.epoch_size = 4000;
  p.disc_hidden = 32;
  const MappingModel m = adversarial_train(inst.x, inst.y, p);
  CHECK(orthogonality_error(m.W) < 0.1);
  CHECK(m.W.allFinite());
}

TEST_CASE("divergence raises an error carrying the last finite state") {
  const RotationInstance inst = make_rotation_instance(60, 4, 0.0, 83);
  AdversarialParams p;
  p.epochs = 1;
  p.epoch_size = 40000;
  p.disc_hidden = 16;
  p.lr = 1e12;  // guaranteed blow-up
  try {
    adversarial_train(inst.x, inst.y, p);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_finite.W.allFinite());
    CHECK(e.last_finite.W.rows() == 4);
  }
}

TEST_CASE("parameter validation") {
  AdversarialParams p;
  p.smoothing = 0.7;
  CHECK_THROWS(p.validate());
  p = {};
  p.map_beta = 0;
  CHECK_THROWS(p.validate());
  p = {};
  p.batch_size = 0;
  CHECK_THROWS(p.validate());
}
