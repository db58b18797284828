#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "xlift/alignment.hpp"
#include "xlift/retrieval.hpp"
#include "xlift/rng.hpp"
#include "xlift/synth.hpp"

using namespace xlift;
namespace fs = std::filesystem;

namespace {

Vocabulary vocab_of(const std::vector<std::pair<std::string, std::int64_t>>& toks) {
  Vocabulary v;
  for (const auto& [t, c] : toks) {
    v.index[t] = v.tokens.size();
    v.tokens.push_back(t);
    v.counts.push_back(c);
  }
  return v;
}

double bli_acc1(const MappingModel& w, const EmbeddingMatrix& x,
                const EmbeddingMatrix& y, const Dictionary& gold) {
  std::vector<std::string> queries;
  for (const auto& [s, t] : gold.pairs) {
    (void)t;
    queries.push_back(s);
  }
  const auto res = retrieve(w, x, y, queries, RetrievalMethod::csls(10), 1);
  return evaluate_bli(res, gold, {1}).accuracy_at.at(1);
}

}  // namespace

TEST_CASE("extract_identical_seed keeps shared strings, frequency-ordered") {
  const Vocabulary vs = vocab_of({{"paris", 4}, {"chat", 9}});
  const Vocabulary vt = vocab_of({{"paris", 2}, {"cat", 7}});
  const Dictionary d = extract_identical_seed(vs, vt);
  REQUIRE(d.size() == 1);
  CHECK(d.pairs[0] == std::make_pair(std::string("paris"), std::string("paris")));

  const Dictionary none =
      extract_identical_seed(vocab_of({{"a", 1}}), vocab_of({{"b", 1}}));
  CHECK(none.size() == 0);

  const Vocabulary same = vocab_of({{"x", 5}, {"y", 3}, {"z", 1}});
  const Dictionary all = extract_identical_seed(same, same);
  CHECK(all.size() == 3);
  CHECK(all.pairs[0].first == "x");  // highest joint frequency first
}

TEST_CASE("procrustes solves rotated instances to machine precision") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next_below(9));
    const Eigen::Index n = d + 5 + static_cast<Eigen::Index>(rng.next_below(40));
    const RotationInstance inst =
        make_rotation_instance(n, d, 0.0, 1000 + static_cast<unsigned>(trial));
    const MappingModel m = procrustes(inst.x, inst.y, inst.gold);
    CHECK((m.W - inst.w_true).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(orthogonality_error(m.W) <= 1e-6);
  }
}

TEST_CASE("procrustes identity and sign edge cases") {
  RotationInstance inst = make_rotation_instance(20, 4, 0.0, 5);
  const MappingModel keep = procrustes(inst.x, inst.x, inst.gold);
  CHECK((keep.W - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-6);

  // d = 1: the only orthogonal "rotations" are +1 and -1
  EmbeddingMatrix x1, y1;
  x1.dim = y1.dim = 1;
  x1.rows.resize(2, 1);
  x1.rows << 1.0, -0.5;
  y1.rows = -x1.rows;
  x1.vocab = vocab_of({{"p", 2}, {"q", 1}});
  y1.vocab = x1.vocab;
  Dictionary id;
  id.add("p", "p");
  id.add("q", "q");
  const MappingModel neg = procrustes(x1, y1, id);
  CHECK(neg.W(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));

  Dictionary oov;
  oov.add("nope", "nada");
  CHECK_THROWS(procrustes(inst.x, inst.y, oov));
}

TEST_CASE("procrustes preserves pairwise cosines") {
  const RotationInstance inst = make_rotation_instance(30, 6, 0.0, 77);
  const MappingModel m = procrustes(inst.x, inst.y, inst.gold);
  const Mat mapped = inst.x.rows * m.W.transpose();
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      const double before = inst.x.rows.row(i).dot(inst.x.rows.row(j));
      const double after = mapped.row(i).dot(mapped.row(j));
      CHECK(std::abs(before - after) <= 1e-6);
    }
}

TEST_CASE("procrustes beats 1000 random orthogonal matrices") {
  Rng rng(303);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next_below(4));
    const Eigen::Index n = d + 2 + static_cast<Eigen::Index>(rng.next_below(15));
    // noisy instance, so the optimum is not exactly recoverable
    const RotationInstance inst =
        make_rotation_instance(n, d, 0.25, 40 + static_cast<unsigned>(trial));
    const MappingModel m = procrustes(inst.x, inst.y, inst.gold);
    const double err = (inst.x.rows * m.W.transpose() - inst.y.rows).norm();
    for (int mc = 0; mc < 1000; ++mc) {
      const Mat q = random_orthogonal<double>(d, rng);
      const double qerr = (inst.x.rows * q.transpose() - inst.y.rows).norm();
      CHECK(err <= qerr + 1e-12);
    }
  }
}

TEST_CASE("refine is a no-op at the optimum and helps a perturbed start") {
  const RotationInstance inst = make_rotation_instance(300, 10, 0.0, 9);
  MappingModel perfect;
  perfect.W = inst.w_true;
  RefineOptions opt;
  opt.induce_top = 300;

  const MappingModel refined = refine(perfect, inst.x, inst.y, 3, opt);
  CHECK((refined.W - inst.w_true).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(refined.meta.refinement_iters == 3);

  // perturb the true rotation, re-orthogonalize, and check refinement
  // recovers accuracy
  Rng rng(21);
  Mat noisy = inst.w_true;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i)
    for (Eigen::Index j = 0; j < noisy.cols(); ++j)
      noisy(i, j) += 0.1 * rng.next_gaussian();
  Eigen::JacobiSVD<Mat> svd(noisy, Eigen::ComputeFullU | Eigen::ComputeFullV);
  MappingModel start;
  start.W = svd.matrixU() * svd.matrixV().transpose();

  const double before = bli_acc1(start, inst.x, inst.y, inst.gold);
  const MappingModel after = refine(start, inst.x, inst.y, 5, opt);
  const double after_acc = bli_acc1(after, inst.x, inst.y, inst.gold);
  CHECK(after_acc >= before);
  CHECK(orthogonality_error(after.W) <= 1e-6);
}

TEST_CASE("refine(1) equals one manual induce+procrustes round") {
  const RotationInstance inst = make_rotation_instance(120, 8, 0.05, 13);
  MappingModel start;
  start.W = inst.w_true;
  RefineOptions opt;
  opt.induce_top = 120;

  const MappingModel one = refine(start, inst.x, inst.y, 1, opt);
  const Dictionary induced = induce_dictionary(start, inst.x, inst.y, opt);
  const MappingModel manual = procrustes(inst.x, inst.y, induced);
  CHECK((one.W - manual.W).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dictionary io dedups and keeps order") {
  const fs::path p = fs::temp_directory_path() / "xlift_dict.txt";
  {
    std::ofstream out(p);
    out << "chat cat\nchien dog\nchat cat\nchat feline\n";
  }
  const Dictionary d = load_dictionary(p.string());
  REQUIRE(d.size() == 3);
  CHECK(d.pairs[0] == std::make_pair(std::string("chat"), std::string("cat")));
  CHECK(d.pairs[2] == std::make_pair(std::string("chat"), std::string("feline")));

  const fs::path p2 = fs::temp_directory_path() / "xlift_dict2.txt";
  save_dictionary(d, p2.string());
  const Dictionary d2 = load_dictionary(p2.string());
  CHECK(d2.pairs == d.pairs);
}

TEST_CASE("mapping io round-trips exactly") {
  const RotationInstance inst = make_rotation_instance(20, 5, 0.0, 3);
  MappingModel m = procrustes(inst.x, inst.y, inst.gold);
  m.meta.seed = 123;
  m.meta.epochs = 5;
  m.meta.refinement_iters = 2;
  const fs::path p = fs::temp_directory_path() / "xlift_map.txt";
  save_mapping(m, p.string());
  const MappingModel r = load_mapping(p.string());
  CHECK(r.W == m.W);
  CHECK(r.method == m.method);
  CHECK(r.meta.seed == 123);
  CHECK(r.meta.epochs == 5);
  CHECK(r.meta.refinement_iters == 2);
}
