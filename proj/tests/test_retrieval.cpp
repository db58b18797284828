#include "doctest.h"

#include "oracles.hpp"
#include "xlift/retrieval.hpp"
#include "xlift/rng.hpp"
#include "xlift/synth.hpp"

using namespace xlift;

TEST_CASE("csls on the two-point orthonormal instance") {
  Mat pts(2, 2);
  pts << 1, 0, 0, 1;
  const Mat scores = csls_score_matrix(pts, pts, pts, 1);
  CHECK(scores(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(scores(0, 1) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(scores(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(scores(0, 0) > scores(0, 1));  // argmax is the correct translation
}

TEST_CASE("csls equals the brute-force double loop exactly") {
  Rng rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index d = 3 + static_cast<Eigen::Index>(rng.next_below(8));
    const Eigen::Index nq = 5 + static_cast<Eigen::Index>(rng.next_below(20));
    const Eigen::Index nt = 5 + static_cast<Eigen::Index>(rng.next_below(20));
    const Mat q = random_unit_rows<double>(nq, d, rng);
    const Mat y = random_unit_rows<double>(nt, d, rng);
    const int k = 1 + static_cast<int>(rng.next_below(
                          static_cast<std::uint64_t>(std::min(nq, nt))));
    const Mat fast = csls_score_matrix(q, q, y, k);
    const Mat slow = oracle::csls_brute_force(q, q, y, k);
    CHECK((fast - slow).cwiseAbs().maxCoeff() == 0.0);

    // distinct reference set
    const Mat ref = random_unit_rows<double>(nq + 3, d, rng);
    const Mat fast2 = csls_score_matrix(q, ref, y, k);
    const Mat slow2 = oracle::csls_brute_force(q, ref, y, k);
    CHECK((fast2 - slow2).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("csls with k=|Y| and identical targets gives equal scores") {
  Mat q(1, 3);
  q << 1, 0, 0;
  Mat y(4, 3);
  for (int i = 0; i < 4; ++i) y.row(i) << 0, 1, 0;
  const Mat scores = csls_score_matrix(q, q, y, 4);
  for (int j = 1; j < 4; ++j) CHECK(scores(0, j) == scores(0, 0));
}

TEST_CASE("csls rejects unnormalized inputs and bad k") {
  Mat q(1, 2);
  q << 2, 0;
  Mat y(2, 2);
  y << 1, 0, 0, 1;
  CHECK_THROWS(csls_score_matrix(q, q, y, 1));
  Mat qn(1, 2);
  qn << 1, 0;
  CHECK_THROWS(csls_score_matrix(qn, qn, y, 3));
  CHECK_THROWS(csls_score_matrix(qn, qn, y, 0));
}

TEST_CASE("retrieve: identity spaces, nn method, self at rank 1") {
  const RotationInstance inst = make_rotation_instance(40, 6, 0.0, 23);
  const MappingModel id = MappingModel::identity(6);
  std::vector<std::string> queries = {"w00000", "w00017", "w00039"};
  const auto res =
      retrieve(id, inst.x, inst.x, queries, RetrievalMethod::nn(), 3);
  for (const auto& r : res) {
    REQUIRE_FALSE(r.oov);
    CHECK(r.candidates[0].first == r.source);
    CHECK(r.candidates[0].second == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.candidates[0].second >= r.candidates[1].second);
  }
}

TEST_CASE("retrieve with the true rotation reaches acc@1 = 1.0") {
  const RotationInstance inst = make_rotation_instance(60, 8, 0.0, 29);
  MappingModel truth;
  truth.W = inst.w_true;
  std::vector<std::string> queries;
  for (const auto& [s, t] : inst.gold.pairs) {
    (void)t;
    queries.push_back(s);
  }
  const auto res =
      retrieve(truth, inst.x, inst.y, queries, RetrievalMethod::csls(10), 5);
  const BliReport rep = evaluate_bli(res, inst.gold, {1, 5});
  CHECK(rep.accuracy_at.at(1) == doctest::Approx(1.0));
  CHECK(rep.oov_count == 0);
}

TEST_CASE("retrieve ranking equals the brute-force oracle ranking") {
  const RotationInstance inst = make_rotation_instance(20, 5, 0.1, 31);
  MappingModel truth;
  truth.W = inst.w_true;
  std::vector<std::string> queries;
  for (const auto& [s, t] : inst.gold.pairs) {
    (void)t;
    queries.push_back(s);
  }
  const auto res =
      retrieve(truth, inst.x, inst.y, queries, RetrievalMethod::csls(3), 20);

  Mat mapped = inst.x.rows * inst.w_true.transpose();
  normalize_rows_inplace(mapped);
  const Mat slow = oracle::csls_brute_force(mapped, mapped, inst.y.rows, 3);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    // oracle ranking: score desc, index asc
    std::vector<Eigen::Index> order(20);
    for (Eigen::Index j = 0; j < 20; ++j) order[static_cast<std::size_t>(j)] = j;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (slow(static_cast<Eigen::Index>(i), a) !=
          slow(static_cast<Eigen::Index>(i), b))
        return slow(static_cast<Eigen::Index>(i), a) >
               slow(static_cast<Eigen::Index>(i), b);
      return a < b;
    });
    for (std::size_t r = 0; r < 20; ++r)
      CHECK(res[i].candidates[r].first ==
            inst.y.vocab.tokens[static_cast<std::size_t>(order[r])]);
  }
}

TEST_CASE("retrieve flags OOV queries without failing") {
  const RotationInstance inst = make_rotation_instance(20, 4, 0.0, 37);
  const MappingModel id = MappingModel::identity(4);
  const auto res = retrieve(id, inst.x, inst.x, {"w00001", "missing"},
                            RetrievalMethod::nn(), 2);
  CHECK_FALSE(res[0].oov);
  CHECK(res[1].oov);
  CHECK(res[1].candidates.empty());
}

TEST_CASE("evaluate_bli set semantics and the hand instance") {
  // all rank-1 correct
  std::vector<RetrievalResult> perfect = {
      {"a", {{"x", 0.9}}, false},
      {"b", {{"y", 0.8}}, false},
  };
  Dictionary gold;
  gold.add("a", "x");
  gold.add("b", "y");
  CHECK(evaluate_bli(perfect, gold, {1}).accuracy_at.at(1) == 1.0);

  // second listed translation counts
  Dictionary two;
  two.add("a", "first");
  two.add("a", "second");
  std::vector<RetrievalResult> hit2 = {{"a", {{"second", 0.7}}, false}};
  CHECK(evaluate_bli(hit2, two, {1}).accuracy_at.at(1) == 1.0);

  // 4 sources: 2 correct at rank 1, 3 within rank 5
  Dictionary g4;
  g4.add("s1", "t1");
  g4.add("s2", "t2");
  g4.add("s3", "t3");
  g4.add("s4", "t4");
  auto cands = [](std::initializer_list<const char*> names) {
    std::vector<std::pair<std::string, double>> out;
    double s = 1.0;
    for (const char* n : names) out.emplace_back(n, s -= 0.1);
    return out;
  };
  std::vector<RetrievalResult> res4 = {
      {"s1", cands({"t1", "z", "z2", "z3", "z4"}), false},
      {"s2", cands({"t2", "z", "z2", "z3", "z4"}), false},
      {"s3", cands({"z", "z2", "t3", "z3", "z4"}), false},
      {"s4", cands({"z", "z2", "z3", "z4", "z5"}), false},
  };
  const BliReport rep = evaluate_bli(res4, g4, {1, 5});
  CHECK(rep.accuracy_at.at(1) == doctest::Approx(0.5));
  CHECK(rep.accuracy_at.at(5) == doctest::Approx(0.75));
  CHECK(rep.accuracy_at.at(1) <= rep.accuracy_at.at(5));
  CHECK(rep.evaluated == 4);

  // OOV exclusion
  std::vector<RetrievalResult> with_oov = {
      {"s1", cands({"t1"}), false},
      {"s2", {}, true},
      {"s3", cands({"t3"}), false},
      {"s4", {}, true},
  };
  const BliReport rep2 = evaluate_bli(with_oov, g4, {1});
  CHECK(rep2.evaluated == 2);
  CHECK(rep2.oov_count == 2);
  CHECK(rep2.accuracy_at.at(1) == doctest::Approx(1.0));

  std::vector<RetrievalResult> all_oov = {
      {"s1", {}, true}, {"s2", {}, true}, {"s3", {}, true}, {"s4", {}, true}};
  CHECK_THROWS(evaluate_bli(all_oov, g4, {1}));
}

TEST_CASE("copying baseline") {
  Dictionary identity;
  identity.add("casa", "casa");
  identity.add("paris", "paris");
  CHECK(copying_baseline(identity).accuracy_at.at(1) == 1.0);

  Dictionary disjoint;
  disjoint.add("chat", "cat");
  disjoint.add("chien", "dog");
  CHECK(copying_baseline(disjoint).accuracy_at.at(1) == 0.0);

  // 2 of 4 unique sources are their own translation
  Dictionary mixed;
  mixed.add("paris", "paris");
  mixed.add("chat", "cat");
  mixed.add("taxi", "taxi");
  mixed.add("chien", "dog");
  mixed.add("chien", "hound");
  const BliReport rep = copying_baseline(mixed);
  CHECK(rep.accuracy_at.at(1) == doctest::Approx(0.5));
  CHECK(rep.accuracy_at.at(5) == doctest::Approx(0.5));
  CHECK(rep.evaluated == 4);

  Dictionary empty;
  CHECK_THROWS(copying_baseline(empty));
}

TEST_CASE("csls criterion prefers the true rotation and ignores row order") {
  const RotationInstance inst = make_rotation_instance(80, 6, 0.0, 41);
  MappingModel truth;
  truth.W = inst.w_true;
  Rng rng(43);
  MappingModel wrong;
  wrong.W = random_orthogonal<double>(6, rng);

  const double good = csls_criterion(truth, inst.x, inst.y, 80, 10);
  const double bad = csls_criterion(wrong, inst.x, inst.y, 80, 10);
  CHECK(good > bad);

  // permutation of target rows leaves the criterion unchanged
  EmbeddingMatrix yperm = inst.y;
  std::vector<Eigen::Index> perm(80);
  for (Eigen::Index i = 0; i < 80; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  for (Eigen::Index i = 0; i < 80; ++i)
    yperm.rows.row(i) = inst.y.rows.row(perm[static_cast<std::size_t>(i)]);
  const double permuted = csls_criterion(truth, inst.x, yperm, 80, 10);
  CHECK(permuted == doctest::Approx(good).epsilon(1e-12));
}

TEST_CASE("csls criterion on identity spaces matches brute force") {
  const RotationInstance inst = make_rotation_instance(25, 4, 0.0, 47);
  const MappingModel id = MappingModel::identity(4);
  const double crit = csls_criterion(id, inst.x, inst.x, 25, 5);

  const Mat slow =
      oracle::csls_brute_force(inst.x.rows, inst.x.rows, inst.x.rows, 5);
  double want = 0;
  for (Eigen::Index i = 0; i < 25; ++i) want += slow.row(i).maxCoeff();
  want /= 25;
  CHECK(crit == doctest::Approx(want).epsilon(1e-14));
}
