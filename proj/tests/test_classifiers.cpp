#include <doctest.h>

#include <cmath>
#include <random>

#include "commentrel/classifiers.hpp"
#include "commentrel/error.hpp"
#include "oracles.hpp"

using namespace commentrel;

namespace {

constexpr Label U = Label::Useful;
constexpr Label N = Label::NotUseful;

double accuracy(const std::vector<Label>& a, const std::vector<Label>& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Format;
}

// Two Gaussian blobs pushed apart so the classes are linearly separable.
struct Blobs {
  oracle::Dense x;
  std::vector<Label> y;
};

Blobs separable_blobs(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 0.3);
  Blobs b;
  for (std::size_t j = 0; j < n; ++j) {
    const Label l = j % 2 ? U : N;
    std::vector<double> row(d);
    for (auto& v : row) v = g(rng);
    row[0] += l == U ? 2.0 : -2.0;
    b.x.push_back(row);
    b.y.push_back(l);
  }
  return b;
}

}  // namespace

TEST_CASE("logreg: 1-D separable pair") {
  const auto x = SparseMatrix::from_dense({{-1}, {1}});
  const auto m = train_logreg(x, {N, U});
  CHECK(predict_labels(m, x) == std::vector<Label>{N, U});
  CHECK(m.kind == ModelKind::LogReg);
  CHECK(m.feature_count == 1);
}

TEST_CASE("training input errors") {
  const auto x = SparseMatrix::from_dense({{1}, {2}});
  CHECK(kind_of([&] { train_logreg(x, {U, U}); }) == ErrorKind::SingleClassCorpus);
  CHECK(kind_of([&] { train_linear_svm(x, {N, N}); }) == ErrorKind::SingleClassCorpus);
  CHECK(kind_of([&] { train_random_forest(x, {U, U}); }) == ErrorKind::SingleClassCorpus);
  CHECK(kind_of([&] { train_logreg(x, {U}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("logreg matches a Newton oracle on a small 2-D fixture") {
  const oracle::Dense pts{{1.0, 2.0}, {2.0, 0.5}, {-1.0, -1.0}, {0.5, -2.0}};
  const std::vector<Label> y{U, U, N, U};
  for (double l2 : {0.1, 1.0, 3.0}) {
    LogRegHyper h;
    h.l2_strength = l2;
    h.tol = 1e-10;
    h.max_iters = 100000;
    const auto m = train_logreg(SparseMatrix::from_dense(pts), y, h);
    const auto ref = oracle::logreg_newton(pts, y, l2);
    const auto& p = std::get<LinearParams>(m.params);
    CHECK(std::fabs(oracle::logreg_loss(pts, y, p.weights, p.bias, l2) - ref.objective) <= 1e-4);
    CHECK(std::fabs(m.info.final_objective - ref.objective) <= 1e-4);
    CHECK(p.weights[0] == doctest::Approx(ref.w[0]).epsilon(1e-4));
    CHECK(p.bias == doctest::Approx(ref.b).epsilon(1e-4));
  }
}

TEST_CASE("logreg objective history never increases") {
  std::mt19937_64 rng(3);
  const auto b = separable_blobs(rng, 60, 4);
  const auto m = train_logreg(SparseMatrix::from_dense(b.x), b.y);
  const auto& hist = m.info.objective_history;
  REQUIRE(hist.size() >= 2);
  for (std::size_t i = 1; i < hist.size(); ++i) CHECK(hist[i] <= hist[i - 1]);
  CHECK(m.info.converged);
}

TEST_CASE("logreg gradient matches central differences") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 8, d = 1 + rng() % 6;
    oracle::Dense dense(n, std::vector<double>(d));
    for (auto& row : dense) {
      for (auto& v : row) v = rng() % 3 == 0 ? 0.0 : g(rng);
    }
    std::vector<Label> labels;
    for (std::size_t j = 0; j < n; ++j) labels.push_back(rng() % 2 ? U : N);
    const auto x = SparseMatrix::from_dense(dense);
    const auto y = signed_targets(labels);
    std::vector<double> w(d);
    for (auto& v : w) v = g(rng);
    const double b = g(rng), l2 = 0.7;
    std::vector<double> grad(d);
    const double gb = logreg_gradient(x, y, w, b, l2, grad);
    const double eps = 1e-6;
    for (std::size_t i = 0; i <= d; ++i) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (i < d) {
        wp[i] += eps;
        wm[i] -= eps;
      } else {
        bp += eps;
        bm -= eps;
      }
      const double fd =
          (logreg_objective(x, y, wp, bp, l2) - logreg_objective(x, y, wm, bm, l2)) / (2 * eps);
      const double an = i < d ? grad[i] : gb;
      CHECK(std::fabs(fd - an) <= 1e-5 * std::max(1.0, std::fabs(an)));
    }
  }
}

TEST_CASE("svm: separable pair reaches unit margins") {
  const auto x = SparseMatrix::from_dense({{-1}, {1}});
  const auto m = train_linear_svm(x, {N, U});
  CHECK(predict_labels(m, x) == std::vector<Label>{N, U});
  const auto s = decision_scores(m, x);
  CHECK(-s[0] >= 1 - 1e-6);
  CHECK(s[1] >= 1 - 1e-6);
  CHECK(std::get<SvmHyper>(m.hyper).cost_c == 1.0);
  CHECK(std::get<SvmHyper>(m.hyper).gamma == "scale");
}

TEST_CASE("svm matches the exact enumeration oracle on a 6-point fixture") {
  const oracle::Dense pts{{2, 2}, {1, 3}, {0.5, 0.2}, {-1, -1}, {-2, 0.5}, {0.8, 0.1}};
  const std::vector<Label> y{U, U, U, N, N, N};
  for (double c : {0.1, 1.0, 10.0}) {
    SvmHyper h;
    h.cost_c = c;
    const auto m = train_linear_svm(SparseMatrix::from_dense(pts), y, h);
    const auto& p = std::get<LinearParams>(m.params);
    const auto ref = oracle::svm_enumerate(pts, y, c);
    CHECK(std::fabs(oracle::svm_objective(pts, y, p.weights, p.bias, c) - ref.objective) <= 1e-3);
    CHECK(svm_primal_objective(SparseMatrix::from_dense(pts), signed_targets(y), p.weights,
                               p.bias, c) ==
          doctest::Approx(oracle::svm_objective(pts, y, p.weights, p.bias, c)));
  }
}

TEST_CASE("svm and logreg separate random blobs; svm margins hold") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto b = separable_blobs(rng, 80, 5);
    const auto x = SparseMatrix::from_dense(b.x);
    CHECK(accuracy(predict_labels(train_logreg(x, b.y), x), b.y) == 1.0);
    SvmHyper h;
    h.cost_c = 100.0;
    const auto svm = train_linear_svm(x, b.y, h);
    const auto s = decision_scores(svm, x);
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(oracle::sign_of(b.y[j]) * s[j] >= 1 - 1e-6);
    }
  }
}

TEST_CASE("decision scores and thresholding") {
  TrainedModel m;
  m.kind = ModelKind::LogReg;
  m.hyper = LogRegHyper{};
  m.feature_count = 2;
  m.params = LinearParams{{1.0, 0.0}, 0.0};
  CHECK(decision_scores(m, SparseMatrix::from_dense({{2, 5}}))[0] == 2.0);
  CHECK(decision_scores(m, SparseMatrix(0, 2)).empty());
  CHECK(kind_of([&] { predict_labels(m, SparseMatrix::from_dense({{1, 2, 3}})); }) ==
        ErrorKind::DimensionMismatch);

  m.params = LinearParams{{0.0, 0.0}, 0.5};
  CHECK(predict_labels(m, SparseMatrix::from_dense({{1, 1}, {-3, 2}})) ==
        std::vector<Label>{U, U});
  m.params = LinearParams{{0.0, 0.0}, 0.0};
  CHECK(predict_labels(m, SparseMatrix::from_dense({{1, 1}})) == std::vector<Label>{N});
}

TEST_CASE("forest vote threshold") {
  TrainedModel m;
  m.kind = ModelKind::RandomForest;
  m.hyper = ForestHyper{};
  m.feature_count = 1;
  ForestParams f;
  for (int t = 0; t < 50; ++t) {
    DecisionTree tree;
    TreeNode leaf;
    leaf.label = t < 25 ? U : N;
    tree.nodes.push_back(leaf);
    f.trees.push_back(tree);
  }
  m.params = f;
  const auto x = SparseMatrix::from_dense({{0}, {3}});
  CHECK(decision_scores(m, x)[0] == 0.5);
  CHECK(predict_labels(m, x) == std::vector<Label>{N, N});

  for (auto& tree : std::get<ForestParams>(m.params).trees) tree.nodes[0].label = N;
  CHECK(predict_labels(m, x) == std::vector<Label>{N, N});
}

TEST_CASE("predict_labels equals thresholded scores") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution flip(0.2);
  auto b = separable_blobs(rng, 60, 3);
  for (auto& l : b.y) {
    if (flip(rng)) l = other_label(l);
  }
  const auto x = SparseMatrix::from_dense(b.x);
  ForestHyper fh;
  fh.n_trees = 9;
  for (const auto& m : {train_logreg(x, b.y), train_linear_svm(x, b.y),
                        train_random_forest(x, b.y, fh)}) {
    const auto s = decision_scores(m, x);
    const auto p = predict_labels(m, x);
    const double cut = m.kind == ModelKind::RandomForest ? 0.5 : 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) CHECK((p[j] == U) == (s[j] > cut));
  }
}

TEST_CASE("model json round-trip predicts identically") {
  std::mt19937_64 rng(12);
  const auto b = separable_blobs(rng, 40, 3);
  const auto x = SparseMatrix::from_dense(b.x);
  ForestHyper fh;
  fh.n_trees = 7;
  for (const auto& m : {train_logreg(x, b.y), train_linear_svm(x, b.y),
                        train_random_forest(x, b.y, fh)}) {
    const auto back = model_from_json(model_to_json(m));
    CHECK(decision_scores(back, x) == decision_scores(m, x));
    CHECK(model_to_json(back) == model_to_json(m));
  }
  auto j = model_to_json(train_logreg(x, b.y));
  j["version"] = 99;
  CHECK_THROWS_AS(model_from_json(j), Error);
}
