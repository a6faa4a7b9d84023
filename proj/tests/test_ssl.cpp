#include <gtest/gtest.h>

#include <cmath>

#include "hgnn/checks/oracles.hpp"
#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/rng.hpp"
#include "hgnn/ssl.hpp"

using namespace hgnn;

namespace {

struct Instance {
  std::size_t n;
  std::vector<std::vector<std::size_t>> edges;
  Hypergraph hg;
  PropagationOperator op;
  DenseMatrix theta;
};

Instance random_instance(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto edges = checks::random_hyperedges(n, n / 2, 6, rng);
  Hypergraph hg = make_hypergraph(n, edges);
  PropagationOperator op = hypergraph_operator(hg, Normalization::kSym);
  DenseMatrix theta = checks::dense_hypergraph_operator(n, edges, {}, Normalization::kSym);
  return {n, std::move(edges), std::move(hg), std::move(op), std::move(theta)};
}

LabelMatrix pm1(const DenseMatrix& y) { return {y, LabelScheme::kPlusMinusOne}; }

DenseMatrix random_pm1(std::size_t n, std::size_t c, SplitMix64& rng) {
  std::vector<int> labels(n);
  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.uniform_below(c));
    if (rng.uniform01() < 0.5) labeled.push_back(i);
  }
  return encode_labels(labels, labeled, static_cast<int>(c), LabelScheme::kPlusMinusOne).values;
}

PropagationConfig tight(double alpha) {
  PropagationConfig cfg;
  cfg.alpha = alpha;
  cfg.tol = 1e-13;
  cfg.max_iter = 5000;
  return cfg;
}

double rayleigh(const DenseMatrix& theta, const std::vector<double>& f) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double tf = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) tf += theta(i, j) * f[j];
    num += f[i] * (f[i] - tf);
    den += f[i] * f[i];
  }
  return num / den;
}

}  // namespace

TEST(PropagateLabels, ZeroLabelsGiveZero) {
  const Instance in = random_instance(20, 1);
  const DenseMatrix f = propagate_labels(in.op, pm1(DenseMatrix(20, 3)), {});
  EXPECT_EQ(f, DenseMatrix(20, 3));
}

TEST(PropagateLabels, TinyAlphaReturnsLabels) {
  const Instance in = random_instance(25, 2);
  SplitMix64 rng(3);
  const DenseMatrix y = random_pm1(25, 4, rng);
  PropagationConfig cfg;
  cfg.alpha = 1e-12;
  EXPECT_LE(max_abs_diff(propagate_labels(in.op, pm1(y), cfg), y), 1e-9);
}

TEST(PropagateLabels, MatchesDenseInverse) {
  const Instance in = random_instance(40, 4);
  SplitMix64 rng(5);
  const DenseMatrix y = random_pm1(40, 3, rng);
  const DenseMatrix f = propagate_labels(in.op, pm1(y), tight(0.99));
  EXPECT_LE(max_abs_diff(f, checks::dense_propagation(in.theta, y, 0.99)), 1e-8);
}

TEST(PropagateLabels, GraphOperatorAccepted) {
  SplitMix64 rng(6);
  const DenseMatrix x = checks::random_matrix(30, 2, rng);
  const PropagationOperator g = build_knn_graph(x, 4);
  const DenseMatrix y = random_pm1(30, 2, rng);
  const DenseMatrix f = propagate_labels(g, pm1(y), tight(0.9));
  EXPECT_LE(max_abs_diff(f, checks::dense_propagation(g.matrix.to_dense(), y, 0.9)), 1e-8);
}

TEST(PropagateFeatures, ZeroFeaturesGiveZero) {
  const Instance in = random_instance(15, 7);
  EXPECT_EQ(propagate_features(in.op, DenseMatrix(15, 2), {}), DenseMatrix(15, 2));
}

TEST(PropagateFeatures, EigenvectorIsFixed) {
  const Instance in = random_instance(30, 8);
  DenseMatrix x(30, 1);
  for (std::size_t i = 0; i < 30; ++i) x(i, 0) = 2.5 * std::sqrt(in.hg.vertex_degrees[i]);
  EXPECT_LE(max_abs_diff(propagate_features(in.op, x, tight(0.99)), x), 1e-9);
}

TEST(PropagateFeatures, MatchesDenseInverse) {
  const Instance in = random_instance(40, 9);
  SplitMix64 rng(10);
  const DenseMatrix x = checks::random_matrix(40, 3, rng);
  EXPECT_LE(max_abs_diff(propagate_features(in.op, x, tight(0.99)),
                         checks::dense_propagation(in.theta, x, 0.99)),
            1e-8);
}

TEST(Propagate, Linearity) {
  const Instance in = random_instance(35, 11);
  SplitMix64 rng(12);
  const DenseMatrix a = checks::random_matrix(35, 3, rng);
  const DenseMatrix b = checks::random_matrix(35, 3, rng);
  const PropagationConfig cfg = tight(0.9);
  EXPECT_LE(max_abs_diff(propagate(in.op, a + b, cfg),
                         propagate(in.op, a, cfg) + propagate(in.op, b, cfg)),
            1e-9);
}

TEST(Propagate, SmoothingGrowsWithAlpha) {
  SplitMix64 rng(13);
  for (int rep = 0; rep < 5; ++rep) {
    const Instance in = random_instance(10 + rng.uniform_below(41), rng.next_u64());
    const DenseMatrix x = checks::random_matrix(in.n, 2, rng);
    double previous[2] = {INFINITY, INFINITY};
    for (double alpha : {0.1, 0.5, 0.9, 0.99}) {
      const DenseMatrix f = checks::dense_propagation(in.theta, x, alpha);
      const DenseMatrix g = propagate(in.op, x, tight(alpha));
      EXPECT_LE(max_abs_diff(f, g), 1e-8);
      for (std::size_t c = 0; c < 2; ++c) {
        const double r = rayleigh(in.theta, g.column(c));
        EXPECT_LE(r, previous[c] + 1e-12) << "alpha " << alpha;
        previous[c] = r;
      }
    }
  }
}

TEST(Propagate, ParallelColumnsEqualSerial) {
  const Instance in = random_instance(45, 14);
  SplitMix64 rng(15);
  const DenseMatrix x = checks::random_matrix(45, 6, rng);
  PropagationConfig serial;
  PropagationConfig parallel;
  parallel.workers = 3;
  EXPECT_EQ(propagate(in.op, x, serial), propagate(in.op, x, parallel));
}

TEST(Propagate, Preconditions) {
  const Instance in = random_instance(10, 16);
  const PropagationOperator rw = hypergraph_operator(in.hg, Normalization::kRw);
  PropagationConfig cfg;
  EXPECT_THROW(propagate(rw, DenseMatrix(10, 1), cfg), ParameterError);
  cfg.alpha = 1.0;
  EXPECT_THROW(propagate(in.op, DenseMatrix(10, 1), cfg), ParameterError);
  cfg.alpha = 0.5;
  EXPECT_THROW(propagate(in.op, DenseMatrix(9, 1), cfg), ShapeError);
  EXPECT_THROW(propagate_labels(in.op, {DenseMatrix(10, 2), LabelScheme::kOneHot}, cfg),
               ParameterError);
  SplitMix64 rng(17);
  const PropagationOperator g = build_knn_graph(checks::random_matrix(10, 2, rng), 3);
  EXPECT_THROW(propagate_features(g, DenseMatrix(10, 2), cfg), ParameterError);
}

TEST(Propagate, NonConvergenceRaisesSolverError) {
  const Instance in = random_instance(50, 18);
  SplitMix64 rng(19);
  const DenseMatrix x = checks::random_matrix(50, 2, rng);
  PropagationConfig cfg;
  cfg.tol = 1e-15;
  cfg.max_iter = 2;
  try {
    propagate(in.op, x, cfg);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.worst_residual(), 1e-15);
  }
}

TEST(HypergraphSsl, SyntheticBlobs) {
  const ImageDataset ds = synthetic_blobs(300, 3, 10, 0.1, 1);
  const PropagationOperator op =
      hypergraph_operator(build_knn_hypergraph(ds.features, 5), Normalization::kSym);
  const LabelMatrix y = encode_labels(ds.labels, ds.train_indices, 3, LabelScheme::kPlusMinusOne);
  const std::vector<int> pred = decode_predictions(propagate_labels(op, y, {}));
  EXPECT_GE(accuracy(pred, ds.labels, ds.test_indices), 0.95);
}
