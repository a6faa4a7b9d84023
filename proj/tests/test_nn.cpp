#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hgnn/checks/oracles.hpp"
#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/rng.hpp"
#include "hgnn/ssl.hpp"

using namespace hgnn;

namespace {

PropagationOperator identity_operator(std::size_t n) {
  return {SparseMatrix::identity(n), Normalization::kSym};
}

struct Case {
  PropagationOperator op;
  DenseMatrix theta;
  DenseMatrix x;
  LabelMatrix y;
  std::vector<std::size_t> labeled;
  TwoLayerParams params;
};

Case random_case(Normalization norm, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t n = 8 + rng.uniform_below(5);
  const std::size_t l1 = 3 + rng.uniform_below(4);
  const std::size_t l2 = 2 + rng.uniform_below(4);
  const std::size_t c = 2 + rng.uniform_below(3);
  Case out;
  out.x = checks::random_matrix(n, l1, rng);
  if (norm == Normalization::kGcn) {
    out.op = gcn_operator(out.x, 3);
    out.theta = out.op.matrix.to_dense();
  } else {
    const auto edges = checks::random_hyperedges(n, n / 2 + 1, 4, rng);
    out.op = hypergraph_operator(make_hypergraph(n, edges), norm);
    out.theta = checks::dense_hypergraph_operator(n, edges, {}, norm);
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.uniform_below(c));
    if (i % 2 == 0) out.labeled.push_back(i);
  }
  out.y = encode_labels(labels, out.labeled, static_cast<int>(c), LabelScheme::kOneHot);
  out.params = glorot_init(l1, l2, c, rng.next_u64());
  return out;
}

DenseMatrix dense_forward(const DenseMatrix& theta, const DenseMatrix& x, const TwoLayerParams& p) {
  DenseMatrix h = checks::naive_matmul(checks::naive_matmul(theta, x), p.theta1);
  for (double& v : h.values()) v = std::max(v, 0.0);
  DenseMatrix z = checks::naive_matmul(checks::naive_matmul(theta, h), p.theta2);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    double mx = -INFINITY, s = 0.0;
    for (double v : z.row(i)) mx = std::max(mx, v);
    for (double& v : z.row(i)) s += (v = std::exp(v - mx));
    for (double& v : z.row(i)) v /= s;
  }
  return z;
}

bool near_kink(const ForwardTrace& t) {
  for (double v : t.pre_activation.values()) {
    if (std::abs(v) < 1e-3) return true;
  }
  return false;
}

void check_gradients(Normalization norm, bool proposed) {
  int done = 0;
  for (std::uint64_t seed = 100; done < 3; ++seed) {
    Case c = random_case(norm, seed);
    if (proposed) {
      PropagationConfig pc;
      pc.alpha = 0.8;
      pc.tol = 1e-12;
      c.x = propagate_features(c.op, c.x, pc);
    }
    const ForwardTrace trace =
        proposed ? forward_proposed(c.op, c.x, c.params) : forward(c.op, c.x, c.params);
    if (near_kink(trace)) continue;
    const LossAndGradients g = loss_and_gradients(c.op, trace, c.y, c.labeled, c.params, 1e-3);
    const auto loss = [&](const TwoLayerParams& p) {
      return checks::dense_network_loss(c.theta, c.x, p, c.y.values, c.labeled, 1e-3);
    };
    EXPECT_NEAR(g.loss, loss(c.params), 1e-12);
    const TwoLayerParams fd = checks::finite_difference_gradient(loss, c.params, 1e-5);
    EXPECT_LT(checks::max_relative_error(g.grads.theta1, fd.theta1, 1e-6), 1e-5) << seed;
    EXPECT_LT(checks::max_relative_error(g.grads.theta2, fd.theta2, 1e-6), 1e-5) << seed;
    ++done;
  }
}

}  // namespace

TEST(Forward, ZeroFirstLayerGivesUniform) {
  Case c = random_case(Normalization::kSym, 1);
  c.params.theta1 = DenseMatrix(c.params.theta1.rows(), c.params.theta1.cols());
  const ForwardTrace t = forward(c.op, c.x, c.params);
  const double u = 1.0 / static_cast<double>(c.params.theta2.cols());
  for (double v : t.probabilities.values()) EXPECT_DOUBLE_EQ(v, u);
}

TEST(Forward, IdentityEverythingIsSoftmaxOfInput) {
  const DenseMatrix x{{0.1, 2.0, 0.5}, {3.0, 0.0, 1.0}};
  const TwoLayerParams p{DenseMatrix::identity(3), DenseMatrix::identity(3)};
  const ForwardTrace t = forward(identity_operator(2), x, p);
  EXPECT_LE(max_abs_diff(t.probabilities, softmax_rows(x)), 1e-15);
}

TEST(Forward, MatchesDenseOracle) {
  for (Normalization norm : {Normalization::kSym, Normalization::kRw, Normalization::kGcn}) {
    const Case c = random_case(norm, 2);
    const ForwardTrace t = forward(c.op, c.x, c.params);
    EXPECT_LE(max_abs_diff(t.probabilities, dense_forward(c.theta, c.x, c.params)), 1e-12);
    for (std::size_t i = 0; i < t.probabilities.rows(); ++i) {
      double s = 0.0;
      for (double v : t.probabilities.row(i)) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Forward, NonFiniteInputThrows) {
  Case c = random_case(Normalization::kSym, 3);
  c.x(0, 0) = INFINITY;
  EXPECT_THROW(forward(c.op, c.x, c.params), NumericalError);
  EXPECT_THROW(forward(c.op, DenseMatrix(c.x.rows(), c.x.cols() + 1), c.params), ShapeError);
}

TEST(ForwardProposed, TinyAlphaMatchesPlainForward) {
  const Case c = random_case(Normalization::kSym, 4);
  PropagationConfig pc;
  pc.alpha = 1e-12;
  const DenseMatrix f = propagate_features(c.op, c.x, pc);
  EXPECT_LE(max_abs_diff(forward_proposed(c.op, f, c.params).probabilities,
                         forward(c.op, c.x, c.params).probabilities),
            1e-6);
}

TEST(ForwardProposed, MatchesDenseOracleAndRequiresSym) {
  const Case c = random_case(Normalization::kSym, 5);
  PropagationConfig pc;
  pc.tol = 1e-12;
  const DenseMatrix f = propagate_features(c.op, c.x, pc);
  const DenseMatrix f_dense = checks::dense_propagation(c.theta, c.x, pc.alpha);
  EXPECT_LE(max_abs_diff(forward_proposed(c.op, f, c.params).probabilities,
                         dense_forward(c.theta, f_dense, c.params)),
            1e-9);
  const Case rw = random_case(Normalization::kRw, 5);
  EXPECT_THROW(forward_proposed(rw.op, rw.x, rw.params), ParameterError);
}

TEST(Softmax, StableForLargeLogitsAndShiftInvariant) {
  const DenseMatrix big{{1000.0, -1000.0, 999.0}, {-1e3, -1e3, -1e3}, {0.0, 700.0, 710.0}};
  const DenseMatrix z = softmax_rows(big);
  EXPECT_TRUE(z.all_finite());
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (double v : z.row(i)) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  SplitMix64 rng(6);
  const DenseMatrix logits = checks::random_matrix(5, 4, rng, -50, 50);
  DenseMatrix shifted = logits;
  for (std::size_t i = 0; i < 5; ++i) {
    for (double& v : shifted.row(i)) v += 123.0;
  }
  EXPECT_LE(max_abs_diff(softmax_rows(logits), softmax_rows(shifted)), 1e-12);
}

TEST(Loss, ZeroParamsGiveLogC) {
  Case c = random_case(Normalization::kSym, 7);
  c.params.theta1 = DenseMatrix(c.params.theta1.rows(), c.params.theta1.cols());
  c.params.theta2 = DenseMatrix(c.params.theta2.rows(), c.params.theta2.cols());
  const ForwardTrace t = forward(c.op, c.x, c.params);
  const LossAndGradients g = loss_and_gradients(c.op, t, c.y, c.labeled, c.params, 0.0);
  EXPECT_DOUBLE_EQ(g.loss, std::log(static_cast<double>(c.y.values.cols())));
}

TEST(Loss, ConfidentCorrectPredictionApproachesZero) {
  const DenseMatrix x{{1, 0}, {0, 1}};
  const LabelMatrix y{DenseMatrix{{1, 0}, {0, 1}}, LabelScheme::kOneHot};
  const std::vector<std::size_t> labeled{0, 1};
  double previous = INFINITY;
  for (double scale : {1.0, 10.0, 100.0}) {
    const TwoLayerParams p{DenseMatrix::identity(2), scale * DenseMatrix::identity(2)};
    const ForwardTrace t = forward(identity_operator(2), x, p);
    const double loss = loss_and_gradients(identity_operator(2), t, y, labeled, p, 0.0).loss;
    EXPECT_LT(loss, previous);
    previous = loss;
  }
  EXPECT_LT(previous, 1e-40);
}

TEST(Loss, RejectsEmptyMask) {
  const Case c = random_case(Normalization::kSym, 8);
  const ForwardTrace t = forward(c.op, c.x, c.params);
  EXPECT_THROW(loss_and_gradients(c.op, t, c.y, {}, c.params, 0.0), ParameterError);
}

TEST(Gradients, SymmetricHypergraph) { check_gradients(Normalization::kSym, false); }
TEST(Gradients, RandomWalkHypergraph) { check_gradients(Normalization::kRw, false); }
TEST(Gradients, GcnOperator) { check_gradients(Normalization::kGcn, false); }
TEST(Gradients, Proposed) { check_gradients(Normalization::kSym, true); }

TEST(Gradients, LogisticRegressionEquivalence) {
  // Theta = I and theta1 = I on nonnegative X leave softmax(X theta2): the
  // theta2 gradient is X^T (Z - Y) / |mask| + wd theta2.
  SplitMix64 rng(9);
  const std::size_t n = 6, m = 3, c = 3;
  const DenseMatrix x = checks::random_matrix(n, m, rng, 0.1, 2.0);
  const std::vector<std::size_t> labeled{0, 2, 3, 5};
  const std::vector<int> labels{0, 1, 2, 2, 1, 0};
  const LabelMatrix y = encode_labels(labels, labeled, 3, LabelScheme::kOneHot);
  const TwoLayerParams p{DenseMatrix::identity(m), checks::random_matrix(m, c, rng)};
  const double wd = 0.01;
  const ForwardTrace t = forward(identity_operator(n), x, p);
  const LossAndGradients g = loss_and_gradients(identity_operator(n), t, y, labeled, p, wd);

  DenseMatrix expected(m, c);
  double loss = 0.0;
  for (std::size_t i : labeled) {
    std::vector<double> logit(c, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t j = 0; j < m; ++j) logit[k] += x(i, j) * p.theta2(j, k);
    }
    double norm = 0.0;
    for (double v : logit) norm += std::exp(v);
    for (std::size_t k = 0; k < c; ++k) {
      const double prob = std::exp(logit[k]) / norm;
      const double target = labels[i] == static_cast<int>(k) ? 1.0 : 0.0;
      for (std::size_t j = 0; j < m; ++j) expected(j, k) += x(i, j) * (prob - target) / 4.0;
    }
    loss -= (logit[labels[i]] - std::log(norm)) / 4.0;
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sq += 1.0;
    for (std::size_t k = 0; k < c; ++k) {
      expected(j, k) += wd * p.theta2(j, k);
      sq += p.theta2(j, k) * p.theta2(j, k);
    }
  }
  EXPECT_NEAR(g.loss, loss + 0.5 * wd * sq, 1e-13);
  EXPECT_LE(max_abs_diff(g.grads.theta2, expected), 1e-13);
}

TEST(GlorotInit, ShapesBoundsAndDeterminism) {
  const TwoLayerParams a = glorot_init(10, 6, 3, 42);
  const TwoLayerParams b = glorot_init(10, 6, 3, 42);
  EXPECT_EQ(a.theta1, b.theta1);
  EXPECT_EQ(a.theta2, b.theta2);
  EXPECT_EQ(a.theta1.rows(), 10u);
  EXPECT_EQ(a.theta2.cols(), 3u);
  const double r1 = std::sqrt(6.0 / 16.0);
  for (double v : a.theta1.values()) EXPECT_LE(std::abs(v), r1);
  const double r2 = std::sqrt(6.0 / 9.0);
  for (double v : a.theta2.values()) EXPECT_LE(std::abs(v), r2);
  EXPECT_NE(glorot_init(10, 6, 3, 43).theta1, a.theta1);
}

TEST(Train, ZeroLearningRateKeepsInitialization) {
  const Case c = random_case(Normalization::kSym, 10);
  TrainConfig cfg;
  cfg.hidden = c.params.theta1.cols();
  cfg.learning_rate = 0.0;
  cfg.epochs = 5;
  cfg.seed = 77;
  const TwoLayerParams p = train(c.op, c.x, c.y, c.labeled, cfg);
  const TwoLayerParams init = glorot_init(c.x.cols(), cfg.hidden, c.y.values.cols(), 77);
  EXPECT_EQ(p.theta1, init.theta1);
  EXPECT_EQ(p.theta2, init.theta2);
}

TEST(Train, DeterministicUnderSeedAndLogsEveryEpoch) {
  const Case c = random_case(Normalization::kRw, 11);
  std::ostringstream log;
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.epochs = 30;
  cfg.seed = 5;
  const TwoLayerParams a = train(c.op, c.x, c.y, c.labeled, cfg);
  cfg.log = &log;
  const TwoLayerParams b = train(c.op, c.x, c.y, c.labeled, cfg);
  EXPECT_EQ(a.theta1, b.theta1);
  EXPECT_EQ(a.theta2, b.theta2);
  std::istringstream in(log.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,loss,train_accuracy");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 30);
}

TEST(Train, LossDecreases) {
  const Case c = random_case(Normalization::kSym, 12);
  TrainConfig cfg;
  cfg.hidden = 16;
  cfg.epochs = 100;
  cfg.weight_decay = 0.0;
  const TwoLayerParams before = glorot_init(c.x.cols(), 16, c.y.values.cols(), cfg.seed);
  const TwoLayerParams after = train(c.op, c.x, c.y, c.labeled, cfg);
  const auto loss = [&](const TwoLayerParams& p) {
    return loss_and_gradients(c.op, forward(c.op, c.x, p), c.y, c.labeled, p, 0.0).loss;
  };
  EXPECT_LT(loss(after), 0.5 * loss(before));
}

TEST(Train, RejectsPlusMinusOneLabels) {
  const Case c = random_case(Normalization::kSym, 13);
  const LabelMatrix pm1{c.y.values, LabelScheme::kPlusMinusOne};
  EXPECT_THROW(train(c.op, c.x, pm1, c.labeled, {}), ParameterError);
}

TEST(Train, HgnnOnSyntheticBlobs) {
  const ImageDataset ds = synthetic_blobs(300, 3, 10, 0.1, 1);
  const PropagationOperator op =
      hypergraph_operator(build_knn_hypergraph(ds.features, 5), Normalization::kSym);
  const LabelMatrix y = encode_labels(ds.labels, ds.train_indices, 3, LabelScheme::kOneHot);
  const TwoLayerParams p = train(op, ds.features, y, ds.train_indices, {});
  EXPECT_GE(accuracy(predict(op, ds.features, p), ds.labels, ds.test_indices), 0.95);
}

TEST(Predict, MatchesDecodeOfForward) {
  const Case c = random_case(Normalization::kSym, 14);
  EXPECT_EQ(predict(c.op, c.x, c.params),
            decode_predictions(forward(c.op, c.x, c.params).probabilities));
  TwoLayerParams zero = c.params;
  zero.theta2 = DenseMatrix(zero.theta2.rows(), zero.theta2.cols());
  EXPECT_EQ(predict(c.op, c.x, zero), std::vector<int>(c.x.rows(), 0));
}

TEST(Predict, IdentityOperatorRecoversSeparableLabels) {
  const DenseMatrix x{{5, 0}, {0, 5}, {4, 1}, {1, 4}};
  const TwoLayerParams p{DenseMatrix::identity(2), DenseMatrix::identity(2)};
  EXPECT_EQ(predict(identity_operator(4), x, p), (std::vector<int>{0, 1, 0, 1}));
}
