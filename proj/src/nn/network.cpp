#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/rng.hpp"

namespace hgnn {
namespace {

void check_shapes(const PropagationOperator& op, const DenseMatrix& x,
                  const TwoLayerParams& params) {
  if (op.size() != x.rows() || params.theta1.rows() != x.cols() ||
      params.theta2.rows() != params.theta1.cols()) {
    throw ShapeError(fmt::format(
        "network: operator {}x{}, input {}x{}, theta1 {}x{}, theta2 {}x{}", op.size(), op.size(),
        x.rows(), x.cols(), params.theta1.rows(), params.theta1.cols(), params.theta2.rows(),
        params.theta2.cols()));
  }
  if (!x.all_finite()) throw NumericalError("network: non-finite input features");
}

}  // namespace

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix z(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto in = logits.row(i);
    auto out = z.row(i);
    const double mx = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      out[c] = std::exp(in[c] - mx);
      sum += out[c];
    }
    for (double& v : out) v /= sum;
  }
  return z;
}

namespace {

// Fills every trace field except propagated_input.
void forward_layers(const PropagationOperator& op, const DenseMatrix& propagated_input,
                    const TwoLayerParams& params, ForwardTrace& t) {
  t.pre_activation = matmul(propagated_input, params.theta1);
  t.hidden = t.pre_activation;
  for (double& v : t.hidden.values()) v = v > 0.0 ? v : 0.0;
  t.propagated_hidden = sparse_dense_mul(op.matrix, t.hidden);
  t.logits = matmul(t.propagated_hidden, params.theta2);
  if (!t.logits.all_finite()) throw NumericalError("network: non-finite logits");
  t.probabilities = softmax_rows(t.logits);
}

}  // namespace

ForwardTrace forward_from_propagated(const PropagationOperator& op, DenseMatrix propagated_input,
                                     const TwoLayerParams& params) {
  ForwardTrace t;
  t.propagated_input = std::move(propagated_input);
  forward_layers(op, t.propagated_input, params, t);
  return t;
}

ForwardTrace forward(const PropagationOperator& op, const DenseMatrix& x,
                     const TwoLayerParams& params) {
  check_shapes(op, x, params);
  return forward_from_propagated(op, sparse_dense_mul(op.matrix, x), params);
}

ForwardTrace forward_proposed(const PropagationOperator& op, const DenseMatrix& f,
                              const TwoLayerParams& params) {
  if (op.normalization != Normalization::kSym) {
    throw ParameterError("forward_proposed: expects the symmetric hypergraph operator");
  }
  return forward(op, f, params);
}

namespace {

LossAndGradients backprop(const SparseMatrix& theta_t, const DenseMatrix& propagated_input,
                          const ForwardTrace& trace, const LabelMatrix& y, std::span<const std::size_t> labeled,
                          const TwoLayerParams& params, double weight_decay) {
  if (labeled.empty()) throw ParameterError("loss_and_gradients: empty labeled set");
  const std::size_t n = trace.logits.rows();
  const std::size_t classes = trace.logits.cols();
  if (y.values.rows() != n || y.values.cols() != classes) {
    throw ShapeError("loss_and_gradients: label matrix does not match the output");
  }
  const double inv_count = 1.0 / static_cast<double>(labeled.size());

  LossAndGradients out;
  DenseMatrix dlogits(n, classes);
  double nll = 0.0;
  for (std::size_t i : labeled) {
    if (i >= n) throw ParameterError("loss_and_gradients: labeled row out of range");
    const auto logit = trace.logits.row(i);
    const auto z = trace.probabilities.row(i);
    const auto target = y.values.row(i);
    // log Z[i, c] from the logits directly keeps tiny probabilities finite.
    const double mx = *std::max_element(logit.begin(), logit.end());
    double sum = 0.0;
    for (double v : logit) sum += std::exp(v - mx);
    const double log_norm = mx + std::log(sum);
    auto d = dlogits.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      if (target[c] != 0.0) nll -= target[c] * (logit[c] - log_norm);
      d[c] = (z[c] - target[c]) * inv_count;
    }
  }
  const double sq1 = [&] {
    double s = 0.0;
    for (double v : params.theta1.values()) s += v * v;
    return s;
  }();
  const double sq2 = [&] {
    double s = 0.0;
    for (double v : params.theta2.values()) s += v * v;
    return s;
  }();
  out.loss = nll * inv_count + 0.5 * weight_decay * (sq1 + sq2);

  out.grads.theta2 = matmul_tn(trace.propagated_hidden, dlogits);
  const DenseMatrix d_prop_hidden = matmul_nt(dlogits, params.theta2);
  DenseMatrix d_pre = sparse_dense_mul(theta_t, d_prop_hidden);
  auto pre = trace.pre_activation.values();
  auto dp = d_pre.values();
  for (std::size_t t = 0; t < dp.size(); ++t) {
    if (!(pre[t] > 0.0)) dp[t] = 0.0;
  }
  out.grads.theta1 = matmul_tn(propagated_input, d_pre);

  if (weight_decay != 0.0) {
    auto g1 = out.grads.theta1.values();
    auto p1 = params.theta1.values();
    for (std::size_t t = 0; t < g1.size(); ++t) g1[t] += weight_decay * p1[t];
    auto g2 = out.grads.theta2.values();
    auto p2 = params.theta2.values();
    for (std::size_t t = 0; t < g2.size(); ++t) g2[t] += weight_decay * p2[t];
  }
  return out;
}

}  // namespace

LossAndGradients loss_and_gradients(const PropagationOperator& op, const ForwardTrace& trace,
                                    const LabelMatrix& y, std::span<const std::size_t> labeled,
                                    const TwoLayerParams& params, double weight_decay) {
  if (op.is_symmetric()) {
    return backprop(op.matrix, trace.propagated_input, trace, y, labeled, params, weight_decay);
  }
  return backprop(op.matrix.transpose(), trace.propagated_input, trace, y, labeled, params,
                  weight_decay);
}

TwoLayerParams glorot_init(std::size_t input_dim, std::size_t hidden, std::size_t classes,
                           std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto fill = [&rng](DenseMatrix& m) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double& v : m.values()) v = rng.uniform(-limit, limit);
  };
  TwoLayerParams p{DenseMatrix(input_dim, hidden), DenseMatrix(hidden, classes)};
  fill(p.theta1);
  fill(p.theta2);
  return p;
}

namespace {

struct AdamState {
  DenseMatrix m;
  DenseMatrix v;
};

void adam_step(DenseMatrix& param, const DenseMatrix& grad, AdamState& st, const TrainConfig& cfg,
               double bias1, double bias2) {
  auto p = param.values();
  auto g = grad.values();
  auto m = st.m.values();
  auto v = st.v.values();
  for (std::size_t t = 0; t < p.size(); ++t) {
    m[t] = cfg.adam_beta1 * m[t] + (1.0 - cfg.adam_beta1) * g[t];
    v[t] = cfg.adam_beta2 * v[t] + (1.0 - cfg.adam_beta2) * g[t] * g[t];
    const double m_hat = m[t] / bias1;
    const double v_hat = v[t] / bias2;
    p[t] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
}

double labeled_accuracy(const ForwardTrace& trace, const LabelMatrix& y,
                        std::span<const std::size_t> labeled) {
  const auto pred = decode_predictions(trace.probabilities);
  const auto truth = decode_predictions(y.values);
  return accuracy(pred, truth, labeled);
}

}  // namespace

TwoLayerParams train(const PropagationOperator& op, const DenseMatrix& x, const LabelMatrix& y,
                     std::span<const std::size_t> labeled, const TrainConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0) || cfg.epochs < 1 || cfg.hidden < 1) {
    throw ParameterError("train: need learning_rate >= 0, epochs >= 1, hidden >= 1");
  }
  if (y.scheme != LabelScheme::kOneHot) throw ParameterError("train: expects one-hot labels");
  TwoLayerParams params = glorot_init(x.cols(), cfg.hidden, y.values.cols(), cfg.seed);
  check_shapes(op, x, params);

  const DenseMatrix propagated = sparse_dense_mul(op.matrix, x);
  const SparseMatrix theta_t = op.is_symmetric() ? SparseMatrix{} : op.matrix.transpose();
  const SparseMatrix& back = op.is_symmetric() ? op.matrix : theta_t;

  AdamState s1{DenseMatrix(params.theta1.rows(), params.theta1.cols()),
               DenseMatrix(params.theta1.rows(), params.theta1.cols())};
  AdamState s2{DenseMatrix(params.theta2.rows(), params.theta2.cols()),
               DenseMatrix(params.theta2.rows(), params.theta2.cols())};
  double beta1_pow = 1.0;
  double beta2_pow = 1.0;
  if (cfg.log) *cfg.log << "epoch,loss,train_accuracy\n";
  ForwardTrace trace;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    forward_layers(op, propagated, params, trace);
    LossAndGradients lg = backprop(back, propagated, trace, y, labeled, params, cfg.weight_decay);
    if (!std::isfinite(lg.loss)) {
      throw NumericalError(fmt::format("train: non-finite loss at epoch {}", epoch));
    }
    if (cfg.log) {
      *cfg.log << fmt::format("{},{:.10g},{:.6f}\n", epoch, lg.loss,
                              labeled_accuracy(trace, y, labeled));
    }
    beta1_pow *= cfg.adam_beta1;
    beta2_pow *= cfg.adam_beta2;
    adam_step(params.theta1, lg.grads.theta1, s1, cfg, 1.0 - beta1_pow, 1.0 - beta2_pow);
    adam_step(params.theta2, lg.grads.theta2, s2, cfg, 1.0 - beta1_pow, 1.0 - beta2_pow);
  }
  return params;
}

std::vector<int> predict(const PropagationOperator& op, const DenseMatrix& x,
                         const TwoLayerParams& params) {
  return decode_predictions(forward(op, x, params).probabilities);
}

}  // namespace hgnn
