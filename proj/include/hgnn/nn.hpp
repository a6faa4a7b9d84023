#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

// Z = softmax(Theta * ReLU(Theta * X * theta1) * theta2)
struct TwoLayerParams {
  DenseMatrix theta1;  // L1 x L2
  DenseMatrix theta2;  // L2 x C
};

struct TrainConfig {
  std::size_t hidden = 64;
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  double weight_decay = 5e-4;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // When set, one "epoch,loss,train_accuracy" CSV line per epoch.
  std::ostream* log = nullptr;
};

struct ForwardTrace {
  DenseMatrix propagated_input;   // Theta X
  DenseMatrix pre_activation;     // Theta X theta1
  DenseMatrix hidden;             // R = ReLU(pre_activation)
  DenseMatrix propagated_hidden;  // Theta R
  DenseMatrix logits;             // Theta R theta2
  DenseMatrix probabilities;      // Z, row softmax of logits
};

// Row softmax with the row maximum subtracted first.
DenseMatrix softmax_rows(const DenseMatrix& logits);

// Graph, GCN and hypergraph networks (sym or rw). Throws NumericalError if
// the logits are not finite.
ForwardTrace forward(const PropagationOperator& op, const DenseMatrix& x,
                     const TwoLayerParams& params);

// The proposed network: same two layers, run on propagated features F with
// the symmetric hypergraph operator.
ForwardTrace forward_proposed(const PropagationOperator& op, const DenseMatrix& f,
                              const TwoLayerParams& params);

// Forward pass reusing a precomputed Theta X.
ForwardTrace forward_from_propagated(const PropagationOperator& op, DenseMatrix propagated_input,
                                     const TwoLayerParams& params);

struct LossAndGradients {
  double loss = 0.0;
  TwoLayerParams grads;
};

// Masked mean cross-entropy over `labeled` plus (weight_decay / 2) times the
// squared Frobenius norms of both parameter matrices, with gradients by
// backpropagation through the softmax, both Theta products and the ReLU
// (derivative 0 at exactly 0).
LossAndGradients loss_and_gradients(const PropagationOperator& op, const ForwardTrace& trace,
                                    const LabelMatrix& y, std::span<const std::size_t> labeled,
                                    const TwoLayerParams& params, double weight_decay);

TwoLayerParams glorot_init(std::size_t input_dim, std::size_t hidden, std::size_t classes,
                           std::uint64_t seed);

// Full-batch Adam for cfg.epochs steps from a seeded Glorot initialization.
TwoLayerParams train(const PropagationOperator& op, const DenseMatrix& x, const LabelMatrix& y,
                     std::span<const std::size_t> labeled, const TrainConfig& cfg);

std::vector<int> predict(const PropagationOperator& op, const DenseMatrix& x,
                         const TwoLayerParams& params);

}  // namespace hgnn
