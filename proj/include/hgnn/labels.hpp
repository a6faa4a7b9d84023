#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hgnn/dataset.hpp"
#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

enum class LabelScheme {
  kPlusMinusOne,  // +1 own class, -1 elsewhere, all-zero rows when unlabeled
  kOneHot,
};

struct LabelMatrix {
  DenseMatrix values;  // n x C
  LabelScheme scheme = LabelScheme::kOneHot;
};

// Training labels after symmetric corruption. `flipped` is ascending and
// holds exactly the rows where noisy_labels differs from clean_labels.
struct NoisySplit {
  std::vector<int> clean_labels;
  std::vector<int> noisy_labels;
  std::vector<std::size_t> flipped;
  double level = 0.0;
  std::uint64_t seed = 0;
};

// Replaces round(level * |train|) training labels, chosen uniformly without
// replacement, by a class drawn uniformly from the other C - 1 classes.
//
// Draw order on one SplitMix64 stream seeded with noise_stream_seed(seed,
// level): a partial Fisher-Yates shuffle of a copy of train_indices picks
// the rows (one uniform_below(|train| - t) per pick t); then, for each
// picked row in pick order, r = uniform_below(C - 1) and the new class is
// r if r < clean else r + 1.
NoisySplit inject_noise(const ImageDataset& dataset, double level, std::uint64_t seed);

std::uint64_t noise_stream_seed(std::uint64_t seed, double level) noexcept;

// Rows outside `labeled` are zero. Throws ParameterError for a class id
// >= num_classes or a row index out of range.
LabelMatrix encode_labels(std::span<const int> labels, std::span<const std::size_t> labeled,
                          int num_classes, LabelScheme scheme);
LabelMatrix encode_labels(const NoisySplit& split, std::span<const std::size_t> labeled,
                          int num_classes, LabelScheme scheme);

// Row-wise argmax, ties to the lowest class. Throws NumericalError on NaN.
std::vector<int> decode_predictions(const DenseMatrix& scores);

// Fraction of eval rows where pred == truth. Throws ParameterError when
// eval is empty.
double accuracy(std::span<const int> pred, std::span<const int> truth,
                std::span<const std::size_t> eval);

}  // namespace hgnn
