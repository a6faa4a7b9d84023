#include "hgnn/labels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/rng.hpp"

namespace hgnn {

std::uint64_t noise_stream_seed(std::uint64_t seed, double level) noexcept {
  return mix_seed(seed, std::bit_cast<std::uint64_t>(level));
}

NoisySplit inject_noise(const ImageDataset& dataset, double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw ParameterError(fmt::format("inject_noise: level {} outside [0, 1)", level));
  }
  if (dataset.num_classes < 2) throw ParameterError("inject_noise: need at least two classes");
  NoisySplit split;
  split.level = level;
  split.seed = seed;
  split.clean_labels = dataset.labels;
  split.noisy_labels = dataset.labels;

  const std::size_t l = dataset.train_indices.size();
  const auto flips = static_cast<std::size_t>(std::llround(level * static_cast<double>(l)));
  SplitMix64 rng(noise_stream_seed(seed, level));

  std::vector<std::size_t> pool = dataset.train_indices;
  for (std::size_t t = 0; t < flips; ++t) {
    const std::size_t j = t + rng.uniform_below(l - t);
    std::swap(pool[t], pool[j]);
  }
  const auto c_minus_1 = static_cast<std::uint64_t>(dataset.num_classes - 1);
  for (std::size_t t = 0; t < flips; ++t) {
    const std::size_t row = pool[t];
    const int clean = split.clean_labels[row];
    const int r = static_cast<int>(rng.uniform_below(c_minus_1));
    split.noisy_labels[row] = r < clean ? r : r + 1;
  }
  split.flipped.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(flips));
  std::sort(split.flipped.begin(), split.flipped.end());
  return split;
}

LabelMatrix encode_labels(std::span<const int> labels, std::span<const std::size_t> labeled,
                          int num_classes, LabelScheme scheme) {
  if (num_classes < 1) throw ParameterError("encode_labels: need at least one class");
  LabelMatrix out;
  out.scheme = scheme;
  out.values = DenseMatrix(labels.size(), static_cast<std::size_t>(num_classes));
  const double off = scheme == LabelScheme::kPlusMinusOne ? -1.0 : 0.0;
  for (std::size_t i : labeled) {
    if (i >= labels.size()) {
      throw ParameterError(fmt::format("encode_labels: row {} out of range", i));
    }
    const int c = labels[i];
    if (c < 0 || c >= num_classes) {
      throw ParameterError(
          fmt::format("encode_labels: class {} of row {} outside [0, {})", c, i, num_classes));
    }
    auto row = out.values.row(i);
    std::fill(row.begin(), row.end(), off);
    row[static_cast<std::size_t>(c)] = 1.0;
  }
  return out;
}

LabelMatrix encode_labels(const NoisySplit& split, std::span<const std::size_t> labeled,
                          int num_classes, LabelScheme scheme) {
  return encode_labels(split.noisy_labels, labeled, num_classes, scheme);
}

std::vector<int> decode_predictions(const DenseMatrix& scores) {
  if (scores.cols() < 2) throw ParameterError("decode_predictions: need at least two classes");
  std::vector<int> out(scores.rows(), 0);
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto r = scores.row(i);
    std::size_t best = 0;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (std::isnan(r[c])) {
        throw NumericalError(fmt::format("decode_predictions: NaN in row {}", i));
      }
      if (r[c] > r[best]) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth,
                std::span<const std::size_t> eval) {
  if (eval.empty()) throw ParameterError("accuracy: empty evaluation set");
  std::size_t hits = 0;
  for (std::size_t i : eval) {
    if (i >= pred.size() || i >= truth.size()) {
      throw ParameterError(fmt::format("accuracy: row {} out of range", i));
    }
    hits += pred[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(eval.size());
}

}  // namespace hgnn
