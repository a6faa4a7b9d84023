#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"
#include "hgnn/rng.hpp"

namespace hgnn {

void ImageDataset::validate() const {
  const std::size_t n = labels.size();
  if (features.rows() != n) {
    throw FormatError(fmt::format("dataset: {} feature rows but {} labels", features.rows(), n));
  }
  std::vector<char> seen(n, 0);
  for (const auto* part : {&train_indices, &test_indices}) {
    for (std::size_t i : *part) {
      if (i >= n || seen[i]) {
        throw FormatError(fmt::format("dataset: index {} out of range or repeated", i));
      }
      seen[i] = 1;
    }
  }
  if (train_indices.size() + test_indices.size() != n) {
    throw FormatError("dataset: train/test indices do not cover every row");
  }
  for (int l : labels) {
    if (l < 0 || l >= num_classes) {
      throw FormatError(fmt::format("dataset: label {} outside [0, {})", l, num_classes));
    }
  }
  if (!features.all_finite()) throw FormatError("dataset: non-finite feature value");
}

ImageDataset synthetic_blobs(std::size_t n, int num_classes, std::size_t dim, double spread,
                             std::uint64_t seed) {
  if (num_classes < 2 || n < static_cast<std::size_t>(num_classes) || dim < 1 ||
      !(spread > 0.0)) {
    throw ParameterError("synthetic_blobs: need n >= C >= 2, dim >= 1, spread > 0");
  }
  const auto c_count = static_cast<std::size_t>(num_classes);
  SplitMix64 rng(seed);

  // Centers uniform in a box, redrawn until pairwise >= 10 * spread apart.
  const double min_sep = 10.0 * spread;
  const double half_side = min_sep * static_cast<double>(c_count);
  DenseMatrix centers(c_count, dim);
  for (std::size_t c = 0; c < c_count; ++c) {
    for (;;) {
      for (double& v : centers.row(c)) v = rng.uniform(-half_side, half_side);
      bool ok = true;
      for (std::size_t o = 0; o < c && ok; ++o) {
        double d2 = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
          const double d = centers(c, t) - centers(o, t);
          d2 += d * d;
        }
        ok = std::sqrt(d2) >= min_sep;
      }
      if (ok) break;
    }
  }

  ImageDataset ds;
  ds.num_classes = num_classes;
  ds.features = DenseMatrix(n, dim);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % c_count;
    ds.labels[i] = static_cast<int>(c);
    for (std::size_t t = 0; t < dim; ++t) {
      ds.features(i, t) = centers(c, t) + spread * rng.normal();
    }
  }
  const auto n_train = static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? ds.train_indices : ds.test_indices).push_back(i);
  }
  return ds;
}

namespace {

// Per-class quotas summing to `total`, proportional to the class counts.
std::vector<std::size_t> proportional_quotas(const std::vector<std::size_t>& counts,
                                             std::size_t total) {
  const std::size_t population = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<std::size_t> quota(counts.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double exact = static_cast<double>(total) * static_cast<double>(counts[c]) /
                         static_cast<double>(population);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(exact - static_cast<double>(quota[c]), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++quota[remainders[r].second];
  return quota;
}

std::vector<std::size_t> draw_stratified(const ImageDataset& ds,
                                         const std::vector<std::size_t>& pool, std::size_t take,
                                         SplitMix64& rng) {
  if (take > pool.size()) {
    throw ParameterError(
        fmt::format("stratified_subsample: asked for {} of {} rows", take, pool.size()));
  }
  const auto c_count = static_cast<std::size_t>(ds.num_classes);
  std::vector<std::vector<std::size_t>> by_class(c_count);
  for (std::size_t i : pool) by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  std::vector<std::size_t> counts(c_count);
  for (std::size_t c = 0; c < c_count; ++c) counts[c] = by_class[c].size();
  const auto quota = proportional_quotas(counts, take);

  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < c_count; ++c) {
    auto& members = by_class[c];
    for (std::size_t t = 0; t < quota[c]; ++t) {
      const std::size_t j = t + rng.uniform_below(members.size() - t);
      std::swap(members[t], members[j]);
      chosen.push_back(members[t]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

ImageDataset stratified_subsample(const ImageDataset& ds, std::size_t n_train,
                                  std::size_t n_test, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto train = draw_stratified(ds, ds.train_indices, n_train, rng);
  const auto test = draw_stratified(ds, ds.test_indices, n_test, rng);

  std::vector<std::size_t> rows = train;
  rows.insert(rows.end(), test.begin(), test.end());
  ImageDataset out;
  out.num_classes = ds.num_classes;
  out.features = select_rows(ds.features, rows);
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.labels.push_back(ds.labels[rows[r]]);
    (r < train.size() ? out.train_indices : out.test_indices).push_back(r);
  }
  return out;
}

}  // namespace hgnn
