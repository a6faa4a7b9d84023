#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>

#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"
#include "hgnn/labels.hpp"

using namespace hgnn;

namespace {

// n rows, all in train (first n_train) or test; label i mod C.
ImageDataset label_only_dataset(std::size_t n_train, std::size_t n_test, int classes) {
  ImageDataset ds;
  const std::size_t n = n_train + n_test;
  ds.features = DenseMatrix(n, 1);
  ds.num_classes = classes;
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels.push_back(static_cast<int>(i % static_cast<std::size_t>(classes)));
    (i < n_train ? ds.train_indices : ds.test_indices).push_back(i);
  }
  return ds;
}

}  // namespace

TEST(InjectNoise, LevelZeroIsIdentity) {
  const ImageDataset ds = label_only_dataset(100, 20, 4);
  const NoisySplit s = inject_noise(ds, 0.0, 7);
  EXPECT_TRUE(s.flipped.empty());
  EXPECT_EQ(s.noisy_labels, ds.labels);
}

TEST(InjectNoise, ExactCountAndEveryFlipDiffers) {
  const ImageDataset ds = label_only_dataset(1000, 300, 10);
  const NoisySplit s = inject_noise(ds, 0.45, 3);
  ASSERT_EQ(s.flipped.size(), 450u);
  EXPECT_TRUE(std::is_sorted(s.flipped.begin(), s.flipped.end()));
  std::size_t diff = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) diff += s.noisy_labels[i] != ds.labels[i];
  EXPECT_EQ(diff, 450u);
  for (std::size_t i : s.flipped) {
    EXPECT_LT(i, 1000u);
    EXPECT_NE(s.noisy_labels[i], ds.labels[i]);
  }
  for (std::size_t i = 1000; i < 1300; ++i) EXPECT_EQ(s.noisy_labels[i], ds.labels[i]);
}

TEST(InjectNoise, CountUsesRounding) {
  const ImageDataset ds = label_only_dataset(7, 0, 3);
  EXPECT_EQ(inject_noise(ds, 0.15, 1).flipped.size(), 1u);  // 1.05
  EXPECT_EQ(inject_noise(ds, 0.30, 1).flipped.size(), 2u);  // 2.1
  EXPECT_EQ(inject_noise(ds, 0.45, 1).flipped.size(), 3u);  // 3.15
  EXPECT_EQ(inject_noise(ds, 0.5, 1).flipped.size(), 4u);   // 3.5 rounds away from zero
}

TEST(InjectNoise, ReproducibleAndSeedSensitive) {
  const ImageDataset ds = label_only_dataset(500, 0, 5);
  const NoisySplit a = inject_noise(ds, 0.3, 11);
  const NoisySplit b = inject_noise(ds, 0.3, 11);
  const NoisySplit c = inject_noise(ds, 0.3, 12);
  EXPECT_EQ(a.noisy_labels, b.noisy_labels);
  EXPECT_EQ(a.flipped, b.flipped);
  EXPECT_NE(a.flipped, c.flipped);
  // Levels draw from independent streams, not nested subsets.
  const NoisySplit d = inject_noise(ds, 0.15, 11);
  EXPECT_FALSE(std::includes(a.flipped.begin(), a.flipped.end(), d.flipped.begin(),
                             d.flipped.end()));
}

TEST(InjectNoise, ReplacementClassesAreUniform) {
  const ImageDataset ds = label_only_dataset(10000, 0, 10);
  const NoisySplit s = inject_noise(ds, 0.30, 2024);
  ASSERT_EQ(s.flipped.size(), 3000u);
  // Joint table (clean, replacement) over the 9 admissible replacements of
  // each clean class.
  std::vector<std::vector<double>> counts(10, std::vector<double>(10, 0.0));
  std::vector<double> per_clean(10, 0.0);
  for (std::size_t i : s.flipped) {
    counts[ds.labels[i]][s.noisy_labels[i]] += 1;
    per_clean[ds.labels[i]] += 1;
  }
  double chi2 = 0.0;
  for (int c = 0; c < 10; ++c) {
    const double expected = per_clean[c] / 9.0;
    for (int r = 0; r < 10; ++r) {
      if (r == c) continue;
      chi2 += (counts[c][r] - expected) * (counts[c][r] - expected) / expected;
    }
  }
  // 0.999 quantile of chi-square with 10 * 8 = 80 degrees of freedom.
  EXPECT_LT(chi2, 124.839);
}

TEST(InjectNoise, RejectsBadLevel) {
  const ImageDataset ds = label_only_dataset(10, 0, 2);
  EXPECT_THROW(inject_noise(ds, 1.0, 1), ParameterError);
  EXPECT_THROW(inject_noise(ds, -0.1, 1), ParameterError);
}

TEST(EncodeLabels, PlusMinusOneAndOneHot) {
  const std::vector<int> labels{0, 1, 1};
  const std::vector<std::size_t> labeled{0, 1};
  EXPECT_EQ(encode_labels(labels, labeled, 2, LabelScheme::kPlusMinusOne).values,
            (DenseMatrix{{1, -1}, {-1, 1}, {0, 0}}));
  EXPECT_EQ(encode_labels(labels, labeled, 2, LabelScheme::kOneHot).values,
            (DenseMatrix{{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_EQ(encode_labels(labels, {}, 2, LabelScheme::kOneHot).values, DenseMatrix(3, 2));
}

TEST(EncodeLabels, UsesNoisyLabelsAndValidates) {
  const ImageDataset ds = label_only_dataset(20, 5, 3);
  const NoisySplit s = inject_noise(ds, 0.45, 5);
  const LabelMatrix y = encode_labels(s, ds.train_indices, 3, LabelScheme::kOneHot);
  EXPECT_EQ(decode_predictions(select_rows(y.values, ds.train_indices)),
            std::vector<int>(s.noisy_labels.begin(), s.noisy_labels.begin() + 20));
  const std::vector<int> bad{0, 3};
  const std::vector<std::size_t> both{0, 1};
  EXPECT_THROW(encode_labels(bad, both, 3, LabelScheme::kOneHot), ParameterError);
  const std::vector<std::size_t> out_of_range{5};
  EXPECT_THROW(encode_labels(bad, out_of_range, 4, LabelScheme::kOneHot), ParameterError);
}

TEST(EncodeLabels, DecodeIsLosslessOnLabeledRows) {
  std::vector<int> labels(50);
  for (std::size_t i = 0; i < 50; ++i) labels[i] = static_cast<int>((i * 7) % 6);
  std::vector<std::size_t> labeled(30);
  std::iota(labeled.begin(), labeled.end(), 10);
  for (LabelScheme scheme : {LabelScheme::kPlusMinusOne, LabelScheme::kOneHot}) {
    const std::vector<int> pred = decode_predictions(encode_labels(labels, labeled, 6, scheme).values);
    for (std::size_t i : labeled) EXPECT_EQ(pred[i], labels[i]);
  }
}

TEST(DecodePredictions, ArgmaxTiesAndErrors) {
  EXPECT_EQ(decode_predictions(DenseMatrix{{0.9, 0.1}, {0.2, 0.8}}), (std::vector<int>{0, 1}));
  EXPECT_EQ(decode_predictions(DenseMatrix{{0.3, 0.3, 0.3}}), (std::vector<int>{0}));
  EXPECT_EQ(decode_predictions(DenseMatrix{{0.1, 0.5, 0.5}}), (std::vector<int>{1}));
  EXPECT_THROW(decode_predictions(DenseMatrix{{std::nan(""), 1.0}}), NumericalError);
  EXPECT_THROW(decode_predictions(DenseMatrix{{1.0}}), ParameterError);
}

TEST(Accuracy, Examples) {
  const std::vector<int> a{0, 1, 2, 0};
  const std::vector<int> b{0, 1, 1, 1};
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const std::vector<std::size_t> shuffled{3, 1, 0, 2};
  EXPECT_EQ(accuracy(a, a, all), 1.0);
  EXPECT_EQ(accuracy(a, b, all), 0.5);
  EXPECT_EQ(accuracy(a, b, shuffled), 0.5);
  const std::vector<int> x{0, 1, 0};
  const std::vector<int> y{1, 0, 1};
  const std::vector<std::size_t> three{0, 1, 2};
  EXPECT_EQ(accuracy(x, y, three), 0.0);
  EXPECT_THROW(accuracy(a, b, {}), ParameterError);
}
