#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

// Flattened images with class labels. Rows listed in train_indices come
// first (they are the labeled set); test_indices are evaluated.
struct ImageDataset {
  DenseMatrix features;  // n x m
  std::vector<int> labels;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  int num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }

  // Throws FormatError on a broken partition, label range or non-finite
  // feature.
  void validate() const;
};

// MNIST / Fashion-MNIST IDX files (magic 2051 for images, 2049 for labels).
// Pixels are divided by 255; image (r, c) lands in column r * width + c.
ImageDataset load_idx_dataset(const std::filesystem::path& train_images,
                              const std::filesystem::path& train_labels,
                              const std::filesystem::path& test_images,
                              const std::filesystem::path& test_labels);

// Standard file names inside `dir`: {train,t10k}-{images-idx3,labels-idx1}-ubyte.
ImageDataset load_idx_directory(const std::filesystem::path& dir);

// USPS "zip.train / zip.test" text layout: one image per line, label first
// (a real, truncated to int) then 256 pixel values in [-1, 1], kept as-is.
ImageDataset load_usps_dataset(const std::filesystem::path& train_path,
                               const std::filesystem::path& test_path);

// Raw readers and writers for a single split; the writers exist so tests can
// round-trip and build fixtures.
struct IdxImages {
  std::size_t count = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;  // count * height * width
};
IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);
void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

struct UspsRows {
  DenseMatrix features;
  std::vector<int> labels;
};
UspsRows read_usps_file(const std::filesystem::path& path);
void write_usps_file(const std::filesystem::path& path, const DenseMatrix& features,
                     const std::vector<int>& labels);

// Isotropic Gaussian clusters, balanced classes (class of row i is i mod C),
// centers pairwise >= 10 * spread apart, 70/30 train/test split.
ImageDataset synthetic_blobs(std::size_t n, int num_classes, std::size_t dim, double spread,
                             std::uint64_t seed);

// Seeded class-stratified subsample: n_train rows drawn from train_indices and
// n_test from test_indices, per-class quotas proportional to class frequency
// (largest remainder). Train rows again precede test rows in the result.
ImageDataset stratified_subsample(const ImageDataset& ds, std::size_t n_train,
                                  std::size_t n_test, std::uint64_t seed);

}  // namespace hgnn
