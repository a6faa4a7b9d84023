#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/nn.hpp"

namespace hgnn::bench {

enum class Method { kGraphSsl, kHypergraphSsl, kGcn, kHgnn, kHgnnProposed };

inline constexpr Method kAllMethods[] = {Method::kGraphSsl, Method::kHypergraphSsl, Method::kGcn,
                                         Method::kHgnn, Method::kHgnnProposed};

std::string_view to_string(Method m) noexcept;
std::string_view display_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;

struct SubsampleSpec {
  std::size_t train = 0;
  std::size_t test = 0;
  std::uint64_t seed = 0;
};

struct SyntheticSpec {
  std::size_t n = 300;
  int classes = 3;
  std::size_t dim = 10;
  double spread = 0.1;
  std::uint64_t seed = 1;
};

struct DatasetSpec {
  std::string name = "synthetic";  // mnist | fashion | usps | synthetic
  std::filesystem::path dir;       // directory holding the dataset's files
  std::optional<SubsampleSpec> subsample;
  SyntheticSpec synthetic;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::optional<std::size_t> pca_dims;
  std::size_t k = 5;
  double alpha = 0.99;
  std::vector<double> noise_levels{0.0, 0.15, 0.30, 0.45};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  TrainConfig train;
  Normalization normalization = Normalization::kSym;  // hgnn only
  bool include_centroid = true;
  Sigma graph_sigma;  // nullopt: automatic
  double cg_tol = 1e-6;
  std::size_t cg_max_iter = 1000;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> cache_dir;

  // Throws UsageError naming the offending field.
  void validate() const;
};

inline constexpr int kSchemaVersion = 1;

// YAML document; see docs/config.md for the schema. Errors are UsageError
// with "source:line:column: message".
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies HGNN_DATA_DIR (dataset dir becomes $HGNN_DATA_DIR/<name>) and
// HGNN_WORKERS. Command-line flags are applied after this by the caller.
void apply_environment(ExperimentConfig& cfg);

}  // namespace hgnn::bench
