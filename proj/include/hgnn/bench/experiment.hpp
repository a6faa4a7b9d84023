#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hgnn/bench/config.hpp"
#include "hgnn/dataset.hpp"

namespace hgnn::bench {

struct ResultRow {
  std::string dataset;
  Method method = Method::kGraphSsl;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double wall_time_seconds = 0.0;
  bool pca_used = false;
};

struct CellFailure {
  Method method;
  double noise_level;
  std::uint64_t seed;
  std::string message;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // grid order: method, level, seed
  std::vector<CellFailure> failures;
};

// Dataset after loading, optional subsampling and optional PCA.
struct PreparedData {
  ImageDataset dataset;  // features replaced by the PCA projection when used
  bool pca_used = false;
};

PreparedData prepare_data(const ExperimentConfig& cfg);

// Operators and smoothed features shared by every cell of one experiment.
struct SharedOperators {
  std::optional<PropagationOperator> hypergraph_sym;
  std::optional<PropagationOperator> hypergraph_net;  // cfg.normalization
  std::optional<PropagationOperator> graph;
  std::optional<PropagationOperator> gcn;
  std::optional<DenseMatrix> propagated_features;
};

// Builds what cfg.methods need. With cfg.cache_dir set, operators are read
// from the cache when present and written to it otherwise.
SharedOperators build_operators(const ExperimentConfig& cfg, const PreparedData& data);

// Stable cache file name for one operator of this configuration.
std::string operator_cache_name(const ExperimentConfig& cfg, const PreparedData& data,
                                Normalization normalization);

using ProgressFn = std::function<void(const ResultRow&)>;

// One (method, level, seed) cell; throws on failure.
ResultRow run_cell(const ExperimentConfig& cfg, const PreparedData& data,
                   const SharedOperators& ops, Method method, double level, std::uint64_t seed);

// Full grid over cfg.workers threads. A failing cell is recorded in
// `failures` with its coordinates and the rest still run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});
ExperimentResult run_experiment(const ExperimentConfig& cfg, const PreparedData& data,
                                const SharedOperators& ops, const ProgressFn& progress = {});

}  // namespace hgnn::bench
