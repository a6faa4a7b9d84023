#include "hgnn/bench/experiment.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/pca.hpp"
#include "hgnn/rng.hpp"
#include "hgnn/ssl.hpp"

namespace hgnn::bench {

namespace {

ImageDataset load_named(const DatasetSpec& spec) {
  if (spec.name == "synthetic") {
    const auto& s = spec.synthetic;
    return synthetic_blobs(s.n, s.classes, s.dim, s.spread, s.seed);
  }
  if (spec.dir.empty()) {
    throw UsageError(fmt::format("dataset '{}' needs a directory (dataset.dir, --data-dir or "
                                 "HGNN_DATA_DIR)",
                                 spec.name));
  }
  if (spec.name == "usps") {
    return load_usps_dataset(spec.dir / "zip.train", spec.dir / "zip.test");
  }
  return load_idx_directory(spec.dir);
}

PropagationConfig propagation_config(const ExperimentConfig& cfg) {
  PropagationConfig p;
  p.alpha = cfg.alpha;
  p.tol = cfg.cg_tol;
  p.max_iter = cfg.cg_max_iter;
  p.workers = 1;
  return p;
}

// FNV-1a, 64 bit.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool needs(const ExperimentConfig& cfg, Method m) {
  for (Method x : cfg.methods) {
    if (x == m) return true;
  }
  return false;
}

template <typename Build>
PropagationOperator cached(const ExperimentConfig& cfg, const PreparedData& data,
                           Normalization norm, Build build) {
  if (!cfg.cache_dir) return build();
  const auto path = *cfg.cache_dir / operator_cache_name(cfg, data, norm);
  if (std::filesystem::exists(path)) {
    PropagationOperator op = load_operator(path);
    if (op.size() == data.dataset.size() && op.normalization == norm) return op;
  }
  PropagationOperator op = build();
  std::filesystem::create_directories(*cfg.cache_dir);
  save_operator(path, op);
  return op;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& cfg) {
  PreparedData out;
  out.dataset = load_named(cfg.dataset);
  if (cfg.dataset.subsample) {
    const auto& s = *cfg.dataset.subsample;
    out.dataset = stratified_subsample(out.dataset, s.train, s.test, s.seed);
  }
  if (cfg.pca_dims) {
    const PcaModel model = pca_fit(out.dataset.features, *cfg.pca_dims);
    out.dataset.features = pca_transform(model, out.dataset.features);
    out.pca_used = true;
  }
  out.dataset.validate();
  return out;
}

std::string operator_cache_name(const ExperimentConfig& cfg, const PreparedData& data,
                                Normalization normalization) {
  const auto& ds = cfg.dataset;
  std::string key = fmt::format("{}|n={}|m={}|k={}|pca={}|centroid={}|sigma={}", ds.name,
                                data.dataset.size(), data.dataset.features.cols(), cfg.k,
                                cfg.pca_dims ? static_cast<long long>(*cfg.pca_dims) : -1,
                                cfg.include_centroid,
                                cfg.graph_sigma ? fmt::format("{}", *cfg.graph_sigma) : "auto");
  if (ds.subsample) {
    key += fmt::format("|sub={},{},{}", ds.subsample->train, ds.subsample->test,
                       ds.subsample->seed);
  }
  if (ds.name == "synthetic") {
    const auto& s = ds.synthetic;
    key += fmt::format("|syn={},{},{},{},{}", s.n, s.classes, s.dim, s.spread, s.seed);
  }
  return fmt::format("{}-{}-{:016x}.csr", ds.name, to_string(normalization), fnv1a(key));
}

SharedOperators build_operators(const ExperimentConfig& cfg, const PreparedData& data) {
  SharedOperators ops;
  const DenseMatrix& x = data.dataset.features;
  std::optional<KnnTable> knn;
  auto table = [&]() -> const KnnTable& {
    if (!knn) knn = knn_indices(x, cfg.k);
    return *knn;
  };
  auto hypergraph_op = [&](Normalization norm) {
    return cached(cfg, data, norm, [&] {
      return hypergraph_operator(build_knn_hypergraph(table(), cfg.include_centroid), norm);
    });
  };

  const bool want_sym = needs(cfg, Method::kHypergraphSsl) || needs(cfg, Method::kHgnnProposed) ||
                        (needs(cfg, Method::kHgnn) && cfg.normalization == Normalization::kSym);
  if (want_sym) ops.hypergraph_sym = hypergraph_op(Normalization::kSym);
  if (needs(cfg, Method::kHgnn)) {
    ops.hypergraph_net = cfg.normalization == Normalization::kSym
                             ? *ops.hypergraph_sym
                             : hypergraph_op(cfg.normalization);
  }
  if (needs(cfg, Method::kGraphSsl)) {
    ops.graph = cached(cfg, data, Normalization::kGraphSym,
                       [&] { return build_knn_graph(table(), cfg.graph_sigma); });
  }
  if (needs(cfg, Method::kGcn)) {
    ops.gcn = cached(cfg, data, Normalization::kGcn,
                     [&] { return gcn_operator(table(), cfg.graph_sigma); });
  }
  if (needs(cfg, Method::kHgnnProposed)) {
    PropagationConfig p = propagation_config(cfg);
    p.workers = cfg.workers;
    ops.propagated_features = propagate_features(*ops.hypergraph_sym, x, p);
  }
  return ops;
}

ResultRow run_cell(const ExperimentConfig& cfg, const PreparedData& data,
                   const SharedOperators& ops, Method method, double level, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const ImageDataset& ds = data.dataset;
  const NoisySplit split = inject_noise(ds, level, seed);
  const auto& train_rows = ds.train_indices;

  auto require = [&](const auto& opt, std::string_view what) -> const auto& {
    if (!opt) throw ParameterError(fmt::format("{} was not built for this experiment", what));
    return *opt;
  };

  std::vector<int> pred;
  switch (method) {
    case Method::kGraphSsl:
    case Method::kHypergraphSsl: {
      const PropagationOperator& op = method == Method::kGraphSsl
                                          ? require(ops.graph, "graph operator")
                                          : require(ops.hypergraph_sym, "hypergraph operator");
      const LabelMatrix y =
          encode_labels(split, train_rows, ds.num_classes, LabelScheme::kPlusMinusOne);
      pred = decode_predictions(propagate_labels(op, y, propagation_config(cfg)));
      break;
    }
    case Method::kGcn:
    case Method::kHgnn:
    case Method::kHgnnProposed: {
      const PropagationOperator* op = nullptr;
      const DenseMatrix* x = &ds.features;
      if (method == Method::kGcn) {
        op = &require(ops.gcn, "gcn operator");
      } else if (method == Method::kHgnn) {
        op = &require(ops.hypergraph_net, "hypergraph operator");
      } else {
        op = &require(ops.hypergraph_sym, "hypergraph operator");
        x = &require(ops.propagated_features, "propagated features");
      }
      const LabelMatrix y = encode_labels(split, train_rows, ds.num_classes, LabelScheme::kOneHot);
      TrainConfig tc = cfg.train;
      tc.seed = mix_seed(cfg.train.seed, seed);
      tc.log = nullptr;
      const TwoLayerParams params = train(*op, *x, y, train_rows, tc);
      pred = predict(*op, *x, params);
      break;
    }
  }

  ResultRow row;
  row.dataset = cfg.dataset.name;
  row.method = method;
  row.noise_level = level;
  row.seed = seed;
  row.accuracy = accuracy(pred, ds.labels, ds.test_indices);
  row.pca_used = data.pca_used;
  row.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const PreparedData& data,
                                const SharedOperators& ops, const ProgressFn& progress) {
  struct Cell {
    Method method;
    double level;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Method m : cfg.methods) {
    for (double level : cfg.noise_levels) {
      for (std::uint64_t s : cfg.seeds) cells.push_back({m, level, s});
    }
  }

  std::vector<std::optional<ResultRow>> rows(cells.size());
  std::vector<std::optional<std::string>> errors(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      try {
        rows[i] = run_cell(cfg, data, ops, c.method, c.level, c.seed);
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(*rows[i]);
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.workers, cells.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (rows[i]) {
      result.rows.push_back(std::move(*rows[i]));
    } else {
      result.failures.push_back(
          {cells[i].method, cells[i].level, cells[i].seed, errors[i].value_or("unknown error")});
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  const PreparedData data = prepare_data(cfg);
  const SharedOperators ops = build_operators(cfg, data);
  return run_experiment(cfg, data, ops, progress);
}

}  // namespace hgnn::bench
