#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hgnn/bench/config.hpp"
#include "hgnn/bench/experiment.hpp"
#include "hgnn/bench/table.hpp"
#include "hgnn/checks/property_checks.hpp"
#include "hgnn/error.hpp"
#include "hgnn/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace hgnn;
using namespace hgnn::bench;

namespace {

std::optional<std::size_t> default_pca_dims(const std::string& dataset) {
  if (dataset == "mnist" || dataset == "usps") return 50;
  if (dataset == "fashion") return 300;
  return std::nullopt;
}

std::optional<std::size_t> parse_pca(const std::string& s) {
  if (s == "none") return std::nullopt;
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos == s.size() && v > 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("--pca: expected a positive integer or 'none', got '{}'", s));
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write {}", path.string()));
  out << text;
}

void report_failures(const ExperimentResult& res) {
  for (const CellFailure& f : res.failures) {
    std::cerr << fmt::format("cell failed: method={} noise={} seed={}: {}\n", to_string(f.method),
                             f.noise_level, f.seed, f.message);
  }
}

struct CommonOverrides {
  std::string data_dir;
  std::optional<std::size_t> workers;
  std::string cache_dir;

  void apply(ExperimentConfig& cfg) const {
    apply_environment(cfg);
    if (!data_dir.empty()) cfg.dataset.dir = fs::path(data_dir) / cfg.dataset.name;
    if (workers) cfg.workers = *workers;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    cfg.validate();
  }
};

int cmd_bench(const std::string& config_path, const std::string& out_dir, bool full,
              bool quiet, const CommonOverrides& common) {
  ExperimentConfig cfg = load_config(config_path);
  common.apply(cfg);
  if (full) cfg.dataset.subsample.reset();
  const ProgressFn progress = [&](const ResultRow& r) {
    if (!quiet) {
      std::cerr << fmt::format("{} noise={} seed={} accuracy={:.4f} ({:.1f}s)\n",
                               to_string(r.method), r.noise_level, r.seed, r.accuracy,
                               r.wall_time_seconds);
    }
  };
  const ExperimentResult res = run_experiment(cfg, progress);
  const fs::path out = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(out);
  write_file(out / (cfg.dataset.name + ".csv"), emit_table(res.rows, TableFormat::kCsv));
  const std::string text = res.rows.empty() ? std::string() : emit_table(res.rows, TableFormat::kText);
  write_file(out / (cfg.dataset.name + ".txt"), text);
  std::cout << text;
  report_failures(res);
  return res.failures.empty() ? 0 : 1;
}

int cmd_build_ops(const std::string& config_path, const CommonOverrides& common) {
  ExperimentConfig cfg = load_config(config_path);
  common.apply(cfg);
  if (!cfg.cache_dir) throw UsageError("build-ops: no cache directory (cache_dir or --cache-dir)");
  const PreparedData data = prepare_data(cfg);
  build_operators(cfg, data);
  for (Normalization n : {Normalization::kSym, Normalization::kRw, Normalization::kGraphSym,
                          Normalization::kGcn}) {
    const fs::path p = *cfg.cache_dir / operator_cache_name(cfg, data, n);
    if (fs::exists(p)) std::cout << p.string() << '\n';
  }
  return 0;
}

int cmd_selftest() {
  bool ok = true;
  std::cout << fmt::format("kernels: {}\n", simd::kernels().name);
  for (const auto& r : checks::run_selftest()) {
    ok = ok && r.passed;
    std::cout << fmt::format("{} {} ({:.2f}s): {}\n", r.passed ? "PASS" : "FAIL", r.name,
                             r.seconds, r.detail);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised classification under label noise: graph and hypergraph label "
               "propagation, GCN, HGNN and the feature-propagated HGNN."};
  app.require_subcommand(1);

  CommonOverrides common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data-dir", common.data_dir,
                    "Root holding one directory per dataset (overrides HGNN_DATA_DIR)");
    sub->add_option("--workers", common.workers, "Worker threads (overrides HGNN_WORKERS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", common.cache_dir, "Operator cache directory");
  };

  std::string config_path;
  std::string out_dir;
  bool full = false;
  bool quiet = false;
  auto* bench = app.add_subcommand("bench", "Run the full method x noise x seed grid");
  bench->add_option("--config", config_path, "Experiment config (YAML)")->required();
  bench->add_option("--out", out_dir, "Output directory for <dataset>.csv and <dataset>.txt");
  bench->add_flag("--full", full, "Ignore any subsample in the config and use every image");
  bench->add_flag("-q,--quiet", quiet, "No per-cell progress on stderr");
  add_common(bench);

  std::string run_dataset;
  std::string run_method;
  double run_noise = 0.0;
  std::uint64_t run_seed = 1;
  std::string run_pca;
  std::string run_config;
  std::optional<std::size_t> run_k;
  std::optional<double> run_alpha;
  std::optional<std::size_t> run_epochs;
  auto* run = app.add_subcommand("run", "Run a single cell and print one result row");
  run->add_option("--dataset", run_dataset, "mnist | fashion | usps | synthetic")->required();
  run->add_option("--method", run_method,
                  "graph-ssl | hypergraph-ssl | gcn | hgnn | hgnn-proposed")
      ->required();
  run->add_option("--noise", run_noise, "Noise level in [0, 1)")->required();
  run->add_option("--seed", run_seed, "Noise / training seed")->required();
  run->add_option("--config", run_config, "Base config; the flags above override it");
  run->add_option("--pca", run_pca, "PCA dimensions or 'none' (default per dataset)");
  run->add_option("--k", run_k, "Nearest neighbours");
  run->add_option("--alpha", run_alpha, "Propagation alpha");
  run->add_option("--epochs", run_epochs, "Training epochs");
  add_common(run);

  auto* build_ops = app.add_subcommand("build-ops", "Precompute and cache the operators");
  build_ops->add_option("--config", config_path, "Experiment config (YAML)")->required();
  add_common(build_ops);

  app.add_subcommand("selftest", "Run the small-instance oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*bench) return cmd_bench(config_path, out_dir, full, quiet, common);
    if (*build_ops) return cmd_build_ops(config_path, common);
    if (app.got_subcommand("selftest")) return cmd_selftest();

    ExperimentConfig cfg = run_config.empty() ? ExperimentConfig{} : load_config(run_config);
    const bool dataset_changed = cfg.dataset.name != run_dataset;
    cfg.dataset.name = run_dataset;
    if (dataset_changed) {
      cfg.dataset.dir.clear();
      cfg.pca_dims = default_pca_dims(run_dataset);
    }
    if (!run->get_option("--pca")->empty()) cfg.pca_dims = parse_pca(run_pca);
    const auto method = parse_method(run_method);
    if (!method) throw UsageError(fmt::format("--method: unknown method '{}'", run_method));
    cfg.methods = {*method};
    cfg.noise_levels = {run_noise};
    cfg.seeds = {run_seed};
    if (run_k) cfg.k = *run_k;
    if (run_alpha) cfg.alpha = *run_alpha;
    if (run_epochs) cfg.train.epochs = *run_epochs;
    common.apply(cfg);
    const ExperimentResult res = run_experiment(cfg);
    std::cout << emit_table(res.rows, TableFormat::kCsv);
    report_failures(res);
    return res.failures.empty() ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
