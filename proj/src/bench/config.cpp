#include "hgnn/bench/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "hgnn/error.hpp"

namespace hgnn::bench {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::kGraphSsl:
      return "graph-ssl";
    case Method::kHypergraphSsl:
      return "hypergraph-ssl";
    case Method::kGcn:
      return "gcn";
    case Method::kHgnn:
      return "hgnn";
    case Method::kHgnnProposed:
      return "hgnn-proposed";
  }
  return "?";
}

std::string_view display_name(Method m) noexcept {
  switch (m) {
    case Method::kGraphSsl:
      return "Graph based semi-supervised learning";
    case Method::kHypergraphSsl:
      return "Hypergraph based semi-supervised learning";
    case Method::kGcn:
      return "Graph neural network";
    case Method::kHgnn:
      return "Hypergraph neural network";
    case Method::kHgnnProposed:
      return "Proposed hypergraph neural network";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> kNames{"mnist", "fashion", "usps", "synthetic"};
  if (!kNames.count(dataset.name)) {
    throw UsageError(fmt::format("dataset.name: unknown dataset '{}'", dataset.name));
  }
  if (methods.empty()) throw UsageError("methods: at least one method is required");
  if (seeds.empty()) throw UsageError("seeds: at least one seed is required");
  if (noise_levels.empty()) throw UsageError("noise_levels: at least one level is required");
  for (double l : noise_levels) {
    if (!(l >= 0.0 && l < 1.0)) throw UsageError(fmt::format("noise_levels: {} not in [0, 1)", l));
  }
  if (k < 1) throw UsageError("k: must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha: must lie strictly inside (0, 1)");
  if (pca_dims && *pca_dims < 1) throw UsageError("pca_dims: must be at least 1");
  if (normalization != Normalization::kSym && normalization != Normalization::kRw) {
    throw UsageError("normalization: must be sym or rw");
  }
  if (graph_sigma && !(*graph_sigma > 0.0)) throw UsageError("graph_sigma: must be positive");
  if (!(cg_tol > 0.0) || cg_max_iter < 1) throw UsageError("cg: need tol > 0, max_iter >= 1");
  if (!(train.learning_rate >= 0.0) || train.epochs < 1 || train.hidden < 1) {
    throw UsageError("train: need learning_rate >= 0, epochs >= 1, hidden >= 1");
  }
  if (workers < 1) throw UsageError("workers: must be at least 1");
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const YAML::Node& node, std::string_view msg) const {
    const YAML::Mark mark = node.Mark();
    if (mark.is_null()) throw UsageError(fmt::format("{}: {}", source_, msg));
    throw UsageError(fmt::format("{}:{}:{}: {}", source_, mark.line + 1, mark.column + 1, msg));
  }

  void require_map(const YAML::Node& node, std::string_view what) const {
    if (!node.IsMap()) fail(node, fmt::format("{} must be a mapping", what));
  }

  void only_keys(const YAML::Node& node, std::string_view section,
                 std::initializer_list<std::string_view> allowed) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) {
        fail(kv.first, section.empty() ? fmt::format("unknown key '{}'", key)
                                       : fmt::format("unknown key '{}' in {}", key, section));
      }
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, std::string_view what) const {
    if (!node.IsScalar()) fail(node, fmt::format("{} must be a scalar", what));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("{}: cannot read '{}' as {}", what, node.Scalar(), type_name<T>()));
    }
  }

  template <typename T>
  std::vector<T> list(const YAML::Node& node, std::string_view what) const {
    if (!node.IsSequence()) fail(node, fmt::format("{} must be a list", what));
    std::vector<T> out;
    for (const auto& item : node) out.push_back(scalar<T>(item, what));
    return out;
  }

 private:
  template <typename T>
  static constexpr std::string_view type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else return "a string";
  }

  std::string source_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  Parser p(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw UsageError(fmt::format("{}:{}:{}: {}", source, e.mark.line + 1, e.mark.column + 1,
                                 e.msg));
  }
  if (!root.IsMap()) throw UsageError(fmt::format("{}: top level must be a mapping", source));
  p.only_keys(root, "",
              {"schema_version", "dataset", "pca_dims", "k", "alpha", "noise_levels", "seeds",
               "methods", "train", "normalization", "include_centroid", "graph_sigma", "cg",
               "workers", "cache_dir"});

  const YAML::Node version = root["schema_version"];
  if (!version) throw UsageError(fmt::format("{}: missing schema_version", source));
  if (p.scalar<int>(version, "schema_version") != kSchemaVersion) {
    p.fail(version, fmt::format("unsupported schema_version (expected {})", kSchemaVersion));
  }

  ExperimentConfig cfg;
  if (const auto ds = root["dataset"]) {
    p.require_map(ds, "dataset");
    p.only_keys(ds, "dataset", {"name", "dir", "subsample", "synthetic"});
    if (const auto v = ds["name"]) cfg.dataset.name = p.scalar<std::string>(v, "dataset.name");
    if (const auto v = ds["dir"]) cfg.dataset.dir = p.scalar<std::string>(v, "dataset.dir");
    if (const auto sub = ds["subsample"]) {
      p.require_map(sub, "dataset.subsample");
      p.only_keys(sub, "dataset.subsample", {"train", "test", "seed"});
      SubsampleSpec s;
      if (!sub["train"] || !sub["test"]) p.fail(sub, "dataset.subsample needs train and test");
      s.train = p.scalar<std::size_t>(sub["train"], "dataset.subsample.train");
      s.test = p.scalar<std::size_t>(sub["test"], "dataset.subsample.test");
      if (const auto v = sub["seed"]) s.seed = p.scalar<std::uint64_t>(v, "dataset.subsample.seed");
      cfg.dataset.subsample = s;
    }
    if (const auto syn = ds["synthetic"]) {
      p.require_map(syn, "dataset.synthetic");
      p.only_keys(syn, "dataset.synthetic", {"n", "classes", "dim", "spread", "seed"});
      auto& s = cfg.dataset.synthetic;
      if (const auto v = syn["n"]) s.n = p.scalar<std::size_t>(v, "dataset.synthetic.n");
      if (const auto v = syn["classes"]) s.classes = p.scalar<int>(v, "dataset.synthetic.classes");
      if (const auto v = syn["dim"]) s.dim = p.scalar<std::size_t>(v, "dataset.synthetic.dim");
      if (const auto v = syn["spread"]) s.spread = p.scalar<double>(v, "dataset.synthetic.spread");
      if (const auto v = syn["seed"]) s.seed = p.scalar<std::uint64_t>(v, "dataset.synthetic.seed");
    }
  }
  if (const auto v = root["pca_dims"]) {
    if (v.IsNull() || (v.IsScalar() && v.Scalar() == "none")) {
      cfg.pca_dims.reset();
    } else {
      cfg.pca_dims = p.scalar<std::size_t>(v, "pca_dims");
    }
  }
  if (const auto v = root["k"]) cfg.k = p.scalar<std::size_t>(v, "k");
  if (const auto v = root["alpha"]) cfg.alpha = p.scalar<double>(v, "alpha");
  if (const auto v = root["noise_levels"]) cfg.noise_levels = p.list<double>(v, "noise_levels");
  if (const auto v = root["seeds"]) cfg.seeds = p.list<std::uint64_t>(v, "seeds");
  if (const auto v = root["methods"]) {
    if (!v.IsSequence()) p.fail(v, "methods must be a list");
    cfg.methods.clear();
    for (const auto& item : v) {
      const auto name = p.scalar<std::string>(item, "methods");
      const auto m = parse_method(name);
      if (!m) p.fail(item, fmt::format("unknown method '{}'", name));
      cfg.methods.push_back(*m);
    }
  }
  if (const auto v = root["normalization"]) {
    const auto s = p.scalar<std::string>(v, "normalization");
    const auto n = parse_normalization(s);
    if (!n || (*n != Normalization::kSym && *n != Normalization::kRw)) {
      p.fail(v, fmt::format("normalization must be sym or rw, got '{}'", s));
    }
    cfg.normalization = *n;
  }
  if (const auto v = root["include_centroid"]) {
    cfg.include_centroid = p.scalar<bool>(v, "include_centroid");
  }
  if (const auto v = root["graph_sigma"]) {
    if (v.IsScalar() && v.Scalar() == "auto") {
      cfg.graph_sigma.reset();
    } else {
      cfg.graph_sigma = p.scalar<double>(v, "graph_sigma");
    }
  }
  if (const auto cg = root["cg"]) {
    p.require_map(cg, "cg");
    p.only_keys(cg, "cg", {"tol", "max_iter"});
    if (const auto v = cg["tol"]) cfg.cg_tol = p.scalar<double>(v, "cg.tol");
    if (const auto v = cg["max_iter"]) cfg.cg_max_iter = p.scalar<std::size_t>(v, "cg.max_iter");
  }
  if (const auto tr = root["train"]) {
    p.require_map(tr, "train");
    p.only_keys(tr, "train",
                {"hidden", "learning_rate", "epochs", "weight_decay", "seed", "adam_beta1",
                 "adam_beta2", "adam_eps"});
    auto& t = cfg.train;
    if (const auto v = tr["hidden"]) t.hidden = p.scalar<std::size_t>(v, "train.hidden");
    if (const auto v = tr["learning_rate"]) t.learning_rate = p.scalar<double>(v, "train.learning_rate");
    if (const auto v = tr["epochs"]) t.epochs = p.scalar<std::size_t>(v, "train.epochs");
    if (const auto v = tr["weight_decay"]) t.weight_decay = p.scalar<double>(v, "train.weight_decay");
    if (const auto v = tr["seed"]) t.seed = p.scalar<std::uint64_t>(v, "train.seed");
    if (const auto v = tr["adam_beta1"]) t.adam_beta1 = p.scalar<double>(v, "train.adam_beta1");
    if (const auto v = tr["adam_beta2"]) t.adam_beta2 = p.scalar<double>(v, "train.adam_beta2");
    if (const auto v = tr["adam_eps"]) t.adam_eps = p.scalar<double>(v, "train.adam_eps");
  }
  if (const auto v = root["workers"]) cfg.workers = p.scalar<std::size_t>(v, "workers");
  if (const auto v = root["cache_dir"]) cfg.cache_dir = p.scalar<std::string>(v, "cache_dir");

  try {
    cfg.validate();
  } catch (const UsageError& e) {
    throw UsageError(fmt::format("{}: {}", source, e.what()));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("{}: cannot open config file", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str(), path.string());
  // Relative dataset/cache directories are taken relative to the config file.
  const auto base = path.parent_path();
  if (!cfg.dataset.dir.empty() && cfg.dataset.dir.is_relative()) cfg.dataset.dir = base / cfg.dataset.dir;
  if (cfg.cache_dir && cfg.cache_dir->is_relative()) cfg.cache_dir = base / *cfg.cache_dir;
  return cfg;
}

void apply_environment(ExperimentConfig& cfg) {
  if (const char* root = std::getenv("HGNN_DATA_DIR"); root && *root) {
    cfg.dataset.dir = std::filesystem::path(root) / cfg.dataset.name;
  }
  if (const char* w = std::getenv("HGNN_WORKERS"); w && *w) {
    char* end = nullptr;
    const long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError(fmt::format("HGNN_WORKERS: bad value '{}'", w));
    cfg.workers = static_cast<std::size_t>(v);
  }
}

}  // namespace hgnn::bench
